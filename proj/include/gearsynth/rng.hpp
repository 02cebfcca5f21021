#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gearsynth {

/**
 * Counter-based seedable generator. Trial i derives its stream from
 * (seed, i), so results are identical for any partitioning of trials
 * across workers.
 */
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial) {
        state_ = mix(seed ^ mix(trial + 0x9e3779b97f4a7c15ULL));
        if (state_ == 0) state_ = 0x106689d45497fdb5ULL;
    }

    std::uint64_t next_u64() {
        // splitmix64 step
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // Number of Bernoulli(p) attempts up to and including the first success.
    // Inverse-transform sampling: exactly one uniform per draw.
    long geometric(double p) {
        if (p >= 1.0) return 1;
        if (p <= 0.0) throw std::invalid_argument("geometric: p must be positive");
        double u = 1.0 - next_double(); // (0, 1]
        double n = std::floor(std::log(u) / std::log1p(-p));
        if (n > 1e18) throw std::overflow_error("geometric: implausible draw");
        return 1 + static_cast<long>(n);
    }

    bool bernoulli(double p) { return next_double() < p; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }

    std::uint64_t state_;
};

} // namespace gearsynth
