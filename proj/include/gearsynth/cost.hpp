#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "gearsynth/gearbox.hpp"
#include "gearsynth/rng.hpp"

namespace gearsynth {

/**
 * Sample statistics of a T-count distribution, with the matching analytic
 * values carried alongside when available. Percentiles are nearest-rank on
 * the sorted sample.
 */
struct CostStats {
    long samples = 0;
    double mean = 0.0;
    double variance = 0.0;
    std::map<double, double> percentiles; // percentile -> value
    std::optional<double> analytic_mean;
    std::optional<double> analytic_variance_bound;

    double percentile(double p) const { return percentiles.at(p); }
    double stderr_mean() const {
        return samples > 1 ? std::sqrt(variance / samples) : 0.0;
    }
};

inline CostStats summarize_samples(std::vector<double> xs,
                                   std::initializer_list<double> pcts = {2.5, 50.0, 97.5}) {
    CostStats s;
    s.samples = static_cast<long>(xs.size());
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / s.samples;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = s.samples > 1 ? ss / (s.samples - 1) : 0.0;
    std::sort(xs.begin(), xs.end());
    for (double p : pcts) {
        long rank = static_cast<long>(std::ceil(p / 100.0 * s.samples));
        rank = std::clamp(rank, 1L, s.samples);
        s.percentiles[p] = xs[rank - 1];
    }
    return s;
}

// Deterministic trial runner: trial i always uses the stream (seed, i), so
// the result is independent of the worker count.
inline std::vector<double> run_trials(long trials, std::uint64_t seed, int jobs,
                                      const std::function<double(TrialRng&)>& fn) {
    if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(trials));
    auto worker = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            TrialRng rng(seed, static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] = fn(rng);
        }
    };
    if (jobs <= 1 || trials < 1000) {
        worker(0, trials);
    } else {
        std::vector<std::thread> threads;
        long chunk = (trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            long lo = j * chunk;
            long hi = std::min(trials, lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back(worker, lo, hi);
        }
        for (auto& t : threads) t.join();
    }
    return out;
}

/**
 * LevelProb: success probability of the q-th composed-gearbox level,
 * P_q = sin⁴φ_q + cos⁴φ_q with φ_q = tan⁻¹(tan^{2^{q−1}} θ₀).
 */
struct LevelProb {
    long q = 1;
    double P = 1.0;
};

inline Angle level_angle(const Angle& theta0, long q) {
    if (q < 1) throw std::invalid_argument("level_angle: q must be >= 1");
    return q == 1 ? theta0 : composed_angle(theta0, q - 1);
}

inline LevelProb level_prob(const Angle& theta0, long q) {
    return LevelProb{q, gearbox_success_prob(level_angle(theta0, q))};
}

inline std::vector<double> level_probs(const Angle& theta0, long d) {
    std::vector<double> P(static_cast<std::size_t>(d));
    for (long q = 1; q <= d; ++q) P[static_cast<std::size_t>(q - 1)] = level_prob(theta0, q).P;
    return P;
}

inline void require_theta0(const Angle& theta0) {
    if (theta0.is_zero() || theta0.radians <= 0.0 || theta0.radians >= kPi / 4) {
        throw std::invalid_argument("theta0 must lie in (0, pi/4)");
    }
}

// Failure bound for the ancilla-assisted composed gearbox:
// (1 − cos 4θ₀)/4 + 2 tan⁴θ₀ / (1 − tan²θ₀).
inline double ancilla_fail_bound(const Angle& theta0) {
    require_theta0(theta0);
    double t2 = std::tan(theta0.radians);
    t2 *= t2;
    return (1.0 - std::cos(4.0 * theta0.radians)) / 4.0 + 2.0 * t2 * t2 / (1.0 - t2);
}

// Trial-count moment bounds for the ancilla-assisted mode (closed form).
inline std::pair<double, double> ancilla_trial_moments(const Angle& theta0) {
    require_theta0(theta0);
    double t2 = std::tan(theta0.radians);
    t2 *= t2;
    double tail = 2.0 * t2 * t2 / (1.0 - t2);
    double denom = (3.0 + std::cos(4.0 * theta0.radians)) / 4.0 + tail;
    double num = (1.0 - std::cos(4.0 * theta0.radians)) / 4.0 - tail;
    return {1.0 / denom, num / (denom * denom)};
}

// E(n_d) = 2^d / (P₁ ⋯ P_d): expected applications of the base unitary and
// its adjoint in one full (unassisted) realization of the composed gearbox.
inline double expected_n(const Angle& theta0, long d) {
    require_theta0(theta0);
    double prod = 1.0;
    for (double p : level_probs(theta0, d)) prod *= p;
    return std::ldexp(1.0, static_cast<int>(d)) / prod;
}

// Upper bound on V(n_d).
inline double variance_n_bound(const Angle& theta0, long d) {
    require_theta0(theta0);
    auto P = level_probs(theta0, d);
    double prod = 1.0;
    for (double p : P) prod *= p;
    double lead = std::ldexp(1.0, static_cast<int>(2 * d + 1)) * (1.0 - P[0]) / (prod * prod);
    return lead * (1.0 + prod / (std::ldexp(1.0, static_cast<int>(d)) * P[0]));
}

// Exact V(n_d) from the recursion V(x_q) = 2V(x_{q−1})/P_q + 4^{q−1}(1−P_q)/Π²
// (used by tests as a tighter cross-check than the closed-form bound).
inline double exact_variance_n(const Angle& theta0, long d) {
    require_theta0(theta0);
    auto P = level_probs(theta0, d);
    double v = (1.0 - P[0]) / (P[0] * P[0]); // V(x_1)
    double prod_sq = P[0] * P[0];
    for (long q = 2; q <= d; ++q) {
        double pq = P[static_cast<std::size_t>(q - 1)];
        prod_sq *= pq * pq;
        v = 2.0 * v / pq +
            std::ldexp(1.0, static_cast<int>(2 * (q - 1))) * (1.0 - pq) / prod_sq;
    }
    return 4.0 * v;
}

namespace detail {

// Branching retry sample: x_q applications of the base pair needed to
// realize level q once; every attempt at level q consumes two fresh
// level-(q−1) realizations.
inline long sample_x(const std::vector<double>& P, long q, TrialRng& rng) {
    if (q == 1) return rng.geometric(P[0]);
    long n = rng.geometric(P[static_cast<std::size_t>(q - 1)]);
    long x = 0;
    for (long i = 0; i < n; ++i) {
        x += sample_x(P, q - 1, rng) + sample_x(P, q - 1, rng);
    }
    return x;
}

} // namespace detail

/**
 * Monte-Carlo distribution of n_d (base-unitary applications) for the
 * unassisted composed gearbox. Deterministic given (seed, trials).
 */
inline CostStats simulate_composed(const Angle& theta0, long d, long trials,
                                   std::uint64_t seed, int jobs = 1) {
    require_theta0(theta0);
    auto P = level_probs(theta0, d);
    auto xs = run_trials(trials, seed, jobs, [&](TrialRng& rng) {
        return 2.0 * detail::sample_x(P, d, rng);
    });
    CostStats s = summarize_samples(std::move(xs));
    s.analytic_mean = expected_n(theta0, d);
    s.analytic_variance_bound = variance_n_bound(theta0, d);
    return s;
}

/**
 * Statistics of the ancilla-assisted (offline) execution: per-level retry
 * counts are geometric; the final-level retry count is the online trial
 * statistic; one full pass per trial measures the per-attempt failure rate.
 */
struct AssistedStats {
    long d = 0;
    long trials = 0;
    std::vector<double> level_retry_mean;   // index q-1
    std::vector<double> level_retry_se;
    std::vector<long> level_instances;
    double top_mean = 0.0, top_var = 0.0;
    double top_mean_se = 0.0, top_var_se = 0.0;
    double pass_fail_rate = 0.0, pass_fail_se = 0.0;
    CostStats online_ops; // online base-unitary applications per realization
};

inline AssistedStats simulate_assisted(const Angle& theta0, long d, long trials,
                                       std::uint64_t seed) {
    require_theta0(theta0);
    auto P = level_probs(theta0, d);
    AssistedStats st;
    st.d = d;
    st.trials = trials;
    std::vector<double> sum(static_cast<std::size_t>(d), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(d), 0.0);
    std::vector<long> cnt(static_cast<std::size_t>(d), 0);
    std::vector<double> top(static_cast<std::size_t>(trials));
    std::vector<double> online(static_cast<std::size_t>(trials));
    long pass_fails = 0;

    // o_q online ops: each level-q attempt performs one assisted dagger
    // execution of level q−1; level 1 applies the base once per attempt.
    std::function<long(long, TrialRng&, bool)> sample_online =
        [&](long q, TrialRng& rng, bool record) -> long {
        long n = rng.geometric(P[static_cast<std::size_t>(q - 1)]);
        if (record) {
            sum[static_cast<std::size_t>(q - 1)] += n;
            sumsq[static_cast<std::size_t>(q - 1)] += double(n) * n;
            cnt[static_cast<std::size_t>(q - 1)] += 1;
        }
        if (q == 1) return n;
        long o = 0;
        for (long i = 0; i < n; ++i) o += sample_online(q - 1, rng, record);
        return o;
    };

    for (long i = 0; i < trials; ++i) {
        TrialRng rng(seed, static_cast<std::uint64_t>(i));
        // Top-level retry count is the per-trial statistic.
        long n_top = rng.geometric(P[static_cast<std::size_t>(d - 1)]);
        top[static_cast<std::size_t>(i)] = n_top;
        sum[static_cast<std::size_t>(d - 1)] += n_top;
        sumsq[static_cast<std::size_t>(d - 1)] += double(n_top) * n_top;
        cnt[static_cast<std::size_t>(d - 1)] += 1;
        long o = 0;
        for (long j = 0; j < n_top; ++j) {
            o += d == 1 ? 1 : sample_online(d - 1, rng, true);
        }
        online[static_cast<std::size_t>(i)] = o;
        // One full pass: did any level fail on the first try?
        bool fail = false;
        for (long q = 1; q <= d; ++q) {
            if (!rng.bernoulli(P[static_cast<std::size_t>(q - 1)])) fail = true;
        }
        if (fail) ++pass_fails;
    }

    st.level_retry_mean.resize(static_cast<std::size_t>(d));
    st.level_retry_se.resize(static_cast<std::size_t>(d));
    st.level_instances = cnt;
    for (long q = 0; q < d; ++q) {
        auto uq = static_cast<std::size_t>(q);
        double mean = cnt[uq] ? sum[uq] / cnt[uq] : 0.0;
        double var = cnt[uq] > 1 ? (sumsq[uq] - cnt[uq] * mean * mean) / (cnt[uq] - 1) : 0.0;
        st.level_retry_mean[uq] = mean;
        st.level_retry_se[uq] = cnt[uq] ? std::sqrt(std::max(0.0, var) / cnt[uq]) : 0.0;
    }
    CostStats tops = summarize_samples(top);
    st.top_mean = tops.mean;
    st.top_var = tops.variance;
    st.top_mean_se = tops.stderr_mean();
    double m4 = 0.0;
    for (double x : top) m4 += std::pow(x - tops.mean, 4.0);
    m4 /= trials;
    st.top_var_se = std::sqrt(std::max(0.0, m4 - tops.variance * tops.variance) / trials);
    st.pass_fail_rate = double(pass_fails) / trials;
    st.pass_fail_se = std::sqrt(st.pass_fail_rate * (1.0 - st.pass_fail_rate) / trials);
    st.online_ops = summarize_samples(std::move(online));
    return st;
}

/**
 * Plan tree compiled for Monte-Carlo execution: realized magnitudes and
 * level/success probabilities are evaluated once.
 */
struct CompiledPlan {
    GearboxNode::Kind kind = GearboxNode::Kind::Leaf;
    long leaf_tcount = 0;
    std::vector<CompiledPlan> children; // gearbox children or composed base
    std::vector<double> levelP;         // composed levels 1..d
    double success_prob = 1.0;          // gearbox node
    LogMag magnitude;
};

inline CompiledPlan compile_plan(const GearboxNode& node) {
    CompiledPlan c;
    c.kind = node.kind;
    c.magnitude = node_magnitude(node);
    switch (node.kind) {
        case GearboxNode::Kind::Leaf:
            c.leaf_tcount = node.word.tcount();
            break;
        case GearboxNode::Kind::Gearbox: {
            std::vector<LogMag> mags;
            for (const auto& ch : node.children) {
                c.children.push_back(compile_plan(ch));
                mags.push_back(c.children.back().magnitude);
            }
            c.success_prob = gearbox_success_prob(mags);
            break;
        }
        case GearboxNode::Kind::Composed: {
            c.children.push_back(compile_plan(node.children[0]));
            LogMag base = c.children[0].magnitude;
            Angle theta0 = make_angle(std::asin(std::min(1.0, base.value())));
            c.levelP = level_probs(theta0, node.depth);
            break;
        }
    }
    return c;
}

namespace detail {

// T cost of one successful realization of a node used as a child (retried
// until success, fresh resources each attempt).
inline double realize_cost(const CompiledPlan& c, TrialRng& rng);

inline double composed_level_cost(const CompiledPlan& c, long q, TrialRng& rng) {
    long n = rng.geometric(c.levelP[static_cast<std::size_t>(q - 1)]);
    double cost = 0.0;
    for (long i = 0; i < n; ++i) {
        if (q == 1) {
            cost += realize_cost(c.children[0], rng) + realize_cost(c.children[0], rng);
        } else {
            cost += composed_level_cost(c, q - 1, rng) + composed_level_cost(c, q - 1, rng);
        }
    }
    return cost;
}

inline double gearbox_attempt_cost(const CompiledPlan& c, TrialRng& rng) {
    double cost = 4.0 * (static_cast<double>(c.children.size()) - 1.0);
    for (const auto& ch : c.children) {
        cost += realize_cost(ch, rng) + realize_cost(ch, rng);
    }
    return cost;
}

inline double realize_cost(const CompiledPlan& c, TrialRng& rng) {
    switch (c.kind) {
        case GearboxNode::Kind::Leaf:
            return c.leaf_tcount;
        case GearboxNode::Kind::Composed:
            return composed_level_cost(c, static_cast<long>(c.levelP.size()), rng);
        case GearboxNode::Kind::Gearbox: {
            double total = 0.0;
            while (true) {
                total += gearbox_attempt_cost(c, rng);
                if (rng.bernoulli(c.success_prob)) break;
            }
            return total;
        }
    }
    return 0.0;
}

// Online T cost of the dagger-side execution with precomputed ancillas: the
// preparation side is offline, and each level retry consumes one provided
// ancilla plus the deeper online chain.
inline double assisted_dagger_online(const CompiledPlan& c, TrialRng& rng) {
    switch (c.kind) {
        case GearboxNode::Kind::Leaf:
            return c.leaf_tcount;
        case GearboxNode::Kind::Composed: {
            std::function<double(long)> online = [&](long q) -> double {
                long n = rng.geometric(c.levelP[static_cast<std::size_t>(q - 1)]);
                if (q == 1) return n * double(c.children[0].leaf_tcount);
                double o = 0.0;
                for (long i = 0; i < n; ++i) o += online(q - 1);
                return o;
            };
            return online(static_cast<long>(c.levelP.size()));
        }
        case GearboxNode::Kind::Gearbox:
            return realize_cost(c, rng); // not offline-preparable; full cost online
    }
    return 0.0;
}

} // namespace detail

struct PlanStats {
    CostStats total;
    CostStats online; // meaningful in offline ancilla mode
    double success_prob = 1.0;
    Angle realized_angle;
};

// Expected T cost of one successful realization of a compiled node.
inline double expected_realize_cost(const CompiledPlan& c) {
    switch (c.kind) {
        case GearboxNode::Kind::Leaf:
            return c.leaf_tcount;
        case GearboxNode::Kind::Composed: {
            double prod = 1.0;
            for (double p : c.levelP) prod *= p;
            double n = std::ldexp(1.0, static_cast<int>(c.levelP.size())) / prod;
            return n * expected_realize_cost(c.children[0]);
        }
        case GearboxNode::Kind::Gearbox: {
            double per = 4.0 * (static_cast<double>(c.children.size()) - 1.0);
            for (const auto& ch : c.children) per += 2.0 * expected_realize_cost(ch);
            return per / c.success_prob;
        }
    }
    return 0.0;
}

enum class AncillaMode { Online, Offline };

/**
 * T-count distribution for a full plan. Each sample executes the top-level
 * gearbox once (its success probability is reported; internal child
 * realizations are repeated until success). With rus_top, failed top-level
 * attempts are also retried with fresh resources and folded into the cost.
 */
inline PlanStats simulate_plan(const GearboxNode& node, long trials, std::uint64_t seed,
                               AncillaMode mode = AncillaMode::Online, int jobs = 1,
                               bool rus_top = false) {
    CompiledPlan plan = compile_plan(node);
    PlanStats ps;
    if (node.kind == GearboxNode::Kind::Gearbox) {
        ps.success_prob = plan.success_prob;
        ps.realized_angle = node_realized_angle(node);
    } else if (node.kind == GearboxNode::Kind::Composed) {
        ps.realized_angle = node_realized_angle(node);
    }

    auto total = run_trials(trials, seed, jobs, [&](TrialRng& rng) {
        if (plan.kind == GearboxNode::Kind::Gearbox && !rus_top) {
            return detail::gearbox_attempt_cost(plan, rng);
        }
        return detail::realize_cost(plan, rng);
    });
    ps.total = summarize_samples(std::move(total));
    if (plan.kind == GearboxNode::Kind::Gearbox && !rus_top) {
        ps.total.analytic_mean = expected_realize_cost(plan) * plan.success_prob;
    } else {
        ps.total.analytic_mean = expected_realize_cost(plan);
    }

    if (mode == AncillaMode::Offline) {
        // Separate deterministic stream for the online-cost accounting.
        auto online = run_trials(trials, seed ^ 0x0f0f0f0f12345678ULL, jobs,
                                 [&](TrialRng& rng) {
            if (plan.kind == GearboxNode::Kind::Gearbox) {
                double o = 4.0 * (static_cast<double>(plan.children.size()) - 1.0);
                for (const auto& ch : plan.children) {
                    o += detail::assisted_dagger_online(ch, rng);
                }
                return o;
            }
            return detail::assisted_dagger_online(plan, rng);
        });
        ps.online = summarize_samples(std::move(online));
    }
    return ps;
}

/**
 * One flat gearbox of d identical leaves with the given off-diagonal
 * magnitude and per-leaf T-count, retried until success.
 */
inline CostStats simulate_direct_gearbox(double offdiag_mag, long leaf_tcount, long d,
                                         long trials, std::uint64_t seed, int jobs = 1) {
    if (!(offdiag_mag > 0.0 && offdiag_mag < 1.0)) {
        throw std::invalid_argument("simulate_direct_gearbox: magnitude must be in (0,1)");
    }
    std::vector<LogMag> mags(static_cast<std::size_t>(d), LogMag::from_value(offdiag_mag));
    double p = gearbox_success_prob(mags);
    double per_attempt = 4.0 * (d - 1) + 2.0 * d * leaf_tcount;
    auto xs = run_trials(trials, seed, jobs, [&](TrialRng& rng) {
        return per_attempt * rng.geometric(p);
    });
    CostStats s = summarize_samples(std::move(xs));
    s.analytic_mean = per_attempt / p;
    return s;
}

// Reference ancilla-free synthesis cost line: 4·log₂(1/θ), zero constant
// term by convention.
inline double reference_tcount(const Angle& theta) {
    if (theta.is_zero()) throw std::invalid_argument("reference_tcount: theta must be > 0");
    return 4.0 * theta.log2_inv;
}

} // namespace gearsynth
