#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace gearsynth {

// Coefficients of ring elements are unbounded; the search multiplies values
// at 2^(m/2) scale, so fixed-width integers are not an option.
using Integer = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kLog2Sqrt2 = 0.5;

// Thrown when a computation exceeds a configured enumeration or size budget.
class ResourceError : public std::runtime_error {
  public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_odd(const Integer& x) { return x % 2 != 0; }
inline bool is_even(const Integer& x) { return x % 2 == 0; }

inline double to_double(const Integer& x) { return x.convert_to<double>(); }

inline std::int64_t to_i64(const Integer& x) {
    if (x > std::numeric_limits<std::int64_t>::max() ||
        x < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("to_i64: value out of range");
    }
    return x.convert_to<std::int64_t>();
}

} // namespace gearsynth
