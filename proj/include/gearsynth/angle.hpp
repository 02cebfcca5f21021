#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gearsynth/common.hpp"

namespace gearsynth {

// Exact descriptor for angles of the form tan⁻¹(tan^{2^d} θ₀).
struct TanPower {
    double theta0 = 0.0;
    long d = 0;
};

/**
 * An angle in [0, π/4] carried both as binary64 radians and as log₂(1/θ).
 * The log field stays finite far below the double underflow threshold, so
 * 10⁻²⁰⁰-scale and smaller rotations keep a usable magnitude; `radians` may
 * round to zero there. When the angle arises from gearbox composition the
 * tangent-power descriptor is retained.
 */
struct Angle {
    double radians = 0.0;
    double log2_inv = std::numeric_limits<double>::infinity();
    std::optional<TanPower> tan_power;

    bool is_zero() const { return !(log2_inv < std::numeric_limits<double>::infinity()); }
};

inline Angle make_angle(double radians) {
    if (radians < 0.0 || !std::isfinite(radians)) {
        throw std::invalid_argument("make_angle: radians must be finite and non-negative");
    }
    Angle a;
    a.radians = radians;
    a.log2_inv = radians > 0.0 ? -std::log2(radians)
                               : std::numeric_limits<double>::infinity();
    return a;
}

inline Angle angle_from_log2_inv(double log2_inv) {
    Angle a;
    a.log2_inv = log2_inv;
    a.radians = std::exp2(-log2_inv); // 0 when far past the underflow threshold
    return a;
}

// Angles below this are numerically equal to their sine and tangent in
// binary64, so log-space identities apply with no visible correction.
inline constexpr double kTinyAngle = 1e-9;

inline double sin_of(const Angle& a) {
    if (a.is_zero()) return 0.0;
    if (a.radians >= kTinyAngle) return std::sin(a.radians);
    return std::exp2(-a.log2_inv);
}

inline double cos_of(const Angle& a) {
    if (a.is_zero() || a.radians < kTinyAngle) return 1.0;
    return std::cos(a.radians);
}

inline double log2_inv_sin(const Angle& a) {
    if (a.is_zero()) return std::numeric_limits<double>::infinity();
    if (a.radians >= kTinyAngle) return -std::log2(std::sin(a.radians));
    return a.log2_inv;
}

inline double log2_inv_tan(const Angle& a) {
    if (a.is_zero()) return std::numeric_limits<double>::infinity();
    if (a.radians >= kTinyAngle) return -std::log2(std::tan(a.radians));
    return a.log2_inv;
}

// A magnitude in [0, 1] stored as log₂(1/m) so products of many small
// magnitudes do not underflow.
struct LogMag {
    double log2_inv = std::numeric_limits<double>::infinity(); // m = 2^{-log2_inv}

    static LogMag from_value(double m) {
        if (m < 0.0 || m > 1.0 + 1e-12) {
            throw std::invalid_argument("LogMag: magnitude outside [0,1]");
        }
        LogMag r;
        r.log2_inv = m > 0.0 ? -std::log2(std::min(m, 1.0))
                             : std::numeric_limits<double>::infinity();
        return r;
    }

    double value() const { return std::exp2(-log2_inv); }
    bool is_zero() const { return !(log2_inv < std::numeric_limits<double>::infinity()); }
    bool is_one() const { return log2_inv == 0.0; }
};

inline LogMag sin_mag(const Angle& a) {
    LogMag m;
    m.log2_inv = log2_inv_sin(a);
    return m;
}

} // namespace gearsynth
