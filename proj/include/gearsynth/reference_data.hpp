#pragma once

#include <array>

namespace gearsynth {

/**
 * Reference constants quoted from published results, kept in one place so
 * their provenance stays auditable; they are emitted as source=paper rows
 * and never mixed into computed values.
 */
struct ReferenceCircuit {
    const char* name;
    long tcount;
    double relative_error;
};

// Optimal ancilla-free approximations of the pi/2^16 rotation.
inline constexpr std::array<ReferenceCircuit, 3> kReferenceOptimalCircuits = {{
    {"V1", 57, 0.17},
    {"V2", 60, 0.058},
    {"V7", 71, 0.00056},
}};

// Most accurate 29-T mantissa: its relative rotation error (quoted).
inline constexpr double kM29RelativeError = 0.0029;
inline constexpr long kM29Tcount = 29;

} // namespace gearsynth
