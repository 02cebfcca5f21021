#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gearsynth/cost.hpp"
#include "gearsynth/synth.hpp"

namespace gearsynth {

/**
 * A floating-point rotation plan: Clifford multiple k of π/4, exponent D-set,
 * mantissa word, and the derived angles. The circuit it describes is
 * GB(U_m, C*D₁(H T H), …, C*D_d(H T H)).
 */
struct FloatingPlan {
    double phi_in = 0.0;
    long k = 0;           // Clifford multiple of pi/4
    double phi_rem = 0.0; // phi_in - k*pi/4
    long gamma = 0;       // phi_rem = alpha * 10^-gamma with alpha in [0.1, 1)
    double alpha = 0.0;
    double delta = 0.0;

    bool clifford_only = false;
    bool saturated = false; // no feasible D-set; D = [1] with |u_m| pinned to 1

    std::vector<long> D;
    Angle phi_D;
    double target_mag = 0.0;
    double phi_tilde = 0.0;

    GateWord mantissa_word;
    double mantissa_mag = 0.0;
    double mantissa_err = 0.0;
    bool mantissa_within_delta = true;

    GearboxNode node; // empty leaf when clifford_only
};

// Clifford decomposition: k = floor(phi_in / (pi/4)), remainder in [0, pi/4).
inline std::pair<long, double> decompose_angle(double phi_in) {
    if (!std::isfinite(phi_in)) throw std::invalid_argument("decompose_angle: non-finite");
    double q = std::floor(phi_in / (kPi / 4));
    double rem = phi_in - q * (kPi / 4);
    if (rem < 0) rem = 0;
    if (rem >= kPi / 4) {
        rem -= kPi / 4;
        q += 1;
    }
    return {static_cast<long>(q), rem};
}

// Feasibility bound of the exponent step: sin(phi(D)) must be at least
// sqrt(tan(phi_rem) / (1 + tan(phi_rem))).
inline double exponent_feasibility_bound(double phi_rem) {
    double t = std::tan(phi_rem);
    return std::sqrt(t / (1.0 + t));
}

// Largest remainder the D-grid can reach with a unit mantissa:
// arctan(tan^4(pi/8)) = 0.0294288.
inline double max_feasible_phi_rem() {
    return composed_angle(kPi / 8, 2).radians;
}

struct ExponentChoice {
    std::vector<long> D;
    Angle phi_D;
    bool saturated = false;
};

/**
 * Smallest feasible phi(D): since phi(D) is strictly decreasing in the weight
 * w = Σ 2^{D_j}, scan even weights upward and keep the last feasible one.
 * Remainders above max_feasible_phi_rem() have no feasible D-set; those fall
 * back to D = [1] with a saturated (unit) mantissa target.
 */
inline ExponentChoice select_exponent(double phi_rem) {
    if (!(phi_rem > 0.0 && phi_rem < kPi / 4)) {
        throw std::invalid_argument("select_exponent: phi_rem must lie in (0, pi/4)");
    }
    double bound_log2inv = -std::log2(exponent_feasibility_bound(phi_rem));
    ExponentChoice out;
    long best_w = 0;
    for (long w = 2;; w += 2) {
        Angle phi = phi_of_D(dset_from_weight(w));
        if (log2_inv_sin(phi) <= bound_log2inv) {
            best_w = w;
            out.phi_D = phi;
        } else {
            break;
        }
        if (w > 4000) throw ResourceError("select_exponent: weight scan exceeded budget");
    }
    if (best_w == 0) {
        out.D = {1};
        out.phi_D = phi_of_D(out.D);
        out.saturated = true;
        return out;
    }
    out.D = dset_from_weight(best_w);
    return out;
}

/**
 * Ideal mantissa magnitude |u_m| = sqrt(sin φ_rem / (cos φ_rem + sin φ_rem)) / sin φ(D)
 * and the matching rotation angle φ̃ = sin⁻¹(|u_m|).
 */
inline std::pair<double, double> mantissa_target(double phi_rem, const Angle& phi_D) {
    if (!(phi_rem > 0.0 && phi_rem < kPi / 4)) {
        throw std::invalid_argument("mantissa_target: phi_rem must lie in (0, pi/4)");
    }
    double s = sin_of(phi_D);
    double target = std::sqrt(std::sin(phi_rem) / (std::cos(phi_rem) + std::sin(phi_rem))) / s;
    if (target > 1.0 + 1e-9) {
        throw std::invalid_argument("mantissa_target: infeasible (target above 1)");
    }
    target = std::min(target, 1.0);
    return {target, std::asin(target)};
}

// Success-branch rotation for a mantissa magnitude m against sin φ(D):
// tan⁻¹( m² sin²φD / (1 − m² sin²φD) ).
inline double realized_rotation(double mantissa_mag, const Angle& phi_D) {
    double s = sin_of(phi_D);
    double m2s2 = mantissa_mag * mantissa_mag * s * s;
    return std::atan(m2s2 / (1.0 - m2s2));
}

inline GearboxNode assemble_plan_node(const GateWord& mantissa, const std::vector<long>& D) {
    std::vector<GearboxNode> children;
    children.push_back(GearboxNode::leaf(mantissa));
    for (long dj : D) {
        children.push_back(GearboxNode::composed(GearboxNode::leaf("H T H"), dj));
    }
    return GearboxNode::gearbox(std::move(children));
}

struct FloatSynthOptions {
    std::optional<GateWord> um_override;
    long trials = 40000;
    int jobs = 1;
    AncillaMode mode = AncillaMode::Online;
    bool rus_top = false;
};

/**
 * Full floating-point synthesis of e^{-i phi_in X}: Clifford pre-rotation,
 * exponent selection, mantissa synthesis, plan assembly, and a Monte-Carlo
 * cost estimate of the assembled plan.
 */
inline std::pair<FloatingPlan, PlanStats> synthesize_floating(
    double phi_in, double delta, std::uint64_t seed,
    const FloatSynthOptions& opts = {}) {
    if (!(delta > 0.0)) throw std::invalid_argument("synthesize_floating: delta must be > 0");
    FloatingPlan plan;
    plan.phi_in = phi_in;
    plan.delta = delta;
    auto [k, rem] = decompose_angle(phi_in);
    plan.k = k;
    plan.phi_rem = rem;
    if (rem > 0.0) {
        plan.gamma = std::max(0L, static_cast<long>(std::ceil(-std::log10(rem))));
        plan.alpha = rem * std::pow(10.0, static_cast<double>(plan.gamma));
    }

    // The Clifford rotation alone suffices when the remainder is within the
    // promised output precision delta * 10^-gamma (for an exact multiple of
    // pi/4 the remainder is zero).
    double abs_precision = delta * std::pow(10.0, -static_cast<double>(plan.gamma));
    if (rem <= abs_precision) {
        plan.clifford_only = true;
        plan.node = GearboxNode::leaf(GateWord());
        PlanStats zero;
        zero.total = summarize_samples(std::vector<double>(std::size_t(opts.trials), 0.0));
        zero.success_prob = 1.0;
        return {plan, zero};
    }

    ExponentChoice exp = select_exponent(rem);
    plan.D = exp.D;
    plan.phi_D = exp.phi_D;
    plan.saturated = exp.saturated;
    if (exp.saturated) {
        plan.target_mag = 1.0;
        plan.phi_tilde = kPi / 2;
    } else {
        auto [target, tilde] = mantissa_target(rem, exp.phi_D);
        plan.target_mag = target;
        plan.phi_tilde = tilde;
    }

    if (opts.um_override) {
        plan.mantissa_word = *opts.um_override;
        plan.mantissa_mag =
            std::sqrt(eval_circuit(plan.mantissa_word).e10().abs_sq().eval());
        plan.mantissa_err = std::abs(plan.mantissa_mag - plan.target_mag);
        plan.mantissa_within_delta = plan.mantissa_err <= delta;
    } else {
        ApproxResult ar = approx_synthesize(plan.target_mag, delta,
                                            config().approx_bfs_tcount);
        plan.mantissa_word = ar.word;
        plan.mantissa_mag =
            std::sqrt(eval_circuit(plan.mantissa_word).e10().abs_sq().eval());
        plan.mantissa_err = ar.achieved_err;
        plan.mantissa_within_delta = ar.within_delta;
    }

    plan.node = assemble_plan_node(plan.mantissa_word, plan.D);
    PlanStats stats = simulate_plan(plan.node, opts.trials, seed, opts.mode, opts.jobs,
                                    opts.rus_top);
    return {plan, stats};
}

struct CostPrediction {
    double mean_tcount = 0.0;
    double tdepth_bound = 0.0;
    bool crossover_ok = false;
};

/**
 * Scaling-law predictor for the floating-point method. The mantissa term
 * prices the two mantissa applications at the 4·log₂(1/δ) reference rate;
 * the additive constants are not pinned down analytically, so they are
 * parameters: C defaults to the exponent-sweep fit intercept (≈4.2 per-plan
 * overhead) and K to the quoted online-repetition constant 12.
 */
inline CostPrediction predicted_cost(double gamma, double delta, double C = 4.2,
                                     double K = 12.0) {
    if (gamma < 0.0 || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("predicted_cost: need gamma >= 0 and delta in (0,1)");
    }
    CostPrediction p;
    double log2_inv_delta = -std::log2(delta);
    p.mean_tcount = 8.0 * log2_inv_delta + 1.14 * gamma * std::log2(10.0) + C;
    // The D-set for a representative remainder 10^-gamma fixes the depth term.
    double rem = std::pow(10.0, -std::max(gamma, 0.5));
    rem = std::min(rem, max_feasible_phi_rem() * 0.99);
    ExponentChoice exp = select_exponent(rem);
    long max_d = exp.D.back();
    long d = static_cast<long>(exp.D.size());
    p.tdepth_bound = 2.0 * max_d + 8.0 * log2_inv_delta +
                     2.0 * std::floor(std::log2(static_cast<double>(d)) + 1.0) + K;
    // Boundary counts as satisfied.
    p.crossover_ok = delta >= std::pow(10.0, -gamma * 143.0 / 200.0) * (1.0 - 1e-12);
    return p;
}

} // namespace gearsynth
