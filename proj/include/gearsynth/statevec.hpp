#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gearsynth/gearbox.hpp"

namespace gearsynth {

using Cplx = std::complex<double>;
using Matrix2 = std::array<Cplx, 4>; // row-major [m00, m01, m10, m11]
using Qubit = std::array<Cplx, 2>;

inline Matrix2 gate_matrix(Token t) {
    // Exact-to-float bridge: generator matrices come from the ring layer.
    auto m = gate_unitary(t).eval();
    return {m[0], m[1], m[2], m[3]};
}

inline Matrix2 word_matrix(const GateWord& w) {
    auto m = eval_circuit(w).eval();
    return {m[0], m[1], m[2], m[3]};
}

inline Matrix2 mat_mul(const Matrix2& a, const Matrix2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Matrix2 mat_dagger(const Matrix2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

// Phase-invariant distance between unit states: the phase-aligned residual
// norm ||a - e^{i phi*} b||, which equals the trace distance to first order
// and stays exact near zero (no sqrt-of-cancellation noise).
inline double state_distance(const Qubit& a, const Qubit& b) {
    Cplx ov = std::conj(b[0]) * a[0] + std::conj(b[1]) * a[1];
    double mag = std::abs(ov);
    Cplx phase = mag > 1e-300 ? ov / mag : Cplx(1.0, 0.0);
    double r0 = std::abs(a[0] - phase * b[0]);
    double r1 = std::abs(a[1] - phase * b[1]);
    return std::sqrt(r0 * r0 + r1 * r1);
}

/**
 * Dense simulation state for a flat gearbox on (arity + 1) qubits. Target is
 * bit 0; the ancilla for child j occupies bit j.
 */
class StateVector {
  public:
    StateVector(int qubits, const Qubit& target_input) : n_(qubits) {
        if (qubits > 12) throw ResourceError("StateVector: qubit count above 12");
        amps_.assign(std::size_t(1) << n_, Cplx(0.0, 0.0));
        amps_[0] = target_input[0];
        amps_[1] = target_input[1];
    }

    void apply_single(int qubit, const Matrix2& m) {
        std::size_t stride = std::size_t(1) << qubit;
        for (std::size_t base = 0; base < amps_.size(); ++base) {
            if (base & stride) continue;
            Cplx a0 = amps_[base];
            Cplx a1 = amps_[base | stride];
            amps_[base] = m[0] * a0 + m[1] * a1;
            amps_[base | stride] = m[2] * a0 + m[3] * a1;
        }
    }

    // -iX on the target, controlled on every ancilla bit being 1.
    void apply_controlled_minus_ix() {
        std::size_t ctrl_mask = ((std::size_t(1) << n_) - 1) & ~std::size_t(1);
        const Cplx mi(0.0, -1.0);
        for (std::size_t base = 0; base < amps_.size(); base += 2) {
            if ((base & ctrl_mask) != ctrl_mask) continue;
            Cplx a0 = amps_[base];
            Cplx a1 = amps_[base | 1];
            amps_[base] = mi * a1;
            amps_[base | 1] = mi * a0;
        }
    }

    double norm() const {
        double s = 0.0;
        for (const Cplx& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    // Unnormalized target-qubit branch for a given ancilla outcome.
    Qubit branch(std::size_t ancilla_outcome) const {
        return {amps_[(ancilla_outcome << 1)], amps_[(ancilla_outcome << 1) | 1]};
    }

    int qubits() const { return n_; }

  private:
    int n_;
    std::vector<Cplx> amps_;
};

struct GearboxBranch {
    std::size_t outcome = 0;
    double prob = 0.0;
    Qubit state{Cplx(0), Cplx(0)}; // normalized
};

struct GearboxSimResult {
    double success_prob = 0.0;
    Qubit output{Cplx(0), Cplx(0)};        // normalized success branch
    Qubit failure_state{Cplx(0), Cplx(0)}; // highest-probability failure branch
    std::vector<GearboxBranch> failures;   // every nonzero-probability failure
    double norm_drift = 0.0;               // |1 - norm| after the unitary part
};

// Effective single-qubit matrix a node applies on its success branch,
// computed by simulation (declared here, defined after run_gearbox).
inline std::pair<Matrix2, double> effective_unitary_sim(const GearboxNode& node);

/**
 * Brute-force oracle for the flat gearbox: prepares the ancillas, applies the
 * multiply-controlled -iX, undoes the ancilla preparations, and projects on
 * every measurement outcome.
 */
inline GearboxSimResult run_gearbox(const GearboxNode& node, const Qubit& input) {
    if (node.kind != GearboxNode::Kind::Gearbox) {
        throw std::invalid_argument("run_gearbox: node must be a flat gearbox");
    }
    long d = node.arity();
    if (d + 1 > 12) throw ResourceError("run_gearbox: gearbox arity above 11");

    std::vector<Matrix2> child(static_cast<std::size_t>(d));
    for (long j = 0; j < d; ++j) {
        child[static_cast<std::size_t>(j)] = effective_unitary_sim(node.children[std::size_t(j)]).first;
    }

    StateVector sv(static_cast<int>(d + 1), input);
    for (long j = 0; j < d; ++j) sv.apply_single(static_cast<int>(j + 1), child[std::size_t(j)]);
    sv.apply_controlled_minus_ix();
    for (long j = 0; j < d; ++j) {
        sv.apply_single(static_cast<int>(j + 1), mat_dagger(child[std::size_t(j)]));
    }

    GearboxSimResult r;
    r.norm_drift = std::abs(1.0 - sv.norm());
    std::size_t outcomes = std::size_t(1) << d;
    for (std::size_t m = 0; m < outcomes; ++m) {
        Qubit b = sv.branch(m);
        double p = std::norm(b[0]) + std::norm(b[1]);
        if (m == 0) {
            r.success_prob = p;
            if (p > 0) {
                double inv = 1.0 / std::sqrt(p);
                r.output = {b[0] * inv, b[1] * inv};
            }
        } else if (p > 1e-24) {
            double inv = 1.0 / std::sqrt(p);
            r.failures.push_back({m, p, {b[0] * inv, b[1] * inv}});
        }
    }
    double best = -1.0;
    for (const auto& f : r.failures) {
        if (f.prob > best) {
            best = f.prob;
            r.failure_state = f.state;
        }
    }
    return r;
}

inline std::pair<Matrix2, double> effective_unitary_sim(const GearboxNode& node) {
    switch (node.kind) {
        case GearboxNode::Kind::Leaf:
            return {word_matrix(node.word), 1.0};
        case GearboxNode::Kind::Gearbox: {
            // Columns of the success Kraus operator from basis inputs.
            GearboxSimResult r0 = run_gearbox(node, Qubit{Cplx(1), Cplx(0)});
            GearboxSimResult r1 = run_gearbox(node, Qubit{Cplx(0), Cplx(1)});
            Matrix2 u = {r0.output[0], r1.output[0], r0.output[1], r1.output[1]};
            return {u, r0.success_prob};
        }
        case GearboxNode::Kind::Composed: {
            // Level-by-level: each level is a 2-qubit simulation of the
            // gearbox built on the previous level's realized unitary.
            auto [m, p] = effective_unitary_sim(node.children[0]);
            (void)p;
            double level_prod = 1.0;
            for (long level = 0; level < node.depth; ++level) {
                // Simulate C^(1) with the child applied as a raw matrix.
                StateVector sv0(2, Qubit{Cplx(1), Cplx(0)});
                StateVector sv1(2, Qubit{Cplx(0), Cplx(1)});
                for (StateVector* sv : {&sv0, &sv1}) {
                    sv->apply_single(1, m);
                    sv->apply_controlled_minus_ix();
                    sv->apply_single(1, mat_dagger(m));
                }
                Qubit b0 = sv0.branch(0);
                Qubit b1 = sv1.branch(0);
                double p0 = std::norm(b0[0]) + std::norm(b0[1]);
                double inv = 1.0 / std::sqrt(p0);
                m = {b0[0] * inv, b1[0] * inv, b0[1] * inv, b1[1] * inv};
                level_prod *= p0;
            }
            return {m, level_prod};
        }
    }
    throw std::logic_error("effective_unitary_sim: bad node");
}

// e^{-i phi X} as a float matrix.
inline Matrix2 rx_matrix(double phi) {
    Cplx c(std::cos(phi), 0.0);
    Cplx s(0.0, -std::sin(phi));
    return {c, s, s, c};
}

inline Qubit apply_matrix(const Matrix2& m, const Qubit& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

} // namespace gearsynth
