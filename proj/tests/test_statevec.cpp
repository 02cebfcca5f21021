#include <doctest.h>

#include <cmath>

#include "gearsynth/cost.hpp"
#include "gearsynth/rng.hpp"
#include "gearsynth/statevec.hpp"

using namespace gearsynth;

namespace {

Qubit random_qubit(TrialRng& rng) {
    double t = rng.next_double() * kPi;
    double p = rng.next_double() * 2 * kPi;
    return {Cplx(std::cos(t / 2), 0.0),
            Cplx(std::sin(t / 2) * std::cos(p), std::sin(t / 2) * std::sin(p))};
}

GateWord random_leaf(TrialRng& rng, int max_t) {
    static const Token pool[] = {Token::H, Token::S, Token::X, Token::Z, Token::Sdg};
    std::vector<Token> toks;
    int tles = int(rng.next_u64() % (max_t + 1));
    int len = 2 + int(rng.next_u64() % 8);
    for (int i = 0; i < len; ++i) {
        toks.push_back(pool[rng.next_u64() % 5]);
        if (tles > 0 && rng.next_u64() % 2) {
            toks.push_back(Token::T);
            --tles;
        }
    }
    return GateWord(std::move(toks));
}

} // namespace

TEST_CASE("gate matrices match their definitions") {
    Matrix2 h = gate_matrix(Token::H);
    CHECK(std::abs(h[0] - Cplx(1 / kSqrt2)) < 1e-15);
    CHECK(std::abs(h[3] + Cplx(1 / kSqrt2)) < 1e-15);
    Matrix2 t = gate_matrix(Token::T);
    CHECK(std::abs(t[3] - std::exp(Cplx(0, kPi / 4))) < 1e-15);
    CHECK(std::abs(t[1]) == 0.0);
}

TEST_CASE("float product of gate matrices equals the exact circuit evaluation") {
    TrialRng rng(6021, 0);
    for (int i = 0; i < 60; ++i) {
        GateWord w = random_leaf(rng, 6);
        Matrix2 prod = {Cplx(1), Cplx(0), Cplx(0), Cplx(1)};
        for (Token t : w.tokens()) prod = mat_mul(prod, gate_matrix(t));
        Matrix2 exact = word_matrix(w);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(prod[k] - exact[k]) < 1e-10);
    }
}

TEST_CASE("single gearbox on |0>: success 0.75 and the closed-form rotation") {
    GearboxNode node = parse_gearbox("GB(H T H)");
    GearboxSimResult r = run_gearbox(node, Qubit{Cplx(1), Cplx(0)});
    CHECK(r.success_prob == doctest::Approx(0.75).epsilon(1e-12));
    Angle expect = gearbox_angle(std::vector<double>{std::sin(kPi / 8)});
    Qubit target = apply_matrix(rx_matrix(expect.radians), Qubit{Cplx(1), Cplx(0)});
    CHECK(state_distance(r.output, target) < 1e-10);
    CHECK(r.norm_drift < 1e-12);
}

TEST_CASE("identity leaf gives certain success and passes the input through") {
    GearboxNode node = GearboxNode::gearbox({GearboxNode::leaf(GateWord())});
    TrialRng rng(17, 0);
    Qubit in = random_qubit(rng);
    GearboxSimResult r = run_gearbox(node, in);
    CHECK(r.success_prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(state_distance(r.output, in) < 1e-12);
    CHECK(r.failures.empty());
}

TEST_CASE("oracle equivalence on random flat gearboxes") {
    TrialRng rng(90210, 0);
    Matrix2 fail_map = {Cplx(1 / kSqrt2), Cplx(0, 1 / kSqrt2), Cplx(0, 1 / kSqrt2),
                        Cplx(1 / kSqrt2)}; // e^{i pi X / 4}
    for (int i = 0; i < 50; ++i) {
        long d = 1 + long(rng.next_u64() % 3);
        std::vector<GearboxNode> children;
        std::vector<LogMag> mags;
        bool degenerate = false;
        for (long j = 0; j < d; ++j) {
            GateWord w = random_leaf(rng, 6);
            LogMag m = LogMag::from_value(
                std::sqrt(eval_circuit(w).e10().abs_sq().eval()));
            if (m.is_zero() || m.is_one()) degenerate = true;
            children.push_back(GearboxNode::leaf(w));
            mags.push_back(m);
        }
        if (degenerate) continue;
        GearboxNode node = GearboxNode::gearbox(children);
        Qubit in = random_qubit(rng);
        GearboxSimResult r = run_gearbox(node, in);

        Angle theta = gearbox_theta(mags);
        CHECK(std::abs(r.success_prob - gearbox_success_prob(theta)) < 1e-10);
        Angle rot = gearbox_angle(mags);
        Qubit want = apply_matrix(rx_matrix(rot.radians), in);
        CHECK(state_distance(r.output, want) < 1e-10);
        // Every failure branch is e^{i pi X/4} |psi> regardless of the leaves.
        Qubit fail_want = apply_matrix(fail_map, in);
        double total = r.success_prob;
        for (const auto& f : r.failures) {
            CHECK(state_distance(f.state, fail_want) < 1e-10);
            total += f.prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("composed equivalence: level-by-level simulation matches the angle formula") {
    GearboxNode base = parse_gearbox("H T H");
    for (long dep = 1; dep <= 6; ++dep) {
        GearboxNode node = GearboxNode::composed(base, dep);
        auto [m, p] = effective_unitary_sim(node);
        Angle expect = composed_angle(kPi / 8, dep);
        Matrix2 want = rx_matrix(expect.radians);
        Qubit got = apply_matrix(m, Qubit{Cplx(1), Cplx(0)});
        Qubit ref = apply_matrix(want, Qubit{Cplx(1), Cplx(0)});
        CHECK(state_distance(got, ref) < 1e-10);
        CHECK(p > 0.0);
    }
}

TEST_CASE("structured children inside a flat gearbox") {
    GearboxNode node = parse_gearbox("GB(H Z T H Z T H Z T H, C*2(H T H))");
    GearboxSimResult r = run_gearbox(node, Qubit{Cplx(1), Cplx(0)});
    std::vector<LogMag> mags = {node_magnitude(node.children[0]),
                                node_magnitude(node.children[1])};
    CHECK(std::abs(r.success_prob - gearbox_success_prob(mags)) < 1e-10);
    Angle rot = gearbox_angle(mags);
    Qubit want = apply_matrix(rx_matrix(rot.radians), Qubit{Cplx(1), Cplx(0)});
    CHECK(state_distance(r.output, want) < 1e-10);
}

TEST_CASE("qubit budget is enforced") {
    std::vector<GearboxNode> children(12, GearboxNode::leaf("H T H"));
    GearboxNode node = GearboxNode::gearbox(children);
    CHECK_THROWS_AS(run_gearbox(node, Qubit{Cplx(1), Cplx(0)}), ResourceError);
}
