#include <doctest.h>

#include <cmath>

#include "gearsynth/rng.hpp"
#include "gearsynth/unitary.hpp"

using namespace gearsynth;

namespace {

GateWord random_word(TrialRng& rng, int len) {
    static const Token pool[] = {Token::H, Token::T, Token::Tdg, Token::S,
                                 Token::Sdg, Token::X, Token::Y, Token::Z};
    std::vector<Token> toks;
    for (int i = 0; i < len; ++i) toks.push_back(pool[rng.next_u64() % 8]);
    return GateWord(std::move(toks));
}

} // namespace

TEST_CASE("word parsing and printing round-trips") {
    GateWord w = GateWord::parse("H T H Tdg S Sdg X Y Z W");
    CHECK(w.str() == "H T H Tdg S Sdg X Y Z W");
    CHECK(w.tcount() == 2);
    CHECK_THROWS_AS(GateWord::parse("H Q"), std::invalid_argument);
}

TEST_CASE("HH is the identity; T is diag(1, omega)") {
    CHECK(eval_circuit("H H") == ExactUnitary::identity());
    ExactUnitary t = eval_circuit("T");
    CHECK(t.e00() == RingElement::one());
    CHECK(t.e11() == RingElement::omega_power(1));
    CHECK(t.e01().is_zero());
    CHECK(t.e10().is_zero());
}

TEST_CASE("HTH off-diagonal has |u|^2 = (2-sqrt2)/4 with sde 3") {
    ExactUnitary u = eval_circuit("H T H");
    Root2Scaled m = u.e10().abs_sq();
    CHECK(m == Root2Scaled(-1, 1, 3));
    CHECK(m.sde() == 3);
    CHECK(std::sqrt(m.eval()) == doctest::Approx(std::sin(kPi / 8)).epsilon(1e-13));
}

TEST_CASE("every generator is exactly unitary, and so are random words") {
    for (Token t : {Token::H, Token::T, Token::Tdg, Token::S, Token::Sdg, Token::X,
                    Token::Y, Token::Z, Token::W}) {
        CHECK(gate_unitary(t).is_unitary());
    }
    TrialRng rng(77, 0);
    for (int i = 0; i < 300; ++i) {
        ExactUnitary u = eval_circuit(random_word(rng, 1 + int(rng.next_u64() % 25)));
        CHECK(u.is_unitary());
        // Column entries satisfy |u00|^2 + |u10|^2 = 1 exactly.
        CHECK(u.e00().abs_sq() + u.e10().abs_sq() == Root2Scaled::one());
        // And each entry's squared magnitude is at most 1.
        CHECK(!(Root2Scaled::one() - u.e10().abs_sq()).is_negative());
    }
}

TEST_CASE("T dagger identity: Tdg = Z S T exactly") {
    CHECK(eval_circuit("Tdg") == eval_circuit("Z S T"));
    CHECK(eval_circuit("T Tdg") == ExactUnitary::identity());
}

TEST_CASE("global phase tracking") {
    ExactUnitary h = eval_circuit("H");
    ExactUnitary wh = eval_circuit("W H");
    CHECK(h != wh);
    CHECK(h.equal_mod_phase(wh));
    auto k = h.phase_to(wh);
    REQUIRE(k.has_value());
    CHECK(*k == 1);
    // Canonical form is identical for all eight phase rotations.
    auto base = h.canonical_mod_phase().first;
    for (long j = 0; j < 8; ++j) {
        CHECK(h.mul_phase(j).canonical_mod_phase().first == base);
    }
}

TEST_CASE("dagger inverts products") {
    TrialRng rng(5150, 0);
    for (int i = 0; i < 200; ++i) {
        ExactUnitary u = eval_circuit(random_word(rng, 1 + int(rng.next_u64() % 20)));
        CHECK(u * u.dagger() == ExactUnitary::identity());
    }
}

TEST_CASE("float evaluation of circuits matches exact entries") {
    TrialRng rng(42, 0);
    for (int i = 0; i < 100; ++i) {
        GateWord w = random_word(rng, 1 + int(rng.next_u64() % 15));
        ExactUnitary u = eval_circuit(w);
        auto m = u.eval();
        // Unitarity in floating point too.
        double norm0 = std::norm(m[0]) + std::norm(m[2]);
        CHECK(norm0 == doctest::Approx(1.0).epsilon(1e-12));
    }
}
