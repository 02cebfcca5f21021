#include <doctest.h>

#include <cmath>

#include "gearsynth/gearbox.hpp"

using namespace gearsynth;

TEST_CASE("gearbox angle closed forms") {
    // [sin(pi/8)] -> arctan((sqrt2 - 1)^2)
    Angle a = gearbox_angle(std::vector<double>{std::sin(kPi / 8)});
    double expect = std::atan((kSqrt2 - 1.0) * (kSqrt2 - 1.0));
    CHECK(a.radians == doctest::Approx(expect).epsilon(1e-13));
    CHECK(a.radians == doctest::Approx(0.169919).epsilon(1e-5));

    CHECK(gearbox_angle(std::vector<double>{0.0}).is_zero());

    // Two equal magnitudes: independent trig-chain oracle.
    double m = std::sin(kPi / 8);
    double s = m * m;
    double theta = std::asin(s);
    double chain = std::atan(std::tan(theta) * std::tan(theta));
    Angle b = gearbox_angle(std::vector<double>{m, m});
    CHECK(b.radians == doctest::Approx(chain).epsilon(1e-13));
    CHECK(b.radians == doctest::Approx(0.021915).epsilon(2e-4));

    CHECK_THROWS_AS(gearbox_angle(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("gearbox success probability") {
    CHECK(gearbox_success_prob(make_angle(kPi / 8)) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(gearbox_success_prob(make_angle(0.0)) == 1.0);
    CHECK(gearbox_success_prob(make_angle(kPi / 4)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("composed angle values and descriptor") {
    Angle d1 = composed_angle(kPi / 8, 1);
    CHECK(d1.radians == doctest::Approx(0.169919).epsilon(1e-5));
    Angle d2 = composed_angle(kPi / 8, 2);
    double t4 = std::pow(std::tan(kPi / 8), 4.0);
    CHECK(d2.radians == doctest::Approx(std::atan(t4)).epsilon(1e-13));
    CHECK(d2.radians == doctest::Approx(0.0294288).epsilon(1e-5));
    REQUIRE(d2.tan_power.has_value());
    CHECK(d2.tan_power->d == 2);
    CHECK_THROWS_AS(composed_angle(kPi / 8, 0), std::invalid_argument);

    // Chain consistency: composed(theta0, d) == gearbox_angle([sin(composed(theta0, d-1))]).
    for (long d = 2; d <= 6; ++d) {
        Angle lhs = composed_angle(kPi / 8, d);
        Angle prev = composed_angle(kPi / 8, d - 1);
        Angle rhs = gearbox_angle(std::vector<double>{std::sin(prev.radians)});
        CHECK(lhs.radians == doctest::Approx(rhs.radians).epsilon(1e-12));
    }
}

TEST_CASE("composed angle approaches (tan^2 theta0)^(2^(d-1))") {
    double ratio_base = std::pow(std::tan(kPi / 8), 2.0); // 0.1715728753
    CHECK(ratio_base == doctest::Approx(0.1715728753).epsilon(1e-9));
    for (long d = 5; d <= 10; ++d) {
        Angle a = composed_angle(kPi / 8, d);
        double expect_log2 = -std::ldexp(std::log2(ratio_base), int(d - 1));
        CHECK(a.log2_inv == doctest::Approx(expect_log2).epsilon(1e-9));
    }
    // Radians survive in log space far past the double underflow threshold.
    Angle deep = composed_angle(kPi / 8, 12);
    CHECK(std::isfinite(deep.log2_inv));
    CHECK(deep.log2_inv > 664.0); // smaller than 1e-200 radians
}

TEST_CASE("phi_of_D values, weights, monotonicity") {
    CHECK(phi_of_D({2}).radians == doctest::Approx(0.0294288).epsilon(1e-5));
    CHECK(phi_of_D({1}).radians == doctest::Approx(0.169919).epsilon(1e-5));
    CHECK(phi_of_D({2}).radians ==
          doctest::Approx(composed_angle(kPi / 8, 2).radians).epsilon(1e-13));

    CHECK_THROWS_AS(phi_of_D({}), std::invalid_argument);
    CHECK_THROWS_AS(phi_of_D({0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(phi_of_D({2, 2}), std::invalid_argument);

    CHECK(weight_of_dset({1, 2}) == 6);
    CHECK(dset_from_weight(6) == std::vector<long>{1, 2});
    CHECK(dset_from_weight(4) == std::vector<long>{2});
    CHECK_THROWS_AS(dset_from_weight(3), std::invalid_argument);

    // phi(D) strictly decreases as the weight increases (log2_inv increases).
    double prev = phi_of_D(dset_from_weight(2)).log2_inv;
    for (long w = 4; w <= 1024; w += 2) {
        double cur = phi_of_D(dset_from_weight(w)).log2_inv;
        CHECK(cur > prev);
        prev = cur;
    }

    // sin(phi(D)) tracks 0.1715728753^w for D = [1,2].
    double t2 = 0.1715728753;
    Angle p12 = phi_of_D({1, 2});
    double direct = std::sin(composed_angle(kPi / 8, 1).radians) *
                    std::sin(composed_angle(kPi / 8, 2).radians);
    CHECK(std::sin(p12.radians) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::sin(p12.radians) == doctest::Approx(std::pow(t2, 3.0)).epsilon(0.01));
}

TEST_CASE("all gearbox-algebra outputs stay in (0, pi/4)") {
    for (double theta0 : {0.1, kPi / 8, 0.5, 0.78}) {
        if (theta0 >= kPi / 4) continue;
        for (long d = 1; d <= 8; ++d) {
            Angle a = composed_angle(theta0, d);
            CHECK(a.radians > 0.0);
            CHECK(a.radians < kPi / 4);
        }
    }
}

TEST_CASE("node grammar parse and print") {
    GearboxNode n = parse_gearbox("GB(H T H, C*2(H T H))");
    CHECK(n.kind == GearboxNode::Kind::Gearbox);
    CHECK(n.arity() == 2);
    CHECK(n.children[0].kind == GearboxNode::Kind::Leaf);
    CHECK(n.children[1].kind == GearboxNode::Kind::Composed);
    CHECK(n.children[1].depth == 2);
    CHECK(n.str() == "GB(H T H, C*2(H T H))");
    CHECK(parse_gearbox("C*3(GB(H T H, T))").str() == "C*3(GB(H T H, T))");
    CHECK_THROWS_AS(parse_gearbox("GB(H T H"), std::invalid_argument);
    CHECK_THROWS_AS(parse_gearbox("C*0(H)"), std::invalid_argument);
}

TEST_CASE("static T-count and T-depth") {
    GearboxNode g2 = parse_gearbox("GB(H T H, H T H)");
    CHECK(static_tcount(g2) == 8);
    CHECK(static_tdepth(g2) == 3);
    GearboxNode g1 = parse_gearbox("GB(H T H)");
    CHECK(static_tcount(g1) == 2);
    CHECK(static_tdepth(g1) == 2);
    // Composed unrolls to 2^d base applications per all-success attempt.
    CHECK(static_tcount(parse_gearbox("C*2(H T H)")) == 4);
    CHECK(static_tcount(parse_gearbox("C*3(H T H)")) == 8);
    // Top-level mantissa plan: 4 + 2*3 + 2*(per-attempt composed cost).
    GearboxNode plan = parse_gearbox("GB(H Z T H Z T H Z T H, C*2(H T H))");
    CHECK(static_tcount(plan) == 4 + 2 * 3 + 2 * 4);
}

TEST_CASE("node magnitudes") {
    GearboxNode hth = parse_gearbox("H T H");
    CHECK(node_magnitude(hth).value() == doctest::Approx(std::sin(kPi / 8)).epsilon(1e-12));
    GearboxNode c2 = parse_gearbox("C*2(H T H)");
    CHECK(node_magnitude(c2).value() ==
          doctest::Approx(std::sin(composed_angle(kPi / 8, 2).radians)).epsilon(1e-10));
    CHECK(node_realized_angle(c2).radians ==
          doctest::Approx(composed_angle(kPi / 8, 2).radians).epsilon(1e-10));
}
