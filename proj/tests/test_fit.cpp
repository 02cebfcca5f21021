#include <doctest.h>

#include <cmath>

#include "gearsynth/fit.hpp"
#include "gearsynth/rng.hpp"

using namespace gearsynth;

TEST_CASE("exact synthetic line recovers a and b") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; k <= 10; ++k) {
        double theta = std::pow(2.0, -double(k));
        pts.emplace_back(theta, 3.0 * k + 1.0);
    }
    FitResult r = fit_log_model_theta(pts);
    CHECK(r.a == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.b == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.se_a == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.ci_a_lo <= 3.0);
    CHECK(r.ci_a_hi >= 3.0);
}

TEST_CASE("noisy line keeps the true slope inside the interval") {
    TrialRng rng(55, 0);
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; k <= 40; ++k) {
        double x = k;
        double noise = (rng.next_double() - 0.5) * 0.4;
        pts.emplace_back(x, 2.5 * x - 4.0 + noise);
    }
    FitResult r = fit_log_model(pts);
    CHECK(r.a == doctest::Approx(2.5).epsilon(0.01));
    CHECK(r.ci_a_lo <= 2.5);
    CHECK(r.ci_a_hi >= 2.5);
    CHECK(r.ci_a_hi - r.ci_a_lo < 0.1);
}

TEST_CASE("log-space points work below the double underflow threshold") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; k <= 8; ++k) {
        double log2inv = 400.0 * k; // theta down to 2^-3200
        pts.emplace_back(log2inv, 1.11 * log2inv - 0.01);
    }
    FitResult r = fit_log_model(pts);
    CHECK(r.a == doctest::Approx(1.11).epsilon(1e-12));
    CHECK(r.b == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("degenerate inputs are rejected") {
    std::vector<std::pair<double, double>> two = {{1.0, 1.0}, {2.0, 2.0}};
    CHECK_THROWS_AS(fit_log_model(two), std::invalid_argument);
    std::vector<std::pair<double, double>> flat = {{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}};
    CHECK_THROWS_AS(fit_log_model(flat), std::invalid_argument);
    std::vector<std::pair<double, double>> bad_theta = {{1.5, 1.0}, {0.5, 2.0}, {0.25, 3.0}};
    CHECK_THROWS_AS(fit_log_model_theta(bad_theta), std::invalid_argument);
}
