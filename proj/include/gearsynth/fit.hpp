#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gearsynth/angle.hpp"

namespace gearsynth {

struct FitResult {
    double a = 0.0; // slope
    double b = 0.0; // intercept
    double se_a = 0.0;
    double ci_a_lo = 0.0;
    double ci_a_hi = 0.0;
    long n = 0;
};

namespace detail {

// Two-sided 97.5% Student-t quantiles for small degrees of freedom.
inline double t_quantile_975(long df) {
    static const double table[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447,
                                   2.365, 2.306,  2.262, 2.228, 2.201, 2.179, 2.160,
                                   2.145, 2.131,  2.120, 2.110, 2.101, 2.093, 2.086,
                                   2.080, 2.074,  2.069, 2.064, 2.060, 2.056, 2.052,
                                   2.048, 2.045,  2.042};
    if (df <= 0) return 12.706;
    if (df <= 30) return table[df];
    return 1.96;
}

} // namespace detail

/**
 * Least squares for y = a·x + b with a 95% confidence interval on the slope
 * from the standard regression variance.
 */
inline FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_linear: size mismatch");
    long n = static_cast<long>(x.size());
    if (n < 3) throw std::invalid_argument("fit_linear: need at least 3 points");
    double sx = 0, sy = 0;
    for (long i = 0; i < n; ++i) {
        sx += x[static_cast<std::size_t>(i)];
        sy += y[static_cast<std::size_t>(i)];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (long i = 0; i < n; ++i) {
        double dx = x[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (y[static_cast<std::size_t>(i)] - my);
    }
    if (sxx <= 1e-12 * std::abs(mx * mx) || sxx == 0.0) {
        throw std::invalid_argument("fit_linear: degenerate x spread");
    }
    FitResult r;
    r.n = n;
    r.a = sxy / sxx;
    r.b = my - r.a * mx;
    double rss = 0;
    for (long i = 0; i < n; ++i) {
        double e = y[static_cast<std::size_t>(i)] -
                   (r.a * x[static_cast<std::size_t>(i)] + r.b);
        rss += e * e;
    }
    double s2 = rss / (n - 2);
    r.se_a = std::sqrt(s2 / sxx);
    double t = detail::t_quantile_975(n - 2);
    r.ci_a_lo = r.a - t * r.se_a;
    r.ci_a_hi = r.a + t * r.se_a;
    return r;
}

/**
 * Fit cost = a·log₂(1/θ) + b. Points carry θ as log₂(1/θ) so that angles far
 * below the double underflow threshold fit exactly like any other.
 */
inline FitResult fit_log_model(const std::vector<std::pair<double, double>>& log2inv_cost) {
    std::vector<double> x, y;
    x.reserve(log2inv_cost.size());
    y.reserve(log2inv_cost.size());
    for (const auto& [l, c] : log2inv_cost) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw std::invalid_argument("fit_log_model: log2(1/theta) must be positive");
        }
        x.push_back(l);
        y.push_back(c);
    }
    return fit_linear(x, y);
}

inline FitResult fit_log_model_theta(const std::vector<std::pair<double, double>>& theta_cost) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(theta_cost.size());
    for (const auto& [theta, c] : theta_cost) {
        if (!(theta > 0.0 && theta < 1.0)) {
            throw std::invalid_argument("fit_log_model: theta must lie in (0,1)");
        }
        pts.emplace_back(-std::log2(theta), c);
    }
    return fit_log_model(pts);
}

} // namespace gearsynth
