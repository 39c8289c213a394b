#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hypvis/geometry.hpp"
#include "hypvis/numerics.hpp"

// Scalar measure formulas of the hyperplane process: the radial intensity and
// its cumulative/inverse, the critical intensity, the shadow (cap height)
// density, the hitting measure of a geodesic segment (quadrature and the
// closed linear law), and the expected visible volume.
//
// The signed distance s is positive when the origin is off the convex side;
// only the one-sided restriction s > 0 is sampled and measured here.

namespace hypvis {

struct ModelParams {
    int d = 2;            // dimension, >= 2
    double lambda = 0.0;  // normal curvature, in [0, 1]
    double gamma = 1.0;   // process intensity, > 0

    void validate() const {
        if (d < 2) throw std::domain_error("ModelParams: requires d >= 2");
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw std::domain_error("ModelParams: requires lambda in [0, 1]");
        }
        if (!(gamma > 0.0)) throw std::domain_error("ModelParams: requires gamma > 0");
    }
};

/// Critical intensity sqrt(pi) (d-1)^2 Gamma((d-1)/2) / Gamma(d/2); the
/// visibility region is unbounded with positive probability below it and
/// almost surely bounded above it, for every lambda.
inline double gamma_crit(int d) {
    if (d < 2) throw std::domain_error("gamma_crit: requires d >= 2");
    const double dd = d;
    return std::sqrt(std::numbers::pi) * (dd - 1.0) * (dd - 1.0) *
           std::exp(log_gamma(0.5 * (dd - 1.0)) - log_gamma(0.5 * dd));
}

/// Slope constant gamma* = gamma Gamma(d/2) / (2 sqrt(pi) Gamma((d+1)/2)) of
/// the linear hitting law; also the rate of the visible-distance exponential.
inline double gamma_star(int d, double gamma) {
    if (d < 2) throw std::domain_error("gamma_star: requires d >= 2");
    if (!(gamma >= 0.0)) throw std::domain_error("gamma_star: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    const double dd = d;
    return gamma * std::exp(log_gamma(0.5 * dd) - log_gamma(0.5 * (dd + 1.0))) /
           (2.0 * std::sqrt(std::numbers::pi));
}

/// Density of the invariant measure in the signed-distance parametrization:
/// (cosh s + lambda sinh s)^(d-1).
inline double invariant_density_signed(int d, double lambda, double s) {
    if (d < 2) throw std::domain_error("invariant_density_signed: requires d >= 2");
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::domain_error("invariant_density_signed: requires lambda in [0, 1]");
    }
    return std::pow(std::cosh(s) + lambda * std::sinh(s), d - 1);
}

/// Radial intensity f(r) = 2 gamma (1 + 2 lambda r + r^2)^(d-1) / (1 - r^2)^d
/// of the Euclidean distances of the process, 0 <= r < 1.
inline double radial_intensity(const ModelParams& p, double r) {
    p.validate();
    if (!(r >= 0.0 && r < 1.0)) {
        throw std::domain_error("radial_intensity: requires r in [0, 1)");
    }
    const double q = 1.0 + 2.0 * p.lambda * r + r * r;
    return 2.0 * p.gamma * std::pow(q, p.d - 1) / std::pow(1.0 - r * r, p.d);
}

namespace detail {

// Integral of (cosh x + lambda sinh x)^(d-1) over [0, s], by expanding the
// base as a*e^x + b*e^{-x} with a = (1+lambda)/2, b = (1-lambda)/2 and
// integrating the binomial sum termwise. All terms are nonnegative.
inline double signed_density_cumulative(int d, double lambda, double s) {
    const double a = 0.5 * (1.0 + lambda);
    const double b = 0.5 * (1.0 - lambda);
    const int n = d - 1;
    double binom = 1.0;  // C(n, k)
    double apow = 1.0;   // a^k
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
        const int m = 2 * k - n;  // exponent multiplier of e^{m x}
        const double em = (m == 0) ? s : std::expm1(m * s) / m;
        double w = binom * apow;
        for (int i = 0; i < n - k; ++i) w *= b;
        total += w * em;
        binom = binom * (n - k) / (k + 1.0);
        apow *= a;
    }
    return total;
}

}  // namespace detail

/// Cumulative radial measure F(z) = Integral_0^z f(r) dr. For d = 2 this is
/// the rational closed form 2 gamma z (1 + lambda z) / (1 - z^2); general d
/// uses the exact exponential-sum form in the hyperbolic-distance variable.
inline double radial_cumulative(const ModelParams& p, double z) {
    p.validate();
    if (!(z >= 0.0 && z < 1.0)) {
        throw std::domain_error("radial_cumulative: requires z in [0, 1)");
    }
    if (z == 0.0) return 0.0;
    if (p.d == 2) {
        return 2.0 * p.gamma * z * (1.0 + p.lambda * z) / (1.0 - z * z);
    }
    return p.gamma * detail::signed_density_cumulative(p.d, p.lambda, 2.0 * artanh(z));
}

/// Inverse of the cumulative radial measure: the unique z with F(z) = y.
/// d = 2 inverts the quadratic in closed form; d >= 3 solves in the
/// hyperbolic-distance variable to |F(z) - y| <= tol * max(1, y).
inline double radial_quantile(const ModelParams& p, double y, double tol = 1e-10) {
    p.validate();
    if (!(y >= 0.0)) throw std::domain_error("radial_quantile: requires y >= 0");
    if (y == 0.0) return 0.0;
    if (p.d == 2) {
        // (2 gamma lambda + y) z^2 + 2 gamma z - y = 0, positive root in
        // cancellation-free form.
        const double g = p.gamma;
        return y / (g + std::sqrt(g * g + y * (2.0 * g * p.lambda + y)));
    }
    const double target = y / p.gamma;
    auto fn = [&](double s) {
        return detail::signed_density_cumulative(p.d, p.lambda, s) - target;
    };
    double hi = 1.0;
    while (fn(hi) < 0.0) hi *= 2.0;
    const double s = bracketed_root(fn, 0.0, hi, tol * std::max(1.0, y) / p.gamma);
    return std::tanh(0.5 * s);
}

/// Intensity g(s; lambda) = gamma s / ((1-s^2)^((d+1)/2) sqrt(s^2 + lambda^2 (1-s^2)))
/// of the process of cap heights phi(r_n) on (0, 1); nonincreasing in lambda
/// for fixed s.
inline double shadow_intensity(const ModelParams& p, double s) {
    p.validate();
    if (!(s > 0.0 && s < 1.0)) {
        throw std::domain_error("shadow_intensity: requires s in (0, 1)");
    }
    const double one_m_s2 = (1.0 - s) * (1.0 + s);
    return p.gamma * s /
           (std::pow(one_m_s2, 0.5 * (p.d + 1)) *
            std::sqrt(s * s + p.lambda * p.lambda * one_m_s2));
}

/// Measure of hyperplanes hitting a geodesic segment of length h, evaluated
/// by quadrature of the integral representation: a single integral for
/// lambda = 0, and two pieces split at the critical radius r_c for
/// lambda > 0. Endpoint square-root behaviour is removed by substitution
/// before the adaptive engine runs.
inline double hitting_measure_quadrature(const ModelParams& p, double h,
                                         double rel_tol = 1e-10) {
    p.validate();
    if (h == 0.0) return 0.0;
    if (!(h > 0.0)) throw std::domain_error("hitting_measure_quadrature: requires h > 0");

    const double t = std::tanh(0.5 * h);
    const int d = p.d;
    const double lambda = p.lambda;

    auto density = [&](double r) { return radial_intensity(p, r); };
    auto cap_at = [&](double height) {
        return cap_measure(d, std::min(1.0, std::max(0.0, height)));
    };

    if (lambda == 0.0) {
        // r = t - v^2 regularizes the arccos-type behaviour at r = t.
        auto integrand = [&](double v) {
            const double r = t - v * v;
            return 2.0 * v * cap_at(endpoint_threshold(0.0, r, t)) * density(r);
        };
        return adaptive_integrate(integrand, 0.0, std::sqrt(t), rel_tol).value;
    }

    const double rc = detail::critical_radius_from_t(lambda, t);
    // Inner piece: r = w^2 removes the sqrt(r) behaviour of the tangency
    // threshold at the origin.
    auto inner = [&](double w) {
        const double r = w * w;
        return 2.0 * w * cap_at(tangency_threshold(lambda, r)) * density(r);
    };
    const double inner_value =
        adaptive_integrate(inner, 0.0, std::sqrt(rc), rel_tol).value;

    // Outer piece: r = t - v^2 as in the lambda = 0 case.
    auto outer = [&](double v) {
        const double r = t - v * v;
        return 2.0 * v * cap_at(endpoint_threshold(lambda, r, t)) * density(r);
    };
    const double outer_value =
        adaptive_integrate(outer, 0.0, std::sqrt(t - rc), rel_tol).value;

    return inner_value + outer_value;
}

/// Closed form of the hitting measure: gamma* h, linear in h with a slope
/// independent of lambda.
inline double hitting_measure_closed(int d, double gamma, double h) {
    if (!(h >= 0.0)) throw std::domain_error("hitting_measure_closed: requires h >= 0");
    return gamma_star(d, gamma) * h;
}

/// Expected volume of the visibility region. Returns +infinity for
/// gamma <= gamma_crit (the mean is infinite there, not undefined); above the
/// threshold the value is
/// pi^((d-1)/2) Gamma((d+1)/2) Gamma((g*-d+1)/2) / Gamma((g*+d+1)/2),
/// independent of lambda.
inline double expected_volume_closed(const ModelParams& p) {
    p.validate();
    if (p.gamma <= gamma_crit(p.d)) {
        return std::numeric_limits<double>::infinity();
    }
    const double gs = gamma_star(p.d, p.gamma);
    const double dd = p.d;
    const double log_value = 0.5 * (dd - 1.0) * std::log(std::numbers::pi) +
                             log_gamma(0.5 * (dd + 1.0)) +
                             log_gamma(0.5 * (gs - dd + 1.0)) -
                             log_gamma(0.5 * (gs + dd + 1.0));
    return std::exp(log_value);
}

/// Integral_0^inf sinh^(d-1)(s) e^(-a s) ds in closed form,
/// (d-1)!/2^d * Gamma((a-d+1)/2) / Gamma((a+d+1)/2); finite only for a > d-1.
inline double sinh_exp_integral(int d, double a) {
    if (d < 2) throw std::domain_error("sinh_exp_integral: requires d >= 2");
    if (!(a > d - 1.0)) {
        throw std::domain_error("sinh_exp_integral: diverges unless a > d - 1");
    }
    const double dd = d;
    return std::exp(log_gamma(dd) - dd * std::numbers::ln2 +
                    log_gamma(0.5 * (a - dd + 1.0)) - log_gamma(0.5 * (a + dd + 1.0)));
}

/// Numeric companion of sinh_exp_integral for cross-checking: adaptive
/// quadrature over [0, s] with the upper limit extended until the remaining
/// tail is negligible against the running value.
struct SinhExpQuadrature {
    double value = 0.0;
    double truncated_at = 0.0;
};

inline SinhExpQuadrature sinh_exp_integral_numeric(int d, double a,
                                                   double rel_tol = 1e-12) {
    if (d < 2) throw std::domain_error("sinh_exp_integral_numeric: requires d >= 2");
    if (!(a > d - 1.0)) {
        throw std::domain_error("sinh_exp_integral_numeric: diverges unless a > d - 1");
    }
    auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        // log(sinh s) = s + log1p(-e^{-2s}) - log 2, to avoid overflow.
        const double log_sinh = s + std::log1p(-std::exp(-2.0 * s)) - std::numbers::ln2;
        return std::exp((d - 1) * log_sinh - a * s);
    };
    const double decay = a - (d - 1.0);
    const double block = std::max(10.0, 30.0 / decay);
    double value = 0.0;
    double lo = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double hi = lo + block;
        const double piece = adaptive_integrate(integrand, lo, hi, rel_tol).value;
        value += piece;
        lo = hi;
        if (piece < 1e-18 * value) break;
    }
    return {value, lo};
}

/// Constants of the lambda > 1 regime, where the hypersurface is a hyperbolic
/// sphere of radius R_lambda = artanh(1/lambda) and visibility reduces to a
/// Boolean model of balls: returns (R_lambda, gamma_B_crit).
struct BallModelConstants {
    double radius = 0.0;
    double gamma_b_crit = 0.0;
};

inline BallModelConstants ball_model_constants(int d, double lambda) {
    if (d < 2) throw std::domain_error("ball_model_constants: requires d >= 2");
    if (!(lambda > 1.0)) {
        throw std::domain_error("ball_model_constants: requires lambda > 1");
    }
    const double radius = artanh(1.0 / lambda);
    const double dd = d;
    const double gamma_b =
        (dd - 1.0) * std::exp(log_gamma(0.5 * (dd + 1.0))) /
        (std::pow(std::numbers::pi, 0.5 * (dd - 1.0)) *
         std::pow(lambda * lambda - 1.0, 0.5 * (dd - 1.0)));
    return {radius, gamma_b};
}

/// One cell of the hitting-measure verification grid.
struct CroftonCell {
    int d = 2;
    double lambda = 0.0;
    double h = 0.0;
    double gamma = 0.0;
    double quadrature = 0.0;
    double closed = 0.0;
    double rel_error = 0.0;
};

/// Evaluates the quadrature route against the closed linear law on a full
/// parameter grid. rel_error is |quad - closed| / max(closed, tiny).
inline std::vector<CroftonCell> crofton_verification_grid(
    const std::vector<int>& ds, const std::vector<double>& lambdas,
    const std::vector<double>& hs, double gamma, double quad_rel_tol = 1e-10) {
    std::vector<CroftonCell> cells;
    cells.reserve(ds.size() * lambdas.size() * hs.size());
    for (int d : ds) {
        for (double lambda : lambdas) {
            for (double h : hs) {
                ModelParams p{d, lambda, gamma};
                CroftonCell cell;
                cell.d = d;
                cell.lambda = lambda;
                cell.h = h;
                cell.gamma = gamma;
                cell.quadrature = hitting_measure_quadrature(p, h, quad_rel_tol);
                cell.closed = hitting_measure_closed(d, gamma, h);
                const double scale = std::max(cell.closed, 1e-300);
                cell.rel_error = std::fabs(cell.quadrature - cell.closed) / scale;
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

}  // namespace hypvis
