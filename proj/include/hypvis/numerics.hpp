#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypvis {

/// Result of an adaptive quadrature run. A converged result satisfies
/// abs_error_estimate <= rel_tol * max(1, |value|).
struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int subdivisions = 0;
};

/// Thrown when the subdivision budget is exhausted before the error target is
/// met. Carries the partial result for diagnostics.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), partial_result(partial) {}
    QuadratureResult partial_result;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair (positive abscissae).
inline constexpr double kronrod_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kronrod_weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gauss_weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double value;      // Kronrod value
    double error;      // |Kronrod - Gauss| with a roundoff floor
};

template <class F>
PanelEstimate gauss_kronrod_15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double kron = 0.0;
    double gauss = 0.0;
    double resabs = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kronrod_nodes[i];
        double fsum;
        if (i == 7) {
            fsum = f(mid);
        } else {
            fsum = f(mid - dx) + f(mid + dx);
        }
        kron += kronrod_weights[i] * fsum;
        resabs += kronrod_weights[i] * std::fabs(fsum);
        if (i % 2 == 1) {
            gauss += gauss_weights[i / 2] * fsum;
        }
    }
    kron *= half;
    gauss *= half;
    resabs *= std::fabs(half);

    const double raw = std::fabs(kron - gauss);
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * resabs;
    return {kron, std::max(raw, floor)};
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Panels with the largest error estimate are bisected first until the total
/// estimate drops below rel_tol * max(1, |integral|). Endpoint values are never
/// requested, so integrable endpoint singularities are tolerated. Throws
/// QuadratureError (carrying the partial result) once max_subdivisions panel
/// splits were spent without convergence.
template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b,
                                    double rel_tol = 1e-10,
                                    int max_subdivisions = 10000) {
    if (!(a < b)) {
        if (a == b) return {0.0, 0.0, 0};
        throw std::domain_error("adaptive_integrate: requires a < b");
    }

    std::priority_queue<detail::Panel> panels;
    auto first = detail::gauss_kronrod_15(f, a, b);
    panels.push({a, b, first.value, first.error});
    double total_value = first.value;
    double total_error = first.error;
    int splits = 0;

    auto target = [&] { return rel_tol * std::max(1.0, std::fabs(total_value)); };

    while (total_error > target()) {
        if (splits >= max_subdivisions) {
            throw QuadratureError(
                "adaptive_integrate: no convergence after " +
                    std::to_string(splits) + " subdivisions (error " +
                    std::to_string(total_error) + ")",
                QuadratureResult{total_value, total_error, splits});
        }
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at machine resolution; accept its estimate as-is.
            total_error = std::max(0.0, total_error - worst.error);
            if (panels.empty()) break;
            continue;
        }
        auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push({worst.a, mid, left.value, left.error});
        panels.push({mid, worst.b, right.value, right.error});
        ++splits;
    }

    return {total_value, total_error, splits};
}

/// Root of a monotone function on a bracket with g(lo) * g(hi) <= 0.
///
/// Safeguarded secant/bisection hybrid: a secant step is taken when it falls
/// strictly inside the current bracket, otherwise the bracket is bisected.
/// Stops once |g(x)| <= tol or the bracket is at machine resolution; never
/// returns a point outside [lo, hi] and performs at most 200 iterations.
template <class G>
double bracketed_root(G&& g, double lo, double hi, double tol = 1e-12) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::domain_error("bracketed_root: invalid bracket");
    }
    double flo = g(lo);
    double fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw std::domain_error("bracketed_root: g(lo) and g(hi) have the same sign");
    }

    double x = lo;
    int same_side = 0;  // consecutive updates of the same endpoint
    bool last_hi = false;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        // Secant proposal from the bracket endpoints; fall back to bisection
        // when it leaves the bracket or one endpoint stagnates (false-position
        // stall on convex functions).
        const double secant = lo - flo * (hi - lo) / (fhi - flo);
        x = (secant > lo && secant < hi && same_side < 2) ? secant : mid;

        const double fx = g(x);
        if (std::fabs(fx) <= tol) return x;
        const bool update_hi = (fx > 0.0) == (fhi > 0.0);
        same_side = (iter > 0 && update_hi == last_hi) ? same_side + 1 : 0;
        last_hi = update_hi;
        if (update_hi) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::fabs(x))) {
            return x;
        }
    }
    return x;
}

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_gamma: requires x > 0");
    }
    return std::lgamma(x);
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr double fpmin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= 3e-16) return h;
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("incomplete_beta: requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lfront = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(lfront);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_cf(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// Stable artanh for |x| < 1.
inline double artanh(double x) {
    if (!(std::fabs(x) < 1.0)) {
        throw std::domain_error("artanh: requires |x| < 1");
    }
    return 0.5 * std::log1p(2.0 * x / (1.0 - x));
}

/// arcosh(1 + q) for q >= 0, accurate for small q.
inline double arcosh_1p(double q) {
    if (!(q >= 0.0)) {
        throw std::domain_error("arcosh_1p: requires q >= 0");
    }
    return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

/// Integral of sinh(x)^n from 0 to s, n >= 0.
///
/// Evaluated by termwise integration of the Maclaurin series of sinh^n, whose
/// coefficients are all positive, so the sum carries no cancellation at any s.
inline double sinh_power_integral(int n, double s) {
    if (n < 0) throw std::domain_error("sinh_power_integral: requires n >= 0");
    if (!(s >= 0.0)) throw std::domain_error("sinh_power_integral: requires s >= 0");
    if (n == 0) return s;
    if (n == 1) {
        const double sh = std::sinh(0.5 * s);
        return 2.0 * sh * sh;  // cosh(s) - 1
    }

    // Coefficients of sinh(x)^n on x^(n + 2j), j = 0..len-1, by repeated
    // convolution with the sinh series. The length is fixed up front so every
    // kept coefficient is exact: orders beyond n*s + O(sqrt(n*s)) cannot
    // contribute at this s.
    const double ns = n * s;
    const std::size_t len =
        8 + static_cast<std::size_t>((ns + 12.0 * std::sqrt(ns + 4.0) + 60.0 - n) / 2.0);

    std::vector<double> coeff(len, 0.0);
    {
        double sinh_term = 1.0;  // x^(2k+1) / (2k+1)!
        for (std::size_t k = 0; k < len; ++k) {
            if (k > 0) sinh_term /= (2.0 * k) * (2.0 * k + 1.0);
            coeff[k] = sinh_term;
        }
    }
    std::vector<double> next(len);
    for (int pow = 2; pow <= n; ++pow) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < len; ++i) {
            if (coeff[i] == 0.0) continue;
            double sinh_term = 1.0;
            for (std::size_t k = 0; i + k < len; ++k) {
                if (k > 0) sinh_term /= (2.0 * k) * (2.0 * k + 1.0);
                next[i + k] += coeff[i] * sinh_term;
            }
        }
        coeff.swap(next);
    }

    const double s2 = s * s;
    double x_pow = std::pow(s, n + 1);  // s^(n + 2j + 1)
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        const double term = coeff[j] * x_pow / (n + 2.0 * j + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
        x_pow *= s2;
    }
    return sum;
}

}  // namespace hypvis
