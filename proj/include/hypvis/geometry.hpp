#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hypvis/numerics.hpp"

// Deterministic geometry of the Poincare ball model: hyperbolic distances,
// lambda-geodesic hyperplanes realized as Euclidean spheres, their boundary
// shadows, and the segment/ray hit tests.
//
// Conventions: a hyperplane is parametrized by (lambda, r, u) where lambda in
// [0,1] is the normal curvature, r in [0,1) the Euclidean distance from the
// origin and u the unit normal direction pointing away from the origin. The
// origin never lies on the convex side (signed hyperbolic distance s > 0, with
// r = tanh(s/2)); for lambda = 0 the hypersurface has no intrinsic convex side
// and the same (s, u) orientation convention is adopted. Equality against a
// hit threshold counts as a hit (closed caps, closed segments).

namespace hypvis {

struct BallPoint {
    std::vector<double> coords;  // Euclidean norm < 1
};

struct Direction {
    std::vector<double> coords;  // unit norm
};

struct LambdaHyperplane {
    double lambda = 0.0;  // normal curvature, in [0, 1]
    double r = 0.0;       // Euclidean distance from the origin, in [0, 1)
    Direction u;
};

/// Closed spherical cap {x in S^{d-1} : <x, u> >= height}.
struct ShadowCap {
    Direction u;
    double height = 0.0;  // in [0, 1]
};

/// Geodesic segment of hyperbolic length h starting at the origin.
struct SegmentSpec {
    double h = 0.0;
    Direction direction;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Hyperbolic distance from the origin: 2 artanh(|y|).
inline double dist_origin(const BallPoint& y) {
    const double n = norm(y.coords);
    if (!(n < 1.0)) {
        throw std::domain_error("dist_origin: point must lie strictly inside the unit ball");
    }
    return 2.0 * artanh(n);
}

/// Hyperbolic distance between two ball points,
/// arcosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))).
inline double dist_pair(const BallPoint& x, const BallPoint& y) {
    const double nx = norm(x.coords);
    const double ny = norm(y.coords);
    if (!(nx < 1.0) || !(ny < 1.0)) {
        throw std::domain_error("dist_pair: points must lie strictly inside the unit ball");
    }
    double diff2 = 0.0;
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        const double d = x.coords[i] - y.coords[i];
        diff2 += d * d;
    }
    const double q = 2.0 * diff2 / ((1.0 - nx * nx) * (1.0 - ny * ny));
    return arcosh_1p(q);
}

/// Euclidean radius R = (1 - r^2) / (2 (lambda + r)) of the sphere realizing
/// the hyperplane in the ball model. The flat case lambda = r = 0 has no
/// finite radius and is rejected; predicates route it through the r = 0
/// branch instead.
inline double euclid_radius(double lambda, double r) {
    if (!(lambda + r > 0.0)) {
        throw std::domain_error("euclid_radius: degenerate flat hyperplane (lambda = r = 0)");
    }
    return (1.0 - r * r) / (2.0 * (lambda + r));
}

/// Height phi(r) of the boundary shadow cap,
/// 2 sqrt(r (lambda + r) (1 + lambda r)) / (1 + 2 lambda r + r^2).
/// Strictly increasing in r; phi(0) = 0 and phi(1) = 1 by continuity.
inline double cap_height_phi(double lambda, double r) {
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(r >= 0.0 && r <= 1.0)) {
        throw std::domain_error("cap_height_phi: requires lambda in [0,1], r in [0,1]");
    }
    if (r == 0.0) return 0.0;
    return 2.0 * std::sqrt(r * (lambda + r) * (1.0 + lambda * r)) /
           (1.0 + 2.0 * lambda * r + r * r);
}

/// Two-term expansion of the cap height deficit 1 - phi(1 - eps):
/// eps^2 (1 + eps) / (2 (1 + lambda)^2).
inline double cap_height_deficit_asymptotic(double lambda, double eps) {
    const double c = 1.0 + lambda;
    return eps * eps * (1.0 + eps) / (2.0 * c * c);
}

/// Normalized surface measure of the closed cap of height h on S^{d-1}.
inline double cap_measure(int d, double h) {
    if (d < 2) throw std::domain_error("cap_measure: requires d >= 2");
    if (!(h >= 0.0 && h <= 1.0)) {
        throw std::domain_error("cap_measure: requires h in [0, 1]");
    }
    if (h == 0.0) return 0.5;
    if (h == 1.0) return 0.0;
    // Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)) * Integral_h^1 (1-s^2)^((d-3)/2) ds
    // reduces to the regularized incomplete beta.
    return 0.5 * (1.0 - incomplete_beta(0.5, 0.5 * (d - 1), h * h));
}

/// Radius r_c below which a hyperplane that reaches the ray at all also
/// reaches it within the segment: positive root of
/// r^2 + ((1 - t^2)/lambda) r - t^2 = 0 with t = tanh(h/2).
inline double critical_radius_rc(double lambda, double h) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::domain_error("critical_radius_rc: requires lambda in (0, 1]");
    }
    if (!(h > 0.0)) throw std::domain_error("critical_radius_rc: requires h > 0");
    const double t = std::tanh(0.5 * h);
    const double a = (1.0 - t * t) / (2.0 * lambda);
    // Conjugate form of -a + sqrt(a^2 + t^2); stable for small lambda.
    return t * t / (a + std::sqrt(a * a + t * t));
}

namespace detail {

inline double critical_radius_from_t(double lambda, double t) {
    const double a = (1.0 - t * t) / (2.0 * lambda);
    return t * t / (a + std::sqrt(a * a + t * t));
}

}  // namespace detail

/// Minimal <u, e1> for the hyperplane's sphere to touch the ray at all
/// (tangency condition). Coincides with the shadow cap height phi(r).
inline double tangency_threshold(double lambda, double r) {
    return 2.0 * std::sqrt((r * r * lambda + r) * (lambda + r)) /
           (r * r + 2.0 * lambda * r + 1.0);
}

/// Minimal <u, e1> for the first intersection to fall within Euclidean reach
/// t = tanh(h/2). Valid for all lambda in [0, 1]; at lambda = 0 this is the
/// only binding constraint.
inline double endpoint_threshold(double lambda, double r, double t) {
    return (t * t * (lambda + r) + r * r * lambda + r) /
           (t * (r * r + 2.0 * lambda * r + 1.0));
}

/// Hit threshold on u1 = <u, e1> for a hyperplane at distance r against a
/// segment of Euclidean reach t, 0 < r <= t.
inline double segment_hit_threshold(double lambda, double r, double t) {
    if (lambda == 0.0) return endpoint_threshold(0.0, r, t);
    if (r < detail::critical_radius_from_t(lambda, t)) {
        return tangency_threshold(lambda, r);
    }
    return endpoint_threshold(lambda, r, t);
}

/// Whether the hyperplane meets the geodesic segment from the origin.
/// Case split: r = 0 always hits; r > tanh(h/2) never hits; otherwise the
/// verdict compares u1 against the applicable closed threshold.
inline bool hits_segment(const LambdaHyperplane& H, const SegmentSpec& seg) {
    if (H.r == 0.0) return true;
    const double t = std::tanh(0.5 * seg.h);
    if (H.r > t) return false;
    const double u1 = dot(H.u.coords, seg.direction.coords);
    return u1 >= segment_hit_threshold(H.lambda, H.r, t);
}

/// Independent oracle for hits_segment: solves the intersection quadratic
/// p(x) = x^2 - 2 (r+R) u1 x + (r+R)^2 - R^2 directly and checks for a root
/// in [0, tanh(h/2)]. Shares no threshold algebra with hits_segment. The
/// degenerate flat hyperplane (lambda = r = 0) is handled by walking n_steps
/// sample points along the segment.
inline bool hits_segment_bruteforce(const LambdaHyperplane& H, const SegmentSpec& seg,
                                    int n_steps = 64) {
    if (n_steps < 2) throw std::domain_error("hits_segment_bruteforce: requires n_steps >= 2");
    const double t = std::tanh(0.5 * seg.h);
    const double u1 = dot(H.u.coords, seg.direction.coords);

    if (H.lambda == 0.0 && H.r == 0.0) {
        // Flat hyperplane through the origin with normal u: look for a sign
        // change (or a zero) of <x e1, u> = x u1 along the segment.
        double prev = 0.0 * u1;
        for (int i = 0; i < n_steps; ++i) {
            const double x = t * static_cast<double>(i) / (n_steps - 1);
            const double v = x * u1;
            if (v == 0.0 || (v > 0.0) != (prev > 0.0)) return true;
            prev = v;
        }
        return false;
    }

    const double R = (1.0 - H.r * H.r) / (2.0 * (H.lambda + H.r));
    const double c = H.r + R;  // center distance along u
    // p(x) = x^2 - 2 c u1 x + c^2 - R^2
    const double disc = c * c * u1 * u1 - (c * c - R * R);
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    const double x1 = c * u1 - sq;
    const double x2 = c * u1 + sq;
    return (x1 >= 0.0 && x1 <= t) || (x2 >= 0.0 && x2 <= t);
}

/// Hyperbolic distance along a unit ray from the origin to the first
/// intersection with the hyperplane, if one exists within the open ball.
/// Equals 2 artanh(x-) with x- the smaller nonnegative root of the
/// intersection quadratic; 0 for any hyperplane through the origin (r = 0).
inline std::optional<double> ray_first_hit(const LambdaHyperplane& H, const Direction& ray) {
    if (H.r == 0.0) return 0.0;
    const double u1 = dot(H.u.coords, ray.coords);
    if (u1 <= 0.0) return std::nullopt;
    const double R = (1.0 - H.r * H.r) / (2.0 * (H.lambda + H.r));
    const double c = H.r + R;
    const double disc = c * c * u1 * u1 - (c * c - R * R);
    if (disc < 0.0) return std::nullopt;
    const double x = std::max(0.0, c * u1 - std::sqrt(disc));
    if (x >= 1.0) return std::nullopt;
    return 2.0 * artanh(x);
}

/// Boundary shadow of a hyperplane: the closed cap of height phi(r) about u.
inline ShadowCap shadow_cap(const LambdaHyperplane& H) {
    return {H.u, cap_height_phi(H.lambda, H.r)};
}

}  // namespace hypvis
