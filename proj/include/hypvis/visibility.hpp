#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "hypvis/geometry.hpp"
#include "hypvis/measures.hpp"
#include "hypvis/rng.hpp"
#include "hypvis/sampler.hpp"

// Visibility from the origin: per-direction visible distances, exact circle
// coverage by the hyperplane shadows (d = 2), statistical sphere coverage
// (d >= 3), and the Monte-Carlo estimators for the mean visible volume and
// the covering phase transition.
//
// Trials are independent units: trial i runs on the derived seed
// config.seed ^ i, so results are reproducible per trial and invariant under
// the --jobs level (aggregation always happens in trial-index order).

namespace hypvis {

struct VisibilityProfile {
    int d = 2;
    std::vector<double> directions;  // row-major n x d unit vectors
    std::vector<double> distances;   // visible hyperbolic distance per ray
    std::vector<bool> censored;      // true: no hit before the cutoff
    double s_cutoff = 0.0;

    std::size_t size() const { return distances.size(); }
    std::span<const double> direction(std::size_t i) const {
        return {directions.data() + i * d, static_cast<std::size_t>(d)};
    }
};

struct CoverageVerdict {
    enum class Status { covered, not_covered_yet, undecided };
    Status status = Status::undecided;
    std::size_t caps_used = 0;
    // d = 2: exact uncovered arc length in radians; d >= 3: fraction of the
    // Monte-Carlo test points missed by every cap. Zero whenever covered.
    double uncovered_measure_estimate = 0.0;
};

namespace detail {

inline constexpr double arc_merge_tol = 1e-12;
inline constexpr double z_99 = 2.5758293035489004;  // two-sided 99% normal quantile
inline constexpr std::uint64_t ray_seed_salt = 0x72617973ULL;   // mixes ray draws away from the process stream
inline constexpr std::uint64_t cover_seed_salt = 0x636f766572ULL;

template <class Fn>
void parallel_for_indexed(std::size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Visible hyperbolic distance along a unit ray, clamped at the cutoff.
/// Returns (distance, censored); censored means no hyperplane hit earlier.
inline std::pair<double, bool> visible_distance(const ProcessSample& sample,
                                                std::span<const double> ray) {
    const double lambda = sample.config.lambda;
    const double s_cutoff = sample.config.s_cutoff;
    double best = s_cutoff;
    bool censored = true;
    double r_stop = std::tanh(0.5 * best);

    const std::size_t n = sample.size();
    const int d = sample.config.d;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = sample.radii[i];
        // Sorted radii: a hyperplane at distance r blocks nothing closer than
        // 2 artanh(r), so the scan can stop here.
        if (r >= r_stop) break;
        if (r == 0.0) {
            best = 0.0;
            censored = false;
            break;
        }
        const double u1 = dot({sample.dirs.data() + i * d, static_cast<std::size_t>(d)}, ray);
        if (u1 <= 0.0) continue;
        if (u1 < tangency_threshold(lambda, r)) continue;  // misses the sphere
        const double R = (1.0 - r * r) / (2.0 * (lambda + r));
        const double c = r + R;
        const double disc = std::max(0.0, c * c * u1 * u1 - (c * c - R * R));
        const double x = std::max(0.0, c * u1 - std::sqrt(disc));
        if (x >= 1.0) continue;
        const double dist = 2.0 * artanh(x);
        if (dist < best) {
            best = dist;
            censored = false;
            r_stop = std::tanh(0.5 * best);
        }
    }
    return {std::min(best, s_cutoff), censored};
}

/// Per-direction profile over an explicit set of rays.
inline VisibilityProfile visibility_profile(const ProcessSample& sample,
                                            const std::vector<double>& directions) {
    const int d = sample.config.d;
    VisibilityProfile profile;
    profile.d = d;
    profile.s_cutoff = sample.config.s_cutoff;
    profile.directions = directions;
    const std::size_t n = directions.size() / d;
    profile.distances.resize(n);
    profile.censored.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [dist, cens] = visible_distance(
            sample, {directions.data() + i * d, static_cast<std::size_t>(d)});
        profile.distances[i] = dist;
        profile.censored[i] = cens;
    }
    return profile;
}

/// Deterministic equiangular ray grid for d = 2.
inline std::vector<double> equiangular_directions(int n_rays) {
    std::vector<double> dirs(2 * static_cast<std::size_t>(n_rays));
    for (int k = 0; k < n_rays; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n_rays;
        dirs[2 * k] = std::cos(angle);
        dirs[2 * k + 1] = std::sin(angle);
    }
    return dirs;
}

inline VisibilityProfile visibility_profile(const ProcessSample& sample, int n_rays) {
    if (sample.config.d != 2) {
        throw std::invalid_argument("visibility_profile: ray-count overload is d = 2 only");
    }
    return visibility_profile(sample, equiangular_directions(n_rays));
}

/// Exact closed-arc union test on the circle. Caps are (center angle,
/// half-width) pairs; arcs touching within 1e-12 are treated as overlapping.
inline CoverageVerdict circle_coverage(const std::vector<std::pair<double, double>>& caps) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    CoverageVerdict verdict;
    verdict.caps_used = caps.size();
    if (caps.empty()) {
        verdict.status = CoverageVerdict::Status::not_covered_yet;
        verdict.uncovered_measure_estimate = two_pi;
        return verdict;
    }

    std::vector<std::pair<double, double>> intervals;  // [start, end] in [0, 2pi]
    intervals.reserve(caps.size() + 8);
    for (const auto& [center, half] : caps) {
        double start = std::fmod(center - half, two_pi);
        if (start < 0.0) start += two_pi;
        const double end = start + 2.0 * half;
        if (end <= two_pi) {
            intervals.emplace_back(start, end);
        } else {
            intervals.emplace_back(start, two_pi);
            intervals.emplace_back(0.0, end - two_pi);
        }
    }
    std::sort(intervals.begin(), intervals.end());

    double union_length = 0.0;
    double cur_start = intervals.front().first;
    double cur_end = intervals.front().second;
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        const auto& [s, e] = intervals[i];
        if (s <= cur_end + detail::arc_merge_tol) {
            cur_end = std::max(cur_end, e);
        } else {
            union_length += cur_end - cur_start;
            cur_start = s;
            cur_end = e;
        }
    }
    union_length += cur_end - cur_start;

    const double uncovered = std::max(0.0, two_pi - union_length);
    if (uncovered < 1e-9) {
        verdict.status = CoverageVerdict::Status::covered;
        verdict.uncovered_measure_estimate = 0.0;
    } else {
        verdict.status = CoverageVerdict::Status::not_covered_yet;
        verdict.uncovered_measure_estimate = uncovered;
    }
    return verdict;
}

/// Whether the shadow caps of the sampled hyperplanes cover the ideal
/// boundary. d = 2 is decided exactly via the arc union; d >= 3 tests
/// mc_points uniform sphere points and can report a non-covering witness or
/// stay undecided, never a certified covering.
inline CoverageVerdict covering_status(const ProcessSample& sample, int mc_points = 4096) {
    const int d = sample.config.d;
    const double lambda = sample.config.lambda;
    const std::size_t n = sample.size();

    if (d == 2) {
        std::vector<std::pair<double, double>> caps;
        caps.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto u = sample.direction(i);
            const double phi = cap_height_phi(lambda, sample.radii[i]);
            caps.emplace_back(std::atan2(u[1], u[0]), std::acos(std::min(1.0, phi)));
        }
        return circle_coverage(caps);
    }

    if (mc_points < 1) throw std::domain_error("covering_status: requires mc_points >= 1");
    std::vector<double> heights(n);
    for (std::size_t i = 0; i < n; ++i) {
        heights[i] = cap_height_phi(lambda, sample.radii[i]);
    }
    Rng rng(derive_seed(sample.config.seed, detail::cover_seed_salt));
    std::vector<double> point(d);
    std::size_t missed = 0;
    for (int p = 0; p < mc_points; ++p) {
        sample_direction_into(d, rng, point);
        bool hit = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (dot(point, sample.direction(i)) >= heights[i]) {
                hit = true;
                break;
            }
        }
        if (!hit) ++missed;
    }
    CoverageVerdict verdict;
    verdict.caps_used = n;
    verdict.uncovered_measure_estimate = static_cast<double>(missed) / mc_points;
    verdict.status = missed > 0 ? CoverageVerdict::Status::not_covered_yet
                                : CoverageVerdict::Status::undecided;
    return verdict;
}

namespace detail {

// Streaming d = 2 coverage trial: arcs accumulate while the union is checked
// at doubling checkpoints, so supercritical trials stop long before the
// radius cutoff. The verdict matches covering_status(sample_process(cfg)).
inline CoverageVerdict d2_coverage_trial(const SimConfig& cfg) {
    HyperplaneStream stream(cfg);
    std::vector<std::pair<double, double>> caps;
    std::size_t next_check = 512;
    double r = 0.0;
    double u[2];
    while (stream.next(r, {u, 2})) {
        const double phi = cap_height_phi(cfg.lambda, r);
        caps.emplace_back(std::atan2(u[1], u[0]), std::acos(std::min(1.0, phi)));
        if (caps.size() == next_check) {
            CoverageVerdict verdict = circle_coverage(caps);
            if (verdict.status == CoverageVerdict::Status::covered) return verdict;
            next_check *= 2;
        }
    }
    return circle_coverage(caps);
}

}  // namespace detail

struct CoveringEstimate {
    double fraction_covered = 0.0;
    double ci_halfwidth = 0.0;  // normal approximation, 99%
};

/// Fraction of independent trials whose truncated shadow set already covers
/// the boundary. One-sided by construction: trials uncovered at the cutoff
/// might still be covered by deeper hyperplanes, so the fraction
/// underestimates the true covering probability. Only d = 2 can certify a
/// covering, so for d >= 3 the fraction is always 0.
inline CoveringEstimate estimate_covering_probability(const SimConfig& config, int trials,
                                                      int mc_points = 4096, int jobs = 1) {
    config.validate();
    if (trials < 1) throw std::domain_error("estimate_covering_probability: requires trials >= 1");

    std::vector<char> covered(trials, 0);
    detail::parallel_for_indexed(trials, jobs, [&](std::size_t i) {
        SimConfig trial_cfg = config;
        trial_cfg.seed = derive_seed(config.seed, i);
        CoverageVerdict verdict;
        if (config.d == 2) {
            verdict = detail::d2_coverage_trial(trial_cfg);
        } else {
            verdict = covering_status(sample_process(trial_cfg), mc_points);
        }
        covered[i] = verdict.status == CoverageVerdict::Status::covered ? 1 : 0;
    });

    std::size_t hits = 0;
    for (char c : covered) hits += c;
    const double p = static_cast<double>(hits) / trials;
    const double halfwidth = detail::z_99 * std::sqrt(p * (1.0 - p) / trials);
    return {p, halfwidth};
}

struct MeanVolumeEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    double censored_fraction = 0.0;
};

/// Surface area of the unit sphere S^{d-1}.
inline double sphere_surface_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::exp(log_gamma(0.5 * d));
}

namespace detail {

inline double mean_volume_trial(const SimConfig& cfg, int n_rays, std::size_t& censored_rays) {
    const int d = cfg.d;
    const double lambda = cfg.lambda;

    std::vector<double> rays;
    if (d == 2) {
        rays = equiangular_directions(n_rays);
    } else {
        // Random rays avoid grid bias in d >= 3; drawn from a stream separate
        // from the process so the sample itself is unchanged.
        rays.resize(static_cast<std::size_t>(n_rays) * d);
        Rng ray_rng(derive_seed(cfg.seed, ray_seed_salt));
        for (int j = 0; j < n_rays; ++j) {
            sample_direction_into(d, ray_rng, {rays.data() + static_cast<std::size_t>(j) * d,
                                               static_cast<std::size_t>(d)});
        }
    }

    std::vector<double> dist(n_rays, cfg.s_cutoff);
    double max_dist = cfg.s_cutoff;
    double r_stop = std::tanh(0.5 * max_dist);

    HyperplaneStream stream(cfg);
    double r = 0.0;
    std::vector<double> u(d);
    while (stream.next(r, u)) {
        if (r >= r_stop) break;  // no ray can improve past this radius
        const double phi = cap_height_phi(lambda, r);
        const double R = (1.0 - r * r) / (2.0 * (lambda + r));
        const double c = r + R;
        bool updated = false;
        for (int j = 0; j < n_rays; ++j) {
            const double u1 = dot(u, {rays.data() + static_cast<std::size_t>(j) * d,
                                      static_cast<std::size_t>(d)});
            if (u1 < phi) continue;
            const double disc = std::max(0.0, c * c * u1 * u1 - (c * c - R * R));
            const double x = std::max(0.0, c * u1 - std::sqrt(disc));
            if (x >= 1.0) continue;
            const double hit = 2.0 * artanh(x);
            if (hit < dist[j]) {
                dist[j] = hit;
                updated = true;
            }
        }
        if (updated) {
            max_dist = *std::max_element(dist.begin(), dist.end());
            r_stop = std::tanh(0.5 * max_dist);
        }
    }

    double acc = 0.0;
    for (int j = 0; j < n_rays; ++j) {
        if (dist[j] >= cfg.s_cutoff) ++censored_rays;
        acc += sinh_power_integral(d - 1, dist[j]);
    }
    return sphere_surface_area(d) * acc / n_rays;
}

}  // namespace detail

/// Monte-Carlo estimate of the mean visible volume: per trial the polar
/// integral (omega_d / n_rays) * sum_rays Integral_0^{s_u} sinh^{d-1},
/// averaged over independent trials. Censored rays enter at the cutoff and
/// are reported as a bias indicator.
inline MeanVolumeEstimate estimate_mean_volume(const SimConfig& config, int trials,
                                               int n_rays, int jobs = 1) {
    config.validate();
    if (trials < 1 || n_rays < 1) {
        throw std::domain_error("estimate_mean_volume: requires trials, n_rays >= 1");
    }

    std::vector<double> volume(trials, 0.0);
    std::vector<std::size_t> censored(trials, 0);
    detail::parallel_for_indexed(trials, jobs, [&](std::size_t i) {
        SimConfig trial_cfg = config;
        trial_cfg.seed = derive_seed(config.seed, i);
        volume[i] = detail::mean_volume_trial(trial_cfg, n_rays, censored[i]);
    });

    double mean = 0.0;
    for (double v : volume) mean += v;
    mean /= trials;
    double ss = 0.0;
    for (double v : volume) ss += (v - mean) * (v - mean);
    const double std_error = trials > 1 ? std::sqrt(ss / (trials - 1.0) / trials) : 0.0;
    std::size_t censored_total = 0;
    for (std::size_t c : censored) censored_total += c;
    return {mean, std_error,
            static_cast<double>(censored_total) / (static_cast<double>(trials) * n_rays)};
}

struct PhaseScanRow {
    double gamma = 0.0;
    double fraction_covered = 0.0;
    double ci_halfwidth = 0.0;
};

/// Covering fraction per intensity, sorted by gamma. All intensities share
/// the master seed: trial i uses the same arrival/direction stream for every
/// gamma, which couples the rows monotonically.
inline std::vector<PhaseScanRow> phase_scan(int d, double lambda,
                                            std::vector<double> gammas, int trials,
                                            double s_cutoff, std::uint64_t seed,
                                            int mc_points = 4096, int jobs = 1) {
    if (gammas.empty()) throw std::domain_error("phase_scan: requires at least one gamma");
    std::sort(gammas.begin(), gammas.end());
    std::vector<PhaseScanRow> rows;
    rows.reserve(gammas.size());
    for (double gamma : gammas) {
        SimConfig cfg;
        cfg.d = d;
        cfg.lambda = lambda;
        cfg.gamma = gamma;
        cfg.s_cutoff = s_cutoff;
        cfg.seed = seed;
        const CoveringEstimate est = estimate_covering_probability(cfg, trials, mc_points, jobs);
        rows.push_back({gamma, est.fraction_covered, est.ci_halfwidth});
    }
    return rows;
}

struct SheppRow {
    std::size_t n = 0;
    double ell = 0.0;          // arccos(phi(r_n)) / pi
    double partial_sum = 0.0;  // sum_{m<=n} exp(ell_1+...+ell_m) / m^2
};

/// Arc-length diagnostic of the critical d = 2 regime: emits the normalized
/// shadow arc lengths ell_n of one realization together with the partial
/// sums of the series sum exp(ell_1+...+ell_n)/n^2, whose divergence implies
/// boundedness at criticality. n ell_n tends to 1 when gamma = gamma_crit.
inline std::vector<SheppRow> shepp_diagnostic(const SimConfig& config, int n_terms) {
    if (config.d != 2) throw std::domain_error("shepp_diagnostic: requires d = 2");
    if (n_terms < 10) throw std::domain_error("shepp_diagnostic: requires n_terms >= 10");

    SimConfig cfg = config;
    cfg.n_max = n_terms;
    cfg.s_cutoff = 36.0;  // r_max within one ulp of 1; the count cap decides
    cfg.validate();

    std::vector<SheppRow> rows;
    rows.reserve(n_terms);
    HyperplaneStream stream(cfg);
    double r = 0.0;
    double u[2];
    double ell_sum = 0.0;
    double shepp_sum = 0.0;
    std::size_t n = 0;
    while (stream.next(r, {u, 2})) {
        ++n;
        const double phi = cap_height_phi(cfg.lambda, r);
        const double ell = std::acos(std::min(1.0, phi)) / std::numbers::pi;
        ell_sum += ell;
        shepp_sum += std::exp(ell_sum) / (static_cast<double>(n) * static_cast<double>(n));
        rows.push_back({n, ell, shepp_sum});
    }
    return rows;
}

struct VisibleDistanceSample {
    std::vector<double> distances;  // uncensored visible distances, pooled
    std::size_t censored = 0;
};

/// Pools visible distances along e_1 over independent trials (one ray per
/// trial). Censored trials are counted but contribute no distance.
inline VisibleDistanceSample sample_visible_distances(const SimConfig& config, int trials,
                                                      int jobs = 1) {
    config.validate();
    if (trials < 1) throw std::domain_error("sample_visible_distances: requires trials >= 1");

    std::vector<double> pooled(trials);
    detail::parallel_for_indexed(trials, jobs, [&](std::size_t i) {
        SimConfig trial_cfg = config;
        trial_cfg.seed = derive_seed(config.seed, i);
        // Single-ray trial: stream until the first-hit distance is settled.
        const int d = trial_cfg.d;
        std::vector<double> ray(d, 0.0);
        ray[0] = 1.0;
        HyperplaneStream stream(trial_cfg);
        double best = trial_cfg.s_cutoff;
        double r_stop = std::tanh(0.5 * best);
        double r = 0.0;
        std::vector<double> u(d);
        while (stream.next(r, u)) {
            if (r >= r_stop) break;
            if (u[0] < tangency_threshold(trial_cfg.lambda, r)) continue;
            const double R = (1.0 - r * r) / (2.0 * (trial_cfg.lambda + r));
            const double c = r + R;
            const double disc = std::max(0.0, c * c * u[0] * u[0] - (c * c - R * R));
            const double x = std::max(0.0, c * u[0] - std::sqrt(disc));
            if (x >= 1.0) continue;
            const double hit = 2.0 * artanh(x);
            if (hit < best) {
                best = hit;
                r_stop = std::tanh(0.5 * best);
            }
        }
        pooled[i] = best;
    });

    VisibleDistanceSample out;
    out.distances.reserve(trials);
    for (double v : pooled) {
        if (v >= config.s_cutoff) {
            ++out.censored;
        } else {
            out.distances.push_back(v);
        }
    }
    return out;
}

}  // namespace hypvis
