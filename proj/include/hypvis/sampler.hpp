#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hypvis/geometry.hpp"
#include "hypvis/measures.hpp"
#include "hypvis/rng.hpp"

// Generation of the truncated Poisson process of lambda-geodesic hyperplanes:
// unit-rate arrivals mapped through the radial quantile give the sorted
// Euclidean radii, paired with independent uniform directions. Truncating at
// r_max = tanh(S/2) is exact for every visibility quantity up to hyperbolic
// distance S, because a hyperplane at Euclidean distance r cannot block any
// point closer than 2 artanh(r).

namespace hypvis {

struct SimConfig {
    int d = 2;
    double lambda = 0.0;
    double gamma = 1.0;
    double s_cutoff = 10.0;          // hyperbolic truncation radius
    std::uint64_t n_max = 1000000;   // hard cap on the hyperplane count
    std::uint64_t seed = 0;

    double r_max() const { return std::tanh(0.5 * s_cutoff); }
    ModelParams params() const { return {d, lambda, gamma}; }

    void validate() const {
        params().validate();
        if (!(s_cutoff > 0.0)) throw std::domain_error("SimConfig: requires s_cutoff > 0");
        if (n_max < 1) throw std::domain_error("SimConfig: requires n_max >= 1");
    }
};

enum class Truncation { radius_cutoff, count_cap };

struct ProcessSample {
    SimConfig config;
    std::vector<double> radii;  // strictly increasing, in (0, r_max]
    std::vector<double> dirs;   // row-major size() x d unit vectors
    Truncation truncated_by = Truncation::radius_cutoff;

    std::size_t size() const { return radii.size(); }
    std::span<const double> direction(std::size_t i) const {
        return {dirs.data() + i * config.d, static_cast<std::size_t>(config.d)};
    }
};

/// Uniform direction on S^{d-1}.
inline Direction sample_direction(int d, Rng& rng) {
    if (d < 2) throw std::domain_error("sample_direction: requires d >= 2");
    Direction u;
    u.coords.resize(d);
    sample_direction_into(d, rng, u.coords);
    return u;
}

/// Lazily generates the hyperplanes of one realization in increasing radius
/// order. Per hyperplane the stream consumes one exponential increment and,
/// if the radius is accepted, one direction; the overshooting radius that
/// ends the stream consumes no direction.
class HyperplaneStream {
public:
    explicit HyperplaneStream(const SimConfig& config)
        : config_(config), rng_(config.seed), r_max_(config.r_max()) {
        config.validate();
    }

    /// Fills r and the d direction components; false once the process is
    /// exhausted by either cutoff.
    bool next(double& r, std::span<double> direction) {
        if (count_ >= config_.n_max) {
            truncated_by_ = Truncation::count_cap;
            return false;
        }
        arrival_ += rng_.exponential();
        const double candidate = radial_quantile(config_.params(), arrival_);
        if (candidate > r_max_) {
            truncated_by_ = Truncation::radius_cutoff;
            return false;
        }
        r = candidate;
        sample_direction_into(config_.d, rng_, direction);
        ++count_;
        return true;
    }

    Truncation truncated_by() const { return truncated_by_; }
    std::uint64_t count() const { return count_; }

private:
    SimConfig config_;
    Rng rng_;
    double r_max_;
    double arrival_ = 0.0;
    std::uint64_t count_ = 0;
    Truncation truncated_by_ = Truncation::radius_cutoff;
};

/// One full realization of the truncated process.
inline ProcessSample sample_process(const SimConfig& config) {
    ProcessSample sample;
    sample.config = config;
    HyperplaneStream stream(config);
    double r = 0.0;
    std::vector<double> u(config.d);
    while (stream.next(r, u)) {
        sample.radii.push_back(r);
        sample.dirs.insert(sample.dirs.end(), u.begin(), u.end());
    }
    sample.truncated_by = stream.truncated_by();
    return sample;
}

/// Hyperplane view of one sample entry.
inline LambdaHyperplane hyperplane_at(const ProcessSample& sample, std::size_t i) {
    auto u = sample.direction(i);
    return {sample.config.lambda, sample.radii[i],
            Direction{std::vector<double>(u.begin(), u.end())}};
}

struct RadiiAsymptoticsRow {
    std::size_t n = 0;
    double mean_scaled = 0.0;  // mean over samples of n^(1/(d-1)) (1 - r_n)
    double predicted = 0.0;    // (gamma / ((d-1) n))^(1/(d-1)) (1+lambda) * n^(1/(d-1))
};

/// Empirical check of the radii growth law: n^(1/(d-1)) (1 - r_n) tends to
/// (gamma/(d-1))^(1/(d-1)) (1 + lambda). Rows are emitted at geometrically
/// spaced indices up to the shortest sample.
inline std::vector<RadiiAsymptoticsRow> radii_asymptotics_diagnostic(
    const std::vector<ProcessSample>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("radii_asymptotics_diagnostic: no samples");
    }
    const SimConfig& config = samples.front().config;
    std::size_t min_len = samples.front().size();
    for (const auto& s : samples) min_len = std::min(min_len, s.size());
    if (min_len == 0) {
        throw std::invalid_argument("radii_asymptotics_diagnostic: empty sample");
    }

    const double exponent = 1.0 / (config.d - 1);
    const double limit =
        std::pow(config.gamma / (config.d - 1), exponent) * (1.0 + config.lambda);

    std::vector<std::size_t> checkpoints;
    for (std::size_t n = 10; n <= min_len; n = (n * 8 + 4) / 5) {
        checkpoints.push_back(n);
    }
    if (checkpoints.empty() || checkpoints.back() != min_len) {
        checkpoints.push_back(min_len);
    }

    std::vector<RadiiAsymptoticsRow> rows;
    rows.reserve(checkpoints.size());
    for (std::size_t n : checkpoints) {
        double acc = 0.0;
        for (const auto& s : samples) {
            acc += std::pow(static_cast<double>(n), exponent) * (1.0 - s.radii[n - 1]);
        }
        rows.push_back({n, acc / samples.size(), limit});
    }
    return rows;
}

}  // namespace hypvis
