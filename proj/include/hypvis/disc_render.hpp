#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypvis/sampler.hpp"
#include "hypvis/visibility.hpp"

// Deterministic SVG rendering of d = 2 scenes in the Poincare disc:
// hyperplanes as circles clipped to the disc, the visibility region as a
// filled star-shaped polygon around the origin. Output is byte-stable for
// fixed inputs.

namespace hypvis {

struct RenderOptions {
    int canvas_px = 1000;       // square viewBox edge
    int n_boundary_rays = 720;  // polygon resolution when a profile is absent
    bool show_region = true;
    double stroke_width_px = 1.0;
    std::string region_fill = "#d62728";
    std::string hyperplane_stroke = "#000000";

    void validate() const {
        if (canvas_px < 100) throw std::domain_error("RenderOptions: requires canvas_px >= 100");
        if (n_boundary_rays < 16) {
            throw std::domain_error("RenderOptions: requires n_boundary_rays >= 16");
        }
    }
};

/// Euclidean circle realizing one hyperplane, in ball coordinates.
struct SceneCircle {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

/// Circle data for every hyperplane of a d = 2 sample: center (r + R) u,
/// radius R. Verifies that each circle meets the unit circle at the angle
/// prescribed by lambda (|cos theta - lambda| <= 1e-9) before handing it out.
inline std::vector<SceneCircle> disc_scene_circles(const ProcessSample& sample) {
    if (sample.config.d != 2) {
        throw std::invalid_argument("disc_scene_circles: rendering supports d = 2 only");
    }
    const double lambda = sample.config.lambda;
    std::vector<SceneCircle> circles;
    circles.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double r = sample.radii[i];
        const double R = euclid_radius(lambda, r);
        const auto u = sample.direction(i);
        const double dc = r + R;
        const double cos_theta = (1.0 + R * R - dc * dc) / (2.0 * R);
        if (std::fabs(cos_theta - lambda) > 1e-9) {
            throw std::logic_error("disc_scene_circles: boundary angle check failed");
        }
        circles.push_back({dc * u[0], dc * u[1], R});
    }
    return circles;
}

namespace detail {

inline std::string fmt_px(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace detail

/// SVG document for a d = 2 scene: unit circle, hyperplane circles clipped to
/// the disc and, when requested, the visibility region polygon with vertices
/// at Euclidean radius tanh(distance/2) along the profile directions.
inline std::string render_disc_svg(const ProcessSample& sample,
                                   const VisibilityProfile& profile,
                                   const RenderOptions& opts = {}) {
    opts.validate();
    if (sample.config.d != 2) {
        throw std::invalid_argument("render_disc_svg: rendering supports d = 2 only");
    }

    const double n = opts.canvas_px;
    const double cx = 0.5 * n;
    const double cy = 0.5 * n;
    const double scale = 0.48 * n;
    auto px = [&](double x) { return detail::fmt_px(cx + scale * x); };
    auto py = [&](double y) { return detail::fmt_px(cy - scale * y); };

    const auto circles = disc_scene_circles(sample);

    std::string svg;
    svg.reserve(256 + 128 * circles.size() + 24 * profile.size());
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
           std::to_string(opts.canvas_px) + " " + std::to_string(opts.canvas_px) + "\">\n";
    {
        char meta[256];
        std::snprintf(meta, sizeof(meta),
                      "<!-- scene: d=2 lambda=%.17g gamma=%.17g s_cutoff=%.17g seed=%llu -->\n",
                      sample.config.lambda, sample.config.gamma, sample.config.s_cutoff,
                      static_cast<unsigned long long>(sample.config.seed));
        svg += meta;
    }
    svg += "<defs><clipPath id=\"disc\"><circle cx=\"" + detail::fmt_px(cx) +
           "\" cy=\"" + detail::fmt_px(cy) + "\" r=\"" + detail::fmt_px(scale) +
           "\"/></clipPath></defs>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg += "<g clip-path=\"url(#disc)\">\n";

    if (opts.show_region && profile.size() >= 3) {
        svg += "<polygon fill=\"" + opts.region_fill + "\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < profile.size(); ++i) {
            const auto dir = profile.direction(i);
            const double rho = std::tanh(0.5 * profile.distances[i]);
            if (i > 0) svg += ' ';
            svg += px(rho * dir[0]) + "," + py(rho * dir[1]);
        }
        svg += "\"/>\n";
    }

    const std::string stroke_attr = " stroke=\"" + opts.hyperplane_stroke +
                                    "\" stroke-width=\"" +
                                    detail::fmt_px(opts.stroke_width_px) +
                                    "\" fill=\"none\"/>\n";
    for (const auto& c : circles) {
        svg += "<circle cx=\"" + px(c.cx) + "\" cy=\"" + py(c.cy) + "\" r=\"" +
               detail::fmt_px(scale * c.radius) + "\"" + stroke_attr;
    }
    svg += "</g>\n";
    svg += "<circle cx=\"" + detail::fmt_px(cx) + "\" cy=\"" + detail::fmt_px(cy) +
           "\" r=\"" + detail::fmt_px(scale) + "\" stroke=\"#000000\" stroke-width=\"" +
           detail::fmt_px(opts.stroke_width_px) + "\" fill=\"none\"/>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace hypvis
