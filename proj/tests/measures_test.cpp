#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hypvis/measures.hpp"

using namespace hypvis;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(GammaCrit, ExactLowDimensionValues) {
    EXPECT_NEAR(gamma_crit(2), kPi, 1e-12);
    EXPECT_NEAR(gamma_crit(3), 8.0, 1e-12);
    EXPECT_NEAR(gamma_crit(4), 4.5 * kPi, 1e-12);
    EXPECT_THROW(gamma_crit(1), std::domain_error);
}

TEST(GammaStar, ClosedForms) {
    EXPECT_DOUBLE_EQ(gamma_star(5, 0.0), 0.0);
    EXPECT_NEAR(gamma_star(2, 2.7), 2.7 / kPi, 1e-14);
    EXPECT_NEAR(gamma_star(3, 2.7), 2.7 / 4.0, 1e-14);
    // gamma* at the critical intensity equals d - 1.
    for (int d = 2; d <= 6; ++d) {
        EXPECT_NEAR(gamma_star(d, gamma_crit(d)), d - 1.0, 1e-12);
    }
}

TEST(RadialIntensity, ExamplesAndDomain) {
    const ModelParams p2{2, 1.0, 1.0};
    EXPECT_NEAR(radial_intensity(p2, 0.0), 2.0, 1e-15);
    EXPECT_NEAR(radial_intensity({2, 1.0, 3.0}, 0.5), 8.0 * 3.0, 1e-12);
    // d = 2, lambda = 0 closed shape 2 gamma (1+r^2)/(1-r^2)^2.
    for (double r = 0.0; r < 1.0; r += 0.13) {
        EXPECT_NEAR(radial_intensity({2, 0.0, 1.7}, r),
                    2.0 * 1.7 * (1.0 + r * r) / std::pow(1.0 - r * r, 2), 1e-11);
    }
    EXPECT_THROW(radial_intensity(p2, 1.0), std::domain_error);
    EXPECT_THROW(radial_intensity(p2, -0.1), std::domain_error);
}

TEST(RadialCumulative, ClosedFormsAndQuadratureOracle) {
    EXPECT_DOUBLE_EQ(radial_cumulative({3, 0.4, 2.0}, 0.0), 0.0);
    EXPECT_NEAR(radial_cumulative({2, 1.0, 1.0}, 0.5), 2.0, 1e-13);
    // d = 2, lambda = 1 also matches 2z/(1-z).
    EXPECT_NEAR(radial_cumulative({2, 1.0, 1.0}, 0.5), 2.0 * 0.5 / 0.5, 1e-13);

    // Independent quadrature of the defining integral, for several (d, lambda).
    for (int d : {2, 3, 4, 6}) {
        for (double lambda : {0.0, 0.5, 1.0}) {
            const ModelParams p{d, lambda, 1.0};
            for (double z : {0.2, 0.5, 0.8, 0.95}) {
                const double oracle =
                    adaptive_integrate([&](double r) { return radial_intensity(p, r); },
                                       0.0, z, 1e-12)
                        .value;
                EXPECT_NEAR(radial_cumulative(p, z), oracle, 1e-10 * std::max(1.0, oracle))
                    << "d=" << d << " lambda=" << lambda << " z=" << z;
            }
        }
    }
    EXPECT_THROW(radial_cumulative({2, 0.0, 1.0}, 1.0), std::domain_error);
}

TEST(RadialQuantile, ClosedFormExamples) {
    EXPECT_DOUBLE_EQ(radial_quantile({2, 0.3, 1.0}, 0.0), 0.0);
    EXPECT_NEAR(radial_quantile({2, 0.0, 1.0}, 2.0), (std::sqrt(5.0) - 1.0) / 2.0, 1e-14);
    EXPECT_NEAR(radial_quantile({2, 1.0, 1.0}, 2.0), 0.5, 1e-14);
    EXPECT_THROW(radial_quantile({2, 0.0, 1.0}, -1.0), std::domain_error);
}

TEST(RadialQuantile, RoundTripsCumulative) {
    for (int d : {2, 3, 4}) {
        for (double lambda : {0.0, 0.5, 1.0}) {
            const ModelParams p{d, lambda, 1.0};
            for (double y = 1e-3; y <= 1e3; y *= 10.0) {
                const double z = radial_quantile(p, y);
                ASSERT_GT(z, 0.0);
                ASSERT_LT(z, 1.0);
                EXPECT_NEAR(radial_cumulative(p, z), y, 1e-9 * std::max(1.0, y))
                    << "d=" << d << " lambda=" << lambda << " y=" << y;
            }
        }
    }
}

TEST(RadialQuantile, AgreesWithGenericRootSolve) {
    // The d = 2 closed form must agree with a bracketed solve on F(z) - y.
    const ModelParams p{2, 1.0, 1.0};
    const double root = bracketed_root(
        [&](double z) { return radial_cumulative(p, z) - 2.0; }, 0.0, 1.0 - 1e-12, 1e-12);
    EXPECT_NEAR(root, 0.5, 1e-10);
}

TEST(InvariantDensity, Examples) {
    EXPECT_DOUBLE_EQ(invariant_density_signed(4, 0.3, 0.0), 1.0);
    for (double s : {-1.0, 0.3, 2.0}) {
        EXPECT_NEAR(invariant_density_signed(3, 1.0, s), std::exp(2.0 * s), 1e-12);
    }
    EXPECT_NEAR(invariant_density_signed(2, 0.0, 1.0), std::cosh(1.0), 1e-14);
}

TEST(ShadowIntensity, ClosedFormsAndMonotonicityInLambda) {
    const double gamma = 1.3;
    for (double s : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(shadow_intensity({2, 0.0, gamma}, s),
                    gamma / std::pow(1.0 - s * s, 1.5), 1e-12);
        EXPECT_NEAR(shadow_intensity({2, 1.0, gamma}, s),
                    gamma * s / std::pow(1.0 - s * s, 1.5), 1e-12);
        for (int d : {2, 3, 5}) {
            double prev = std::numeric_limits<double>::infinity();
            for (double lambda = 0.0; lambda <= 1.0; lambda += 0.1) {
                const double g = shadow_intensity({d, lambda, gamma}, s);
                EXPECT_LE(g, prev * (1.0 + 1e-14));
                prev = g;
            }
        }
    }
    EXPECT_THROW(shadow_intensity({2, 0.0, 1.0}, 0.0), std::domain_error);
    EXPECT_THROW(shadow_intensity({2, 0.0, 1.0}, 1.0), std::domain_error);
}

TEST(ShadowIntensity, ChangeOfVariablesIdentity) {
    // f(r) = g(phi(r); lambda) * phi'(r), with phi' from central differences.
    const double step = 1e-6;
    for (int d : {2, 3}) {
        for (double lambda : {0.0, 0.5, 1.0}) {
            const ModelParams p{d, lambda, 1.0};
            for (int k = 1; k <= 100; ++k) {
                const double r = k / 101.0;
                const double phi = cap_height_phi(lambda, r);
                const double dphi = (cap_height_phi(lambda, r + step) -
                                     cap_height_phi(lambda, r - step)) /
                                    (2.0 * step);
                const double lhs = radial_intensity(p, r);
                const double rhs = shadow_intensity(p, phi) * dphi;
                EXPECT_NEAR(rhs, lhs, 1e-6 * lhs)
                    << "d=" << d << " lambda=" << lambda << " r=" << r;
            }
        }
    }
    // Spot value from the d = 2, lambda = 0 closed forms at r = 0.5.
    const double phi_prime = 2.0 * (1.0 - 0.25) / std::pow(1.25, 2);
    EXPECT_NEAR(phi_prime, 0.96, 1e-12);
    EXPECT_NEAR(shadow_intensity({2, 0.0, 1.0}, 0.8) * phi_prime, 0.96 / 0.216, 1e-10);
    EXPECT_NEAR(radial_intensity({2, 0.0, 1.0}, 0.5), 0.96 / 0.216, 1e-10);
}

TEST(HittingMeasure, ClosedLawExamples) {
    EXPECT_DOUBLE_EQ(hitting_measure_closed(2, kPi, 0.0), 0.0);
    EXPECT_NEAR(hitting_measure_closed(2, kPi, 2.0), 2.0, 1e-13);
    EXPECT_NEAR(hitting_measure_closed(3, 4.0, 1.0), 1.0, 1e-13);
}

TEST(HittingMeasure, QuadratureMatchesClosedLaw) {
    EXPECT_DOUBLE_EQ(hitting_measure_quadrature({2, 0.5, kPi}, 0.0), 0.0);
    EXPECT_NEAR(hitting_measure_quadrature({2, 0.5, kPi}, 2.0), 2.0, 2.0 * 1e-8);
    EXPECT_NEAR(hitting_measure_quadrature({3, 1.0, 4.0}, 1.0), 1.0, 1e-8);
    // A lambda = 0 cell exercises the single-integral branch.
    EXPECT_NEAR(hitting_measure_quadrature({4, 0.0, 2.0}, 1.5),
                hitting_measure_closed(4, 2.0, 1.5), 1e-8);
}

TEST(HittingMeasure, LinearInSegmentLength) {
    for (double lambda : {0.0, 0.6, 1.0}) {
        const ModelParams p{2, lambda, 2.0};
        const double one = hitting_measure_quadrature(p, 1.25);
        const double two = hitting_measure_quadrature(p, 2.5);
        EXPECT_NEAR(two, 2.0 * one, 1e-8 * two);
    }
}

TEST(HittingMeasure, SlopeConvergesToGammaStar) {
    for (int d : {2, 3}) {
        for (double lambda : {0.3, 0.7}) {
            const ModelParams p{d, lambda, kPi};
            const double star = gamma_star(d, kPi);
            double prev_err = std::numeric_limits<double>::infinity();
            for (double h : {1e-1, 1e-2, 1e-3}) {
                const double slope = hitting_measure_quadrature(p, h) / h;
                const double err = std::fabs(slope - star) / star;
                EXPECT_LE(err, std::max(prev_err * 1.5, 1e-4));
                prev_err = err;
            }
            EXPECT_NEAR(hitting_measure_quadrature(p, 1e-3) / (1e-3), star, 1e-4 * star);
        }
    }
}

TEST(ExpectedVolume, ClosedFormAndInfiniteRegime) {
    EXPECT_NEAR(expected_volume_closed({2, 0.0, 3.0 * kPi}), kPi / 4.0, 1e-13);
    EXPECT_NEAR(expected_volume_closed({2, 1.0, 3.0 * kPi}), kPi / 4.0, 1e-13);
    EXPECT_TRUE(std::isinf(expected_volume_closed({2, 0.5, kPi})));
    EXPECT_TRUE(std::isinf(expected_volume_closed({2, 0.5, 2.0})));
    // gamma* = 5 at d = 3, gamma = 20: pi * Gamma(3/2) / Gamma(9/2) = pi / 13.125.
    EXPECT_NEAR(expected_volume_closed({3, 0.2, 20.0}), kPi / 13.125, 1e-12);
}

TEST(SinhExpIntegral, ClosedFormAndDivergence) {
    EXPECT_NEAR(sinh_exp_integral(2, 2.0), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(sinh_exp_integral(3, 4.0), 1.0 / 24.0, 1e-12);
    EXPECT_THROW(sinh_exp_integral(2, 1.0), std::domain_error);
}

TEST(SinhExpIntegral, NumericCompanionAgrees) {
    for (int d = 2; d <= 5; ++d) {
        for (double a : {d + 0.0, d + 2.5}) {
            const double closed = sinh_exp_integral(d, a);
            const auto numeric = sinh_exp_integral_numeric(d, a);
            EXPECT_NEAR(numeric.value, closed, 1e-9 * closed) << "d=" << d << " a=" << a;
            EXPECT_GT(numeric.truncated_at, 0.0);
        }
    }
}

TEST(BallModelConstants, ClosedForms) {
    const auto c = ball_model_constants(2, std::sqrt(2.0));
    EXPECT_NEAR(c.radius, std::atanh(1.0 / std::sqrt(2.0)), 1e-14);
    EXPECT_NEAR(c.gamma_b_crit, 0.5, 1e-13);
    EXPECT_THROW(ball_model_constants(2, 1.0), std::domain_error);
    // Limits: radius and critical intensity both vanish as lambda grows.
    const auto far = ball_model_constants(3, 50.0);
    EXPECT_LT(far.radius, 0.03);
    EXPECT_LT(far.gamma_b_crit, 1e-3);
}

TEST(CroftonGrid, SmallGridAllWithinTolerance) {
    const auto cells = crofton_verification_grid({2, 3}, {0.0, 0.5, 1.0}, {0.1, 1.0}, kPi);
    ASSERT_EQ(cells.size(), 12u);
    for (const auto& cell : cells) {
        EXPECT_LE(cell.rel_error, 1e-8)
            << "d=" << cell.d << " lambda=" << cell.lambda << " h=" << cell.h;
    }
}
