#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entropic_fx/error.hpp"
#include "entropic_fx/maxent.hpp"
#include "oracles.hpp"

namespace efx::maxent {
namespace {

UniformGrid symmetric_grid(double half_width, double h) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / h)) + 1;
    return UniformGrid::from_bounds(-half_width, half_width, n);
}

// Closed-form Gaussian on the grid, without renormalization on the grid.
double max_error_vs_gaussian(const DensityGrid& d, double mean, double var) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        worst = std::max(worst, std::abs(d[i] - test::gaussian_pdf(d.point(i), mean, var)));
    }
    return worst;
}

TEST(RelativeEntropy, ZeroForIdenticalDensities) {
    const auto grid = symmetric_grid(5.0, 1e-2);
    const auto p = DensityGrid::gaussian(grid, 0.3, 0.7);
    EXPECT_EQ(relative_entropy(p, p), 0.0);
}

TEST(RelativeEntropy, MatchesNegatedGaussianKl) {
    const auto grid = symmetric_grid(12.0, 1e-3);
    const auto p = DensityGrid::gaussian(grid, 0.0, 1.0);
    const auto q = DensityGrid::gaussian(grid, 0.0, 2.0);
    const double expected = -test::gaussian_kl(1.0, 2.0);  // -0.0965735902799727
    EXPECT_NEAR(expected, -0.09657359027997270, 1e-15);
    EXPECT_NEAR(relative_entropy(p, q), expected, 1e-12);
}

TEST(RelativeEntropy, DecreasesAsDensityConcentrates) {
    const auto grid = symmetric_grid(1.0, 1e-4);
    const auto q = DensityGrid::uniform(grid);
    double prev = 0.0;
    for (double sd : {0.3, 0.1, 0.03, 0.01, 0.003}) {
        const double s = relative_entropy(DensityGrid::gaussian(grid, 0.0, sd * sd), q);
        EXPECT_LT(s, prev);
        prev = s;
    }
    EXPECT_LT(prev, -4.0);
}

TEST(RelativeEntropy, GibbsInequalityOnRandomDensities) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto grid = UniformGrid::from_bounds(-1.0, 1.0, 101);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(grid.size()), b(grid.size());
        for (auto& v : a) v = unit(rng) < 0.2 ? 0.0 : unit(rng);
        for (auto& v : b) v = 0.01 + unit(rng);
        DensityGrid p(grid, a), q(grid, b);
        p.normalize();
        q.normalize();
        EXPECT_LE(relative_entropy(p, q), 0.0);
    }
}

TEST(RelativeEntropy, Errors) {
    const auto g1 = UniformGrid::from_bounds(-1.0, 1.0, 11);
    const auto g2 = UniformGrid::from_bounds(-1.0, 1.0, 12);
    try {
        relative_entropy(DensityGrid::uniform(g1), DensityGrid::uniform(g2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
    }
    std::vector<double> w(11, 1.0);
    w[3] = 0.0;
    DensityGrid q(g1, w);
    try {
        relative_entropy(DensityGrid::uniform(g1), q);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SupportViolation);
    }
    // Zero mass in p where q vanishes is fine: 0 ln 0 = 0.
    EXPECT_LE(relative_entropy(q.normalize(), DensityGrid::uniform(g1)), 0.0);
}

TEST(SolveMaxent, UniformPriorWithVarianceConstraintGivesGaussianPrior) {
    const double k = 0.04;
    const auto grid = symmetric_grid(3.0, 1e-3);
    ConstraintSpec spec;
    spec.second_central_moment(0.0, k);
    const auto sol = solve_maxent(DensityGrid::uniform(grid), spec);
    EXPECT_LE(sol.residual_norm, 1e-12);
    EXPECT_LE(max_error_vs_gaussian(sol.density, 0.0, k), 1e-8);
    // The multiplier is -alpha/2 with alpha = 1/k.
    EXPECT_NEAR(sol.multipliers[0], -0.5 / k, 1e-6);
}

TEST(SolveMaxent, DirectionalityShiftsMeanKeepsVariance) {
    const double k = 0.04, shift = 0.01;
    const auto grid = symmetric_grid(10.0 * std::sqrt(k), 1e-3);
    ConstraintSpec spec;
    spec.first_moment(shift);
    const auto sol = solve_maxent(DensityGrid::gaussian(grid, 0.0, k), spec);
    EXPECT_LE(sol.residual_norm, 1e-12);
    EXPECT_LE(max_error_vs_gaussian(sol.density, shift, k), 1e-8);
    EXPECT_NEAR(sol.density.variance(), k, 1e-10);
    // Completing the square: lambda = shift / k = beta / alpha * alpha.
    EXPECT_NEAR(sol.multipliers[0], shift / k, 1e-8);
}

TEST(SolveMaxent, EmptyConstraintsReturnPrior) {
    const auto grid = symmetric_grid(1.0, 1e-2);
    const auto prior = DensityGrid::gaussian(grid, 0.1, 0.2);
    const auto sol = solve_maxent(prior, {});
    EXPECT_TRUE(sol.multipliers.empty());
    EXPECT_EQ(sol.iterations, 0u);
    EXPECT_EQ(max_abs_difference(sol.density, prior), 0.0);
}

TEST(SolveMaxent, InvariantToPriorRescaling) {
    const auto grid = symmetric_grid(2.0, 1e-3);
    auto prior = DensityGrid::gaussian(grid, 0.05, 0.1);
    ConstraintSpec spec;
    spec.first_moment(0.02).second_central_moment(0.02, 0.03);
    const auto base = solve_maxent(prior, spec);
    for (double scale : {1e-6, 3.0, 1e5}) {
        std::vector<double> w(prior.weights().begin(), prior.weights().end());
        for (auto& v : w) v *= scale;
        const auto scaled = solve_maxent(DensityGrid(grid, w), spec);
        EXPECT_LE(max_abs_difference(scaled.density, base.density), 1e-10);
        for (std::size_t j = 0; j < spec.size(); ++j) EXPECT_NEAR(scaled.multipliers[j], base.multipliers[j], 1e-8);
    }
}

TEST(SolveMaxent, TwoConstraintProblemConvergesToAnalyticPosterior) {
    const double sigma = 0.2, dt = 1.0 / 12.0;
    const double k = sigma * sigma * dt;
    const double mean = (0.05 - 0.02 - 0.5 * sigma * sigma) * dt;
    const auto grid = UniformGrid::from_bounds(mean - 10.0 * std::sqrt(k), mean + 10.0 * std::sqrt(k),
                                               static_cast<std::size_t>(std::llround(20.0 * std::sqrt(k) / 1e-3)) + 1);
    ConstraintSpec spec;
    spec.first_moment(mean).second_central_moment(mean, k);
    const auto sol = solve_maxent(DensityGrid::uniform(grid), spec);
    EXPECT_LE(sol.residual_norm, 1e-12);
    EXPECT_LT(max_error_vs_gaussian(sol.density, mean, k), 1e-6);
}

TEST(SolveMaxent, DualDecreasesMonotonically) {
    const auto grid = symmetric_grid(3.0, 1e-3);
    ConstraintSpec spec;
    spec.first_moment(0.3).second_central_moment(0.3, 0.01);
    const auto sol = solve_maxent(DensityGrid::uniform(grid), spec);
    ASSERT_GE(sol.dual_history.size(), 2u);
    for (std::size_t i = 1; i < sol.dual_history.size(); ++i) {
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(sol.dual_history[i - 1]));
        EXPECT_LE(sol.dual_history[i], sol.dual_history[i - 1] + noise) << "step " << i;
    }
}

TEST(SolveMaxent, TabulatedMatchesBuiltIn) {
    const auto grid = symmetric_grid(1.0, 1e-3);
    std::vector<double> fx(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) fx[i] = grid[i];
    ConstraintSpec a, b;
    a.first_moment(0.1);
    b.tabulated(fx, 0.1);
    const auto prior = DensityGrid::gaussian(grid, 0.0, 0.05);
    EXPECT_LE(max_abs_difference(solve_maxent(prior, a).density, solve_maxent(prior, b).density), 1e-12);
}

TEST(SolveMaxent, InfeasibleTargetIsReported) {
    const auto grid = symmetric_grid(1.0, 1e-2);
    ConstraintSpec spec;
    spec.second_central_moment(0.0, 4.0);  // > max x^2 on [-1, 1]
    try {
        solve_maxent(DensityGrid::uniform(grid), spec);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InfeasibleConstraints);
    }
}

TEST(SolveMaxent, IterationBudgetExhaustion) {
    const auto grid = symmetric_grid(3.0, 1e-3);
    ConstraintSpec spec;
    spec.second_central_moment(0.0, 1e-3);
    try {
        solve_maxent(DensityGrid::uniform(grid), spec, {1e-12, 2, 60});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    }
}

TEST(SolveMaxent, RejectsInvalidConstraints) {
    const auto grid = symmetric_grid(1.0, 1e-2);
    ConstraintSpec spec;
    spec.second_central_moment(0.0, -1.0);
    EXPECT_THROW(solve_maxent(DensityGrid::uniform(grid), spec), Error);
    ConstraintSpec nan_spec;
    nan_spec.first_moment(std::nan(""));
    EXPECT_THROW(solve_maxent(DensityGrid::uniform(grid), nan_spec), Error);
}

TEST(Multipliers, AlphaFromEntropicTime) {
    EXPECT_EQ(alpha_from_entropic_time(1.0, 1.0), 1.0);
    EXPECT_NEAR(alpha_from_entropic_time(0.2, 1.0 / 252.0), 6300.0, 6300.0 * 1e-15);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vol(0.01, 2.0), dt(1e-4, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double s = vol(rng), t = dt(rng);
        EXPECT_NEAR(variance_from_alpha(alpha_from_entropic_time(s, t)), s * s * t, 4e-16 * s * s * t);
    }
    EXPECT_THROW(alpha_from_entropic_time(0.0, 1.0), Error);
    EXPECT_THROW(alpha_from_entropic_time(0.2, -1.0), Error);
}

TEST(Multipliers, Beta) {
    EXPECT_EQ(beta_multiplier(0.03, 0.03, 0.7), -0.5);
    const double sigma = 0.3;
    EXPECT_NEAR(beta_multiplier(0.5 * sigma * sigma, 0.0, sigma), 0.0, 1e-16);
    EXPECT_NEAR(beta_multiplier(0.05, 0.02, 0.2), 0.25, 1e-15);
    EXPECT_THROW(beta_multiplier(0.05, 0.02, 0.0), Error);
}

}  // namespace
}  // namespace efx::maxent
