#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "entropic_fx/dynamics.hpp"
#include "entropic_fx/error.hpp"
#include "oracles.hpp"

namespace efx::dynamics {
namespace {

TEST(LogCoordinate, IdentityAndScaleLaw) {
    EXPECT_EQ(log_coordinate(1.0), 0.0);
    EXPECT_NEAR(log_coordinate(std::numbers::e), 1.0, 1e-16);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> logu(-8.0, 8.0);
    for (int i = 0; i < 1000; ++i) {
        const double u = std::exp(logu(rng)), l = std::exp(logu(rng));
        EXPECT_NEAR(log_coordinate(l * u) - log_coordinate(u), std::log(l), 4e-15);
    }
    EXPECT_THROW(log_coordinate(0.0), Error);
    EXPECT_THROW(log_coordinate(-1.0), Error);
}

TEST(TransitionDensity, SubstitutionExample) {
    const auto td = transition_density(MarketParams::physical(1.0, 0.03, 0.03, 0.2), 1.0);
    EXPECT_NEAR(td.log_mean, -0.02, 1e-17);
    EXPECT_NEAR(td.log_var, 0.04, 1e-17);
    EXPECT_EQ(td.dt, 1.0);
}

TEST(TransitionDensity, MomentsAddOverTime) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> rate(-0.1, 0.1), vol(0.01, 1.0), time(1e-3, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const auto p = MarketParams::physical(1.3, rate(rng), rate(rng), vol(rng));
        const double t1 = time(rng), t2 = time(rng);
        const auto a = transition_density(p, t1), b = transition_density(p, t2), ab = transition_density(p, t1 + t2);
        EXPECT_NEAR(ab.log_mean, a.log_mean + b.log_mean, 1e-15 * (1.0 + std::abs(ab.log_mean)));
        EXPECT_NEAR(ab.log_var, a.log_var + b.log_var, 1e-15 * ab.log_var);
    }
    const auto twice = transition_density(MarketParams::physical(1.0, 0.04, 0.01, 0.3), 0.5);
    const auto single = transition_density(MarketParams::physical(1.0, 0.04, 0.01, 0.3), 0.25);
    EXPECT_DOUBLE_EQ(twice.log_mean, 2.0 * single.log_mean);
    EXPECT_DOUBLE_EQ(twice.log_var, 2.0 * single.log_var);
}

TEST(TransitionDensity, DriftCancelsWhenVarianceMatchesTwiceDriftDifference) {
    const double sigma = 0.3;
    const auto p = MarketParams::physical(1.0, 0.5 * sigma * sigma, 0.0, sigma);
    for (double dt : {0.01, 1.0, 7.0}) EXPECT_NEAR(transition_density(p, dt).log_mean, 0.0, 1e-17);
}

TEST(TransitionDensity, RejectsBadInput) {
    const auto p = MarketParams::physical(1.0, 0.0, 0.0, 0.2);
    EXPECT_THROW(transition_density(p, 0.0), Error);
    EXPECT_THROW(transition_density(MarketParams::physical(-1.0, 0.0, 0.0, 0.2), 1.0), Error);
    EXPECT_THROW(transition_density(MarketParams::physical(1.0, 0.0, 0.0, 0.0), 1.0), Error);
}

TEST(TransitionPdf, ModeAndNormalization) {
    const auto td = transition_density(MarketParams::physical(1.0, 0.05, 0.01, 0.25), 0.7);
    EXPECT_NEAR(transition_pdf(td, td.log_mean), 1.0 / std::sqrt(2.0 * std::numbers::pi * td.log_var), 1e-14);
    // Composite Simpson over mean +- 10 sd.
    const double sd = std::sqrt(td.log_var);
    const int n = 20000;
    const double a = td.log_mean - 10.0 * sd, h = 20.0 * sd / n;
    double s = transition_pdf(td, a) + transition_pdf(td, a + n * h);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * transition_pdf(td, a + i * h);
    EXPECT_NEAR(s * h / 3.0, 1.0, 1e-10);
}

TEST(TransitionPdf, InvariantUnderCommonRescaling) {
    const auto p = MarketParams::physical(1.0, 0.02, 0.05, 0.15);
    const auto td = transition_density(p, 0.5);
    const double u = 1.37, u_next = 1.41;
    for (double l : {1e-3, 0.5, 7.0, 1e3}) {
        // Scaling both rates leaves the ratio, hence the argument, unchanged.
        const double shifted = log_coordinate(l * u_next) - log_coordinate(l * u);
        EXPECT_NEAR(transition_pdf(td, shifted), transition_pdf(td, std::log(u_next / u)), 1e-12);
        // The law itself depends on u0 only through the ratio.
        auto scaled = p;
        scaled.u0 = l * p.u0;
        const auto td_scaled = transition_density(scaled, 0.5);
        EXPECT_EQ(td_scaled.log_mean, td.log_mean);
        EXPECT_EQ(td_scaled.log_var, td.log_var);
    }
}

TEST(SimulatePaths, StructureAndDeterminism) {
    const auto p = MarketParams::physical(1.25, 0.03, 0.01, 0.2);
    const auto a = simulate_paths(p, 2.0, 8, 5000, 42);
    EXPECT_EQ(a.times.size(), 9u);
    EXPECT_EQ(a.times.front(), 0.0);
    EXPECT_EQ(a.times.back(), 2.0);
    for (std::size_t k = 1; k < a.times.size(); ++k) EXPECT_GT(a.times[k], a.times[k - 1]);
    for (std::size_t i = 0; i < a.n_paths; ++i) EXPECT_EQ(a.log_value(i, 0), std::log(1.25));

    const auto b = simulate_paths(p, 2.0, 8, 5000, 42);
    EXPECT_EQ(a.log_paths, b.log_paths);
    const auto threaded = simulate_paths(p, 2.0, 8, 5000, 42, {4});
    EXPECT_EQ(a.log_paths, threaded.log_paths);
    const auto other = simulate_paths(p, 2.0, 8, 5000, 43);
    EXPECT_NE(a.log_paths, other.log_paths);
}

TEST(SimulatePaths, DeterministicLimit) {
    const auto p = MarketParams::physical(0.8, 0.06, 0.02, 1e-12);
    const auto paths = simulate_paths(p, 3.0, 50, 200, 1);
    for (double r : paths.terminal_log_ratios()) EXPECT_NEAR(r, 0.04 * 3.0, 1e-8);
}

TEST(SimulatePaths, TerminalMomentsWithinFourStandardErrors) {
    const auto p = MarketParams::physical(1.0, 0.05, 0.02, 0.2);
    const double horizon = 1.0;
    const std::size_t n = 1'000'000;
    const auto m = test::sample_moments(simulate_paths(p, horizon, 1, n, 2024).terminal_log_ratios());
    const double var = 0.04 * horizon;
    EXPECT_LT(std::abs(m.mean - (0.03 - 0.02) * horizon), 4.0 * std::sqrt(var / n));
    // Var of the sample variance of a normal sample: 2 sigma^4 / (n - 1).
    EXPECT_LT(std::abs(m.variance - var), 4.0 * std::sqrt(2.0 * var * var / (n - 1)));
}

TEST(SimulatePaths, IncrementsAreGaussian) {
    const auto p = MarketParams::physical(1.0, 0.01, 0.03, 0.3);
    const std::size_t n_paths = 100'000, n_steps = 10;
    const auto paths = simulate_paths(p, 1.0, n_steps, n_paths, 99);
    std::vector<double> inc;
    inc.reserve(n_paths * n_steps);
    for (std::size_t i = 0; i < n_paths; ++i)
        for (std::size_t k = 1; k <= n_steps; ++k) inc.push_back(paths.log_value(i, k) - paths.log_value(i, k - 1));
    const auto m = test::sample_moments(inc);
    const double n = static_cast<double>(inc.size());
    EXPECT_LT(std::abs(m.skewness), 4.0 * std::sqrt(6.0 / n));
    EXPECT_LT(std::abs(m.excess_kurtosis), 4.0 * std::sqrt(24.0 / n));
}

TEST(SimulatePaths, StepCountDoesNotBiasTerminalLaw) {
    const auto p = MarketParams::physical(1.0, 0.04, 0.01, 0.35);
    const std::size_t n = 100'000;
    const auto coarse = simulate_paths(p, 2.0, 16, n, 5).terminal_log_ratios();
    const auto fine = simulate_paths(p, 2.0, 32, n, 6).terminal_log_ratios();
    EXPECT_LT(test::ks_statistic(coarse, fine), test::ks_critical_1pct(n, n));
}

TEST(SimulatePaths, ScaleInvarianceOfLogRatios) {
    const auto p = MarketParams::physical(1.1, 0.02, 0.04, 0.25);
    auto scaled = p;
    scaled.u0 = 1e3 * p.u0;
    const auto a = simulate_paths(p, 1.0, 4, 1000, 77).terminal_log_ratios();
    const auto b = simulate_paths(scaled, 1.0, 4, 1000, 77).terminal_log_ratios();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(SimulatePaths, RejectsInvalidCounts) {
    const auto p = MarketParams::physical(1.0, 0.0, 0.0, 0.2);
    EXPECT_THROW(simulate_paths(p, 0.0, 1, 1, 0), Error);
    EXPECT_THROW(simulate_paths(p, 1.0, 0, 1, 0), Error);
    EXPECT_THROW(simulate_paths(p, 1.0, 1, 0, 0), Error);
}

TEST(PathCsv, HeaderAndPrecision) {
    const auto p = MarketParams::physical(2.0, 0.0, 0.0, 0.2);
    const auto paths = simulate_paths(p, 1.0, 2, 3, 9);
    std::ostringstream os;
    write_csv(os, paths);
    std::istringstream is(os.str());
    std::string header, first;
    std::getline(is, header);
    std::getline(is, first);
    EXPECT_EQ(header, "time,path_0,path_1,path_2");
    EXPECT_EQ(first, "0," + std::string("0.69314718055994529,0.69314718055994529,0.69314718055994529"));
    std::ostringstream rates;
    write_csv(rates, paths, PathScale::rate);
    EXPECT_NE(rates.str().find("\n0,2,2,2\n"), std::string::npos);
}

}  // namespace
}  // namespace efx::dynamics
