#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "entropic_fx/density_grid.hpp"

namespace efx::maxent {

/// f(x) = x
struct FirstMoment {};

/// f(x) = (x - center)^2
struct SecondCentralMoment {
    double center = 0.0;
};

/// f given by one value per grid node.
struct TabulatedMoment {
    std::vector<double> values;
};

using MomentFunction = std::variant<FirstMoment, SecondCentralMoment, TabulatedMoment>;

struct MomentConstraint {
    MomentFunction function;
    double target = 0.0;
};

/// Expectation constraints <f_j> = t_j imposed on the updated density.
struct ConstraintSpec {
    std::vector<MomentConstraint> constraints;

    ConstraintSpec& first_moment(double target);
    ConstraintSpec& second_central_moment(double center, double target);
    ConstraintSpec& tabulated(std::vector<double> values, double target);

    bool empty() const noexcept { return constraints.empty(); }
    std::size_t size() const noexcept { return constraints.size(); }

    /// Throws DomainError on non-finite targets or non-positive second-moment targets.
    void validate() const;
};

struct SolverOptions {
    double tol = 1e-12;
    std::size_t max_iter = 100;
    std::size_t max_halvings = 60;
};

struct MultiplierSolution {
    std::vector<double> multipliers;
    DensityGrid density;
    std::size_t iterations = 0;
    double residual_norm = 0.0;
    /// Dual objective log Z(lambda) - lambda . t at the start and after each accepted step.
    std::vector<double> dual_history;
};

/// S[p, q] = -sum_i w_i p_i ln(p_i / q_i) with trapezoidal w_i and 0 ln 0 = 0.
///
/// Throws GridMismatch when the grids differ and SupportViolation when p has
/// mass where q vanishes.
double relative_entropy(const DensityGrid& p, const DensityGrid& q);

/// Maximizes S[p, prior] subject to normalization and `constraints`.
///
/// The maximizer is the exponential family p_i ~ prior_i exp(sum_j lambda_j f_j(x_i)).
/// The multipliers minimize the convex dual log Z(lambda) - lambda . t, found by
/// Newton's method with step halving until the dual decreases. Converged when
/// every constraint expectation is within `options.tol` of its target.
///
/// Throws InfeasibleConstraints when a target lies outside the range the grid can
/// realize or when the multipliers run away, and NoConvergence after max_iter.
MultiplierSolution solve_maxent(const DensityGrid& prior, const ConstraintSpec& constraints,
                                const SolverOptions& options = {});

/// alpha = 1 / (sigma^2 dt): the multiplier of the continuity constraint
/// expressed through the entropic clock.
double alpha_from_entropic_time(double sigma, double dt);

/// k = 1 / alpha, the variance target of the continuity constraint.
double variance_from_alpha(double alpha);

/// beta = (mu_d - mu_f) / sigma^2 - 1/2, the multiplier of the directionality constraint.
double beta_multiplier(double mu_d, double mu_f, double sigma);

}  // namespace efx::maxent
