#include "entropic_fx/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "entropic_fx/error.hpp"

namespace efx::maxent {

using detail::fail;
using detail::require;

ConstraintSpec& ConstraintSpec::first_moment(double target) {
    constraints.push_back({FirstMoment{}, target});
    return *this;
}

ConstraintSpec& ConstraintSpec::second_central_moment(double center, double target) {
    constraints.push_back({SecondCentralMoment{center}, target});
    return *this;
}

ConstraintSpec& ConstraintSpec::tabulated(std::vector<double> values, double target) {
    constraints.push_back({TabulatedMoment{std::move(values)}, target});
    return *this;
}

void ConstraintSpec::validate() const {
    for (const auto& c : constraints) {
        require(std::isfinite(c.target), ErrorCode::DomainError, "constraint targets must be finite");
        if (const auto* s = std::get_if<SecondCentralMoment>(&c.function)) {
            require(std::isfinite(s->center), ErrorCode::DomainError, "moment center must be finite");
            require(c.target > 0.0, ErrorCode::DomainError, "second-moment targets must be positive");
        }
    }
}

double relative_entropy(const DensityGrid& p, const DensityGrid& q) {
    require(p.grid().matches(q.grid()), ErrorCode::GridMismatch, "densities live on different grids");
    const auto& grid = p.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) fail(ErrorCode::SupportViolation, "p has mass where q vanishes");
        s += grid.trapezoid_weight(i) * p[i] * std::log(p[i] / q[i]);
    }
    return -s;
}

namespace {

// Constraint functions tabulated on the prior's support, plus log prior weights.
struct Problem {
    std::vector<std::size_t> support;   // node indices with prior > 0
    std::vector<double> log_weight;     // ln(trapezoid weight * prior) on support
    std::vector<std::vector<double>> f; // f[j][s]
    std::vector<double> targets;
};

Problem tabulate(const DensityGrid& prior, const ConstraintSpec& spec) {
    Problem pb;
    const auto& grid = prior.grid();
    for (std::size_t i = 0; i < prior.size(); ++i) {
        if (prior[i] > 0.0) {
            pb.support.push_back(i);
            pb.log_weight.push_back(std::log(grid.trapezoid_weight(i)) + std::log(prior[i]));
        }
    }
    for (const auto& c : spec.constraints) {
        std::vector<double> col(pb.support.size());
        std::visit(
            [&](const auto& fn) {
                using T = std::decay_t<decltype(fn)>;
                if constexpr (std::is_same_v<T, TabulatedMoment>) {
                    require(fn.values.size() == prior.size(), ErrorCode::GridMismatch,
                            "tabulated moment has wrong length for the grid");
                }
                for (std::size_t s = 0; s < pb.support.size(); ++s) {
                    const std::size_t i = pb.support[s];
                    const double x = grid[i];
                    if constexpr (std::is_same_v<T, FirstMoment>) {
                        col[s] = x;
                    } else if constexpr (std::is_same_v<T, SecondCentralMoment>) {
                        col[s] = (x - fn.center) * (x - fn.center);
                    } else {
                        col[s] = fn.values[i];
                    }
                }
            },
            c.function);
        pb.f.push_back(std::move(col));
        pb.targets.push_back(c.target);
    }
    return pb;
}

struct Evaluation {
    double dual = 0.0;
    double log_z = 0.0;
    std::vector<double> exponent;  // log_weight + lambda . f, per support node
    std::vector<double> gradient;  // <f_j> - t_j
    double residual = 0.0;
};

Evaluation evaluate(const Problem& pb, const std::vector<double>& lambda) {
    Evaluation ev;
    const std::size_t n = pb.support.size();
    const std::size_t m = pb.targets.size();
    ev.exponent.resize(n);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
        double a = pb.log_weight[s];
        for (std::size_t j = 0; j < m; ++j) a += lambda[j] * pb.f[j][s];
        ev.exponent[s] = a;
        peak = std::max(peak, a);
    }
    double z = 0.0;
    for (double a : ev.exponent) z += std::exp(a - peak);
    ev.log_z = peak + std::log(z);

    ev.dual = ev.log_z;
    for (std::size_t j = 0; j < m; ++j) ev.dual -= lambda[j] * pb.targets[j];

    ev.gradient.assign(m, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        const double p = std::exp(ev.exponent[s] - ev.log_z);
        for (std::size_t j = 0; j < m; ++j) ev.gradient[j] += p * pb.f[j][s];
    }
    for (std::size_t j = 0; j < m; ++j) {
        ev.gradient[j] -= pb.targets[j];
        ev.residual = std::max(ev.residual, std::abs(ev.gradient[j]));
    }
    return ev;
}

// Covariance of the constraint functions under the current density.
std::vector<std::vector<double>> hessian(const Problem& pb, const Evaluation& ev) {
    const std::size_t m = pb.targets.size();
    std::vector<double> mean(m);
    for (std::size_t j = 0; j < m; ++j) mean[j] = ev.gradient[j] + pb.targets[j];
    std::vector<std::vector<double>> h(m, std::vector<double>(m, 0.0));
    for (std::size_t s = 0; s < pb.support.size(); ++s) {
        const double p = std::exp(ev.exponent[s] - ev.log_z);
        for (std::size_t j = 0; j < m; ++j) {
            const double dj = pb.f[j][s] - mean[j];
            for (std::size_t k = 0; k <= j; ++k) h[j][k] += p * dj * (pb.f[k][s] - mean[k]);
        }
    }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) h[j][k] = h[k][j];
    return h;
}

// Solves H x = b for symmetric positive semidefinite H. A small ridge is added
// when the Cholesky factorization breaks down.
std::vector<double> solve_spd(std::vector<std::vector<double>> h, std::vector<double> b) {
    const std::size_t m = b.size();
    double diag_max = 0.0;
    for (std::size_t j = 0; j < m; ++j) diag_max = std::max(diag_max, h[j][j]);
    double ridge = 0.0;
    for (int attempt = 0; attempt < 20; ++attempt) {
        auto l = h;
        for (std::size_t j = 0; j < m; ++j) l[j][j] += ridge;
        bool ok = true;
        for (std::size_t j = 0; j < m && ok; ++j) {
            for (std::size_t k = 0; k <= j; ++k) {
                double sum = l[j][k];
                for (std::size_t p = 0; p < k; ++p) sum -= l[j][p] * l[k][p];
                if (j == k) {
                    if (!(sum > 0.0)) {
                        ok = false;
                        break;
                    }
                    l[j][j] = std::sqrt(sum);
                } else {
                    l[j][k] = sum / l[k][k];
                }
            }
        }
        if (ok) {
            std::vector<double> y(m);
            for (std::size_t j = 0; j < m; ++j) {
                double sum = b[j];
                for (std::size_t p = 0; p < j; ++p) sum -= l[j][p] * y[p];
                y[j] = sum / l[j][j];
            }
            for (std::size_t j = m; j-- > 0;) {
                double sum = y[j];
                for (std::size_t p = j + 1; p < m; ++p) sum -= l[p][j] * y[p];
                y[j] = sum / l[j][j];
            }
            return y;
        }
        ridge = ridge == 0.0 ? 1e-14 * std::max(diag_max, 1e-300) : ridge * 100.0;
    }
    fail(ErrorCode::NoConvergence, "constraint covariance is singular");
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

DensityGrid assemble(const DensityGrid& prior, const Problem& pb, const Evaluation& ev) {
    std::vector<double> w(prior.size(), 0.0);
    for (std::size_t s = 0; s < pb.support.size(); ++s) {
        const std::size_t i = pb.support[s];
        // exponent carries the trapezoid weight; divide it back out to get a density.
        w[i] = std::exp(ev.exponent[s] - ev.log_z) / prior.grid().trapezoid_weight(i);
    }
    DensityGrid d(prior.grid(), std::move(w));
    d.normalize();
    return d;
}

}  // namespace

MultiplierSolution solve_maxent(const DensityGrid& prior, const ConstraintSpec& constraints,
                                const SolverOptions& options) {
    constraints.validate();
    require(options.tol > 0.0, ErrorCode::DomainError, "solver tolerance must be positive");
    require(prior.mass() > 0.0, ErrorCode::DomainError, "prior has zero mass");

    MultiplierSolution sol;
    if (constraints.empty()) {
        sol.density = prior;
        if (std::abs(prior.mass() - 1.0) > 1e-12) sol.density.normalize();
        return sol;
    }

    const Problem pb = tabulate(prior, constraints);
    const std::size_t m = pb.targets.size();

    // A target outside the closed range of f on the support is unreachable by
    // any density on this grid; on the boundary it needs infinite multipliers.
    for (std::size_t j = 0; j < m; ++j) {
        const auto [lo, hi] = std::minmax_element(pb.f[j].begin(), pb.f[j].end());
        if (!(pb.targets[j] > *lo && pb.targets[j] < *hi)) {
            fail(ErrorCode::InfeasibleConstraints,
                 "target of constraint " + std::to_string(j) + " lies outside the range realizable on the grid");
        }
    }

    std::vector<double> lambda(m, 0.0);
    Evaluation ev = evaluate(pb, lambda);
    sol.dual_history.push_back(ev.dual);

    std::size_t growth_streak = 0;
    double last_norm = 0.0;

    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        if (ev.residual <= options.tol) {
            sol.multipliers = lambda;
            sol.density = assemble(prior, pb, ev);
            sol.iterations = iter;
            sol.residual_norm = ev.residual;
            return sol;
        }

        std::vector<double> neg_grad(m);
        for (std::size_t j = 0; j < m; ++j) neg_grad[j] = -ev.gradient[j];
        const std::vector<double> step = solve_spd(hessian(pb, ev), neg_grad);

        // Round-off floor below which dual differences carry no information.
        const double dual_noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ev.dual));
        double scale = 1.0;
        bool accepted = false;
        for (std::size_t halving = 0; halving <= options.max_halvings; ++halving, scale *= 0.5) {
            std::vector<double> trial(m);
            for (std::size_t j = 0; j < m; ++j) trial[j] = lambda[j] + scale * step[j];
            Evaluation tev = evaluate(pb, trial);
            if (!std::isfinite(tev.dual)) continue;
            const bool decreased = tev.dual < ev.dual;
            const bool flat_but_better = tev.dual <= ev.dual + dual_noise && tev.residual < ev.residual;
            if (decreased || flat_but_better) {
                lambda = std::move(trial);
                ev = std::move(tev);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            fail(ErrorCode::NoConvergence,
                 "line search could not decrease the dual; residual " + std::to_string(ev.residual));
        }
        sol.dual_history.push_back(ev.dual);

        const double norm = max_abs(lambda);
        growth_streak = norm > last_norm ? growth_streak + 1 : 0;
        last_norm = norm;
        if (growth_streak >= 10 && norm > 1e8) {
            fail(ErrorCode::InfeasibleConstraints, "multipliers diverge; constraints are not jointly satisfiable");
        }
    }

    if (ev.residual <= options.tol) {
        sol.multipliers = lambda;
        sol.density = assemble(prior, pb, ev);
        sol.iterations = options.max_iter;
        sol.residual_norm = ev.residual;
        return sol;
    }
    if (growth_streak >= 10) {
        fail(ErrorCode::InfeasibleConstraints, "multipliers grow without bound");
    }
    fail(ErrorCode::NoConvergence, "no convergence after " + std::to_string(options.max_iter) +
                                       " iterations; residual " + std::to_string(ev.residual));
}

double alpha_from_entropic_time(double sigma, double dt) {
    require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::DomainError, "sigma must be positive");
    require(dt > 0.0 && std::isfinite(dt), ErrorCode::DomainError, "dt must be positive");
    return 1.0 / (sigma * sigma * dt);
}

double variance_from_alpha(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::DomainError, "alpha must be positive");
    return 1.0 / alpha;
}

double beta_multiplier(double mu_d, double mu_f, double sigma) {
    require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::DomainError, "sigma must be positive");
    require(std::isfinite(mu_d) && std::isfinite(mu_f), ErrorCode::DomainError, "drifts must be finite");
    return (mu_d - mu_f) / (sigma * sigma) - 0.5;
}

}  // namespace efx::maxent
