#include "entropic_fx/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "entropic_fx/error.hpp"
#include "format.hpp"
#include "tridiagonal.hpp"

namespace efx::fokker_planck {

using detail::fail;
using detail::require;

void FPGridSpec::validate() const {
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max, ErrorCode::DomainError,
            "grid requires x_min < x_max");
    require(n_points >= 3, ErrorCode::DomainError, "grid requires at least 3 points");
    require(std::isfinite(dt_step) && dt_step > 0.0, ErrorCode::DomainError, "dt_step must be positive");
}

UniformGrid FPGridSpec::grid() const {
    validate();
    return UniformGrid::from_bounds(x_min, x_max, n_points);
}

FPGridSpec default_grid(const MarketParams& params, double t, double initial_variance, std::size_t n_points) {
    params.validate();
    require(std::isfinite(t) && t > 0.0, ErrorCode::DomainError, "t must be positive");
    require(initial_variance >= 0.0, ErrorCode::DomainError, "initial variance must be nonnegative");
    const double center = std::log(params.u0) + params.log_drift() * t;
    const double half_width = 10.0 * std::sqrt(params.sigma * params.sigma * t + initial_variance);
    return {center - half_width, center + half_width, n_points, t / 1000.0};
}

double point_mass_variance(const UniformGrid& grid) {
    const double s = 3.0 * grid.spacing();
    return s * s;
}

DensityGrid point_mass(const UniformGrid& grid, double x0) {
    return DensityGrid::gaussian(grid, x0, point_mass_variance(grid));
}

namespace {

// Finite-volume generator: node i owns a cell of width h (h/2 at the walls) and
// the flux through interface i+1/2 is a (p_i + p_{i+1})/2 - D (p_{i+1} - p_i)/h.
detail::Tridiagonal generator(const UniformGrid& grid, double advection, double diffusion) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const double from_left = 0.5 * advection + diffusion / h;   // weight of p_i in F_{i+1/2}
    const double from_right = 0.5 * advection - diffusion / h;  // weight of p_{i+1} in F_{i+1/2}
    detail::Tridiagonal op(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double volume = grid.trapezoid_weight(i);
        if (i + 1 < n) {  // outgoing flux through i+1/2
            op.diag[i] -= from_left / volume;
            op.upper[i] -= from_right / volume;
        }
        if (i > 0) {  // incoming flux through i-1/2
            op.lower[i] += from_left / volume;
            op.diag[i] += from_right / volume;
        }
    }
    return op;
}

}  // namespace

EvolveResult evolve_density_detailed(const DensityGrid& initial, const MarketParams& params, double t,
                                     const FPGridSpec& spec) {
    params.validate();
    require(std::isfinite(t) && t > 0.0, ErrorCode::DomainError, "t must be positive");
    const UniformGrid grid = spec.grid();
    require(initial.grid().matches(grid), ErrorCode::GridMismatch, "initial density grid does not match the evolution grid");

    const double mass_in = initial.mass();
    require(mass_in > 0.0, ErrorCode::DomainError, "initial density has zero mass");
    const double margin = 0.1 * (grid.back() - grid.front());
    const double inner = initial.mass_between(grid.front() + margin, grid.back() - margin);
    require(mass_in - inner <= 1e-12 * mass_in, ErrorCode::DomainError,
            "initial density is not supported inside the inner 80% of the grid");

    const double advection = params.log_drift();
    const double diffusion = 0.5 * params.sigma * params.sigma;
    const auto op = generator(grid, advection, diffusion);

    const std::size_t n_steps = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(t / spec.dt_step - 1e-9)), 1);
    const double dt = t / static_cast<double>(n_steps);

    // Outflow rate an absorbing wall would see: diffusive D p / h plus inward-facing advection.
    const double h = grid.spacing();
    const double left_rate = diffusion / h + std::max(-advection, 0.0);
    const double right_rate = diffusion / h + std::max(advection, 0.0);

    std::vector<double> p(initial.weights().begin(), initial.weights().end());
    std::vector<double> rhs(p.size()), work;
    double outflow = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double before = left_rate * p.front() + right_rate * p.back();
        op.apply_shifted(0.5 * dt, p, rhs);
        detail::solve_shifted(op, -0.5 * dt, rhs, work);
        p.swap(rhs);
        outflow += 0.5 * dt * (before + left_rate * p.front() + right_rate * p.back());
    }

    EvolveResult result;
    result.steps = n_steps;
    result.boundary_outflow = outflow / mass_in;
    if (result.boundary_outflow > 1e-8) {
        fail(ErrorCode::MassLeak, "boundary outflow estimate " + std::to_string(result.boundary_outflow) +
                                      " (relative to the initial mass) exceeds 1e-8; widen the grid");
    }

    for (double& w : p) {
        if (w < -1e-12) fail(ErrorCode::NegativeDensity, "evolved density went negative: " + std::to_string(w));
        if (w < 0.0) w = 0.0;
    }
    DensityGrid out(grid, std::move(p));
    result.mass_drift = std::abs(out.mass() - mass_in);
    out.normalize();
    result.density = std::move(out);
    return result;
}

DensityGrid analytic_density(const MarketParams& params, double t, const UniformGrid& grid,
                             double initial_variance) {
    params.validate();
    require(std::isfinite(t) && t > 0.0, ErrorCode::DomainError, "t must be positive");
    require(initial_variance >= 0.0, ErrorCode::DomainError, "initial variance must be nonnegative");
    const double mean = std::log(params.u0) + params.log_drift() * t;
    return DensityGrid::gaussian(grid, mean, params.sigma * params.sigma * t + initial_variance);
}

DensityGrid chain_density(const DensityGrid& p, const dynamics::TransitionDensity& step) {
    const auto& grid = p.grid();
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] != 0.0) s += grid.trapezoid_weight(i) * p[i] * dynamics::transition_pdf(step, grid[j] - grid[i]);
        }
        out[j] = s;
    }
    return {grid, std::move(out)};
}

void write_csv(std::ostream& os, const DensityGrid& density) {
    os << "x,p\n";
    for (std::size_t i = 0; i < density.size(); ++i) {
        os << detail::format_double(density.point(i)) << ',' << detail::format_double(density[i]) << '\n';
    }
}

}  // namespace efx::fokker_planck
