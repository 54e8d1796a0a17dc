#pragma once

#include <cstddef>
#include <iosfwd>

#include "entropic_fx/density_grid.hpp"
#include "entropic_fx/dynamics.hpp"
#include "entropic_fx/market.hpp"

namespace efx::fokker_planck {

/// Discretization of the log-rate domain and the time step.
struct FPGridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n_points = 2001;
    double dt_step = 1e-3;

    /// Throws DomainError unless x_min < x_max, n_points >= 3 and dt_step > 0.
    void validate() const;
    UniformGrid grid() const;
};

/// Grid centred on the analytic mean at time t with half-width 10 standard deviations.
///
/// `initial_variance` widens the grid for a smeared initial condition. dt_step is t / 1000.
FPGridSpec default_grid(const MarketParams& params, double t, double initial_variance = 0.0,
                        std::size_t n_points = 2001);

/// Variance used to represent a point mass on `grid`: (3h)^2.
double point_mass_variance(const UniformGrid& grid);

/// Point mass at x0 discretized as a normalized Gaussian of variance (3h)^2.
DensityGrid point_mass(const UniformGrid& grid, double x0);

struct EvolveResult {
    DensityGrid density;
    std::size_t steps = 0;
    /// Mass an absorbing boundary would have removed over the run, relative to total mass.
    double boundary_outflow = 0.0;
    /// |mass(out) - mass(in)| before the final clip-and-renormalize.
    double mass_drift = 0.0;
};

/// Forward-evolves `initial` to time t under
///   dp/dt = -d/dx[(drift_d - drift_f - sigma^2/2) p] + 1/2 d^2/dx^2[sigma^2 p],  x = ln u.
///
/// Conservative finite-volume form with central fluxes, zero-flux walls and
/// Crank-Nicolson stepping. `initial` must live on spec.grid() with its mass
/// inside the inner 80% of the domain.
///
/// Throws MassLeak when the estimated boundary outflow exceeds 1e-8 of the mass,
/// NegativeDensity when a weight falls below -1e-12, DomainError on bad input.
EvolveResult evolve_density_detailed(const DensityGrid& initial, const MarketParams& params, double t,
                                     const FPGridSpec& spec);

inline DensityGrid evolve_density(const DensityGrid& initial, const MarketParams& params, double t,
                                  const FPGridSpec& spec) {
    return evolve_density_detailed(initial, params, t, spec).density;
}

/// Gaussian in ln u with mean ln u0 + (drift_d - drift_f - sigma^2/2) t and variance
/// sigma^2 t + initial_variance, sampled on `grid` and normalized.
DensityGrid analytic_density(const MarketParams& params, double t, const UniformGrid& grid,
                             double initial_variance = 0.0);

/// One entropic instant: p'(x') = integral dx P(x' - x) p(x), by the trapezoidal rule.
DensityGrid chain_density(const DensityGrid& p, const dynamics::TransitionDensity& step);

/// CSV with header `x,p`, 17 significant digits.
void write_csv(std::ostream& os, const DensityGrid& density);

}  // namespace efx::fokker_planck
