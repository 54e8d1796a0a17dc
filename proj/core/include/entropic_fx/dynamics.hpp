#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "entropic_fx/market.hpp"

namespace efx::dynamics {

/// Gaussian law of ln(u'/u) over an elapsed time dt.
struct TransitionDensity {
    double log_mean = 0.0;
    double log_var = 0.0;
    double dt = 0.0;
};

/// ln u. The only coordinate in which a rescaling u -> l u acts as a pure shift.
double log_coordinate(double u);

/// log_mean = (drift_d - drift_f - sigma^2/2) dt, log_var = sigma^2 dt.
TransitionDensity transition_density(const MarketParams& params, double dt);

/// Gaussian pdf of ln(u'/u) under `td`.
double transition_pdf(const TransitionDensity& td, double ln_ratio);

/// Ensemble of log-rate trajectories on a uniform time grid.
///
/// Row-major storage: path p occupies log_paths[p * (n_steps + 1) ...].
struct PathSet {
    std::vector<double> times;
    std::vector<double> log_paths;
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;

    std::span<const double> path(std::size_t p) const {
        return {log_paths.data() + p * (n_steps + 1), n_steps + 1};
    }
    double log_value(std::size_t p, std::size_t step) const { return log_paths[p * (n_steps + 1) + step]; }

    /// ln(u_T / u_0) for every path.
    std::vector<double> terminal_log_ratios() const;
};

struct SimulationOptions {
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    std::size_t threads = 1;
};

/// Paths per independently seeded RNG stream. Output does not depend on the thread count.
inline constexpr std::size_t kPathsPerStream = 4096;

/// Exact log-space GBM: each step adds (drift_d - drift_f - sigma^2/2) dt + sigma sqrt(dt) Z.
///
/// Deterministic for a fixed (seed, n_paths, n_steps) within one build.
PathSet simulate_paths(const MarketParams& params, double horizon, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimulationOptions& options = {});

enum class PathScale { log_rate, rate };

/// CSV with header `time,path_0,...,path_{n-1}`; one row per time, 17 significant digits.
void write_csv(std::ostream& os, const PathSet& paths, PathScale scale = PathScale::log_rate);

}  // namespace efx::dynamics
