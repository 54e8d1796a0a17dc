#include "entropic_fx/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "entropic_fx/error.hpp"
#include "format.hpp"
#include "streams.hpp"

namespace efx::dynamics {

using detail::require;

double log_coordinate(double u) {
    require(std::isfinite(u) && u > 0.0, ErrorCode::DomainError, "exchange rate must be positive");
    return std::log(u);
}

TransitionDensity transition_density(const MarketParams& params, double dt) {
    params.validate();
    require(std::isfinite(dt) && dt > 0.0, ErrorCode::DomainError, "dt must be positive");
    return {params.log_drift() * dt, params.sigma * params.sigma * dt, dt};
}

double transition_pdf(const TransitionDensity& td, double ln_ratio) {
    const double z = ln_ratio - td.log_mean;
    return std::exp(-0.5 * z * z / td.log_var) / std::sqrt(2.0 * std::numbers::pi * td.log_var);
}

std::vector<double> PathSet::terminal_log_ratios() const {
    std::vector<double> out(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) out[p] = log_value(p, n_steps) - log_value(p, 0);
    return out;
}

PathSet simulate_paths(const MarketParams& params, double horizon, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimulationOptions& options) {
    params.validate();
    require(std::isfinite(horizon) && horizon > 0.0, ErrorCode::DomainError, "horizon must be positive");
    require(n_steps >= 1, ErrorCode::DomainError, "n_steps must be at least 1");
    require(n_paths >= 1, ErrorCode::DomainError, "n_paths must be at least 1");

    PathSet ps;
    ps.seed = seed;
    ps.n_paths = n_paths;
    ps.n_steps = n_steps;
    const double dt = horizon / static_cast<double>(n_steps);
    ps.times.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) ps.times[k] = dt * static_cast<double>(k);
    ps.times.back() = horizon;

    const std::size_t row = n_steps + 1;
    ps.log_paths.resize(n_paths * row);
    const double drift = params.log_drift() * dt;
    const double vol = params.sigma * std::sqrt(dt);
    const double x0 = std::log(params.u0);

    const std::size_t n_blocks = (n_paths + kPathsPerStream - 1) / kPathsPerStream;
    detail::parallel_blocks(n_blocks, options.threads, [&](std::size_t block) {
        auto engine = detail::stream_engine(seed, block);
        std::normal_distribution<double> normal;
        const std::size_t first = block * kPathsPerStream;
        const std::size_t last = std::min(n_paths, first + kPathsPerStream);
        for (std::size_t p = first; p < last; ++p) {
            double* out = ps.log_paths.data() + p * row;
            out[0] = x0;
            for (std::size_t k = 1; k <= n_steps; ++k) out[k] = out[k - 1] + drift + vol * normal(engine);
        }
    });
    return ps;
}

void write_csv(std::ostream& os, const PathSet& paths, PathScale scale) {
    os << "time";
    for (std::size_t p = 0; p < paths.n_paths; ++p) os << ",path_" << p;
    os << '\n';
    for (std::size_t k = 0; k <= paths.n_steps; ++k) {
        os << detail::format_double(paths.times[k]);
        for (std::size_t p = 0; p < paths.n_paths; ++p) {
            const double v = paths.log_value(p, k);
            os << ',' << detail::format_double(scale == PathScale::rate ? std::exp(v) : v);
        }
        os << '\n';
    }
}

}  // namespace efx::dynamics
