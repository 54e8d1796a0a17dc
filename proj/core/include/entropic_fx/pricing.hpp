#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entropic_fx/density_grid.hpp"
#include "entropic_fx/fokker_planck.hpp"
#include "entropic_fx/market.hpp"

namespace efx::pricing {

enum class OptionKind { call, put };

/// European option on one unit of foreign currency, struck at K domestic per foreign.
struct OptionSpec {
    OptionKind kind = OptionKind::call;
    double strike = 1.0;
    double expiry = 1.0;

    /// Throws DomainError unless strike >= 0 and expiry > 0.
    void validate() const;
};

enum class Method { closed_form, quadrature, monte_carlo, pde };

std::string_view to_string(OptionKind k) noexcept;
std::string_view to_string(Method m) noexcept;
std::optional<OptionKind> parse_option_kind(std::string_view s) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;

/// Present value in domestic currency per unit of foreign notional.
struct PriceResult {
    double premium = 0.0;
    Method method = Method::closed_form;
    std::optional<double> std_error;
    /// d1, d2 for the closed form; n_paths for Monte Carlo; pde_residual, grid sizes for the PDE.
    std::map<std::string, double> diagnostics;

    std::optional<double> diagnostic(const std::string& key) const {
        auto it = diagnostics.find(key);
        return it == diagnostics.end() ? std::nullopt : std::optional<double>(it->second);
    }
    friend bool operator==(const PriceResult&, const PriceResult&) = default;
};

/// Flat JSON object: premium, method, std_error, d1, d2 always present (null when
/// absent), followed by any further diagnostics. Numbers carry 17 significant digits.
std::string to_json(const PriceResult& result);

/// Inverse of to_json. Throws DomainError on malformed input.
PriceResult price_result_from_json(std::string_view json);

struct D1D2 {
    double d1 = 0.0;
    double d2 = 0.0;
};

/// d1 = [ln(u0/K) + (r_d - r_f + sigma^2/2) T] / (sigma sqrt T), d2 = d1 - sigma sqrt T.
D1D2 d1_d2(const MarketParams& market, const OptionSpec& opt);

/// C = u0 e^{-r_f T} N(d1) - K e^{-r_d T} N(d2). Throws MeasureError under the physical measure.
PriceResult gk_call(const MarketParams& market, const OptionSpec& opt);

/// P = K e^{-r_d T} N(-d2) - u0 e^{-r_f T} N(-d1). Throws MeasureError under the physical measure.
PriceResult gk_put(const MarketParams& market, const OptionSpec& opt);

/// Dispatches on opt.kind.
PriceResult closed_form_price(const MarketParams& market, const OptionSpec& opt);

/// C - P - (e^{-r_f T} u0 - e^{-r_d T} K) with closed-form C and P.
double parity_residual(const MarketParams& market, double strike, double expiry);

/// Discounted payoff integrated against the terminal lognormal law.
///
/// The integral runs over mean +- 12 standard deviations in ln u, split at ln K,
/// with adaptive Gauss-Kronrod (7, 15) until the estimated absolute error of the
/// premium is below `tol`. Throws ToleranceNotMet when refinement stalls.
PriceResult quadrature_price(const MarketParams& market, const OptionSpec& opt, double tol = 1e-12);

struct McOptions {
    /// Pair every normal draw Z with -Z.
    bool antithetic = false;
    /// 0 or 1: one exact terminal draw. Larger values route through dynamics::simulate_paths.
    std::size_t n_steps = 0;
    std::size_t threads = 1;
};

/// e^{-r_d T} times the sample mean of the payoff over terminal rates drawn from the
/// risk-neutral law. std_error is the sample standard deviation over sqrt(samples).
PriceResult mc_price(const MarketParams& market, const OptionSpec& opt, std::size_t n_paths,
                     std::uint64_t seed, const McOptions& options = {});

/// Log-rate grid for the PDE pricer: covers ln K and ln u0 with a margin of
/// max(10 sigma sqrt T, |ln(u0/K)| / 4) on each side, ln K on a node, dt_step = T / time_steps.
fokker_planck::FPGridSpec default_pde_grid(const MarketParams& market, const OptionSpec& opt,
                                           std::size_t n_points = 1601, std::size_t time_steps = 400);

struct PdeSolution {
    UniformGrid grid;
    /// Payoff at expiry on the grid nodes.
    std::vector<double> terminal;
    /// Premium surface at t = 0 on the grid nodes.
    std::vector<double> present;
    std::size_t time_steps = 0;
    /// max |discrete residual| * T / max|E| over interior nodes and all steps.
    double scaled_residual = 0.0;
};

/// Solves dE/dt + (r_d - r_f - sigma^2/2) dE/dx + sigma^2/2 d2E/dx2 - r_d E = 0 in x = ln u
/// backward from the payoff with Crank-Nicolson after two implicit Euler half-steps.
///
/// Dirichlet walls: call 0 below and u e^{-r_f tau} - K e^{-r_d tau} above; put mirrored.
/// Throws GridTooNarrow if ln u0 or ln K sits within 10% of the width from a wall, if the
/// grid does not span ln K +- 8 sigma sqrt T, or if the solution deviates from the wall
/// asymptotics next to a wall.
PdeSolution pde_solve(const MarketParams& market, const OptionSpec& opt, const fokker_planck::FPGridSpec& grid);

/// pde_solve followed by cubic interpolation at ln u0.
PriceResult pde_price(const MarketParams& market, const OptionSpec& opt, const fokker_planck::FPGridSpec& grid);

}  // namespace efx::pricing
