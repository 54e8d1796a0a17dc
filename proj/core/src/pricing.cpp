#include "entropic_fx/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "entropic_fx/dynamics.hpp"
#include "entropic_fx/error.hpp"
#include "entropic_fx/normal.hpp"
#include "gauss_kronrod.hpp"
#include "streams.hpp"
#include "tridiagonal.hpp"

namespace efx::pricing {

using detail::fail;
using detail::require;

void OptionSpec::validate() const {
    require(std::isfinite(strike) && strike >= 0.0, ErrorCode::DomainError, "strike must be nonnegative");
    require(std::isfinite(expiry) && expiry > 0.0, ErrorCode::DomainError, "expiry must be positive");
}

std::string_view to_string(OptionKind k) noexcept { return k == OptionKind::call ? "call" : "put"; }

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
        case Method::pde: return "pde";
    }
    return "unknown";
}

std::optional<OptionKind> parse_option_kind(std::string_view s) noexcept {
    if (s == "call") return OptionKind::call;
    if (s == "put") return OptionKind::put;
    return std::nullopt;
}

std::optional<Method> parse_method(std::string_view s) noexcept {
    for (Method m : {Method::closed_form, Method::quadrature, Method::monte_carlo, Method::pde}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

namespace {

void require_risk_neutral(const MarketParams& market) {
    market.validate();
    if (market.measure != Measure::risk_neutral) {
        fail(ErrorCode::MeasureError, "pricing requires risk-neutral drifts (r_d, r_f); got physical drifts");
    }
}

double payoff(OptionKind kind, double u, double strike) {
    return kind == OptionKind::call ? std::max(u - strike, 0.0) : std::max(strike - u, 0.0);
}

}  // namespace

D1D2 d1_d2(const MarketParams& market, const OptionSpec& opt) {
    market.validate();
    opt.validate();
    const double vol_sqrt_t = market.sigma * std::sqrt(opt.expiry);
    require(vol_sqrt_t > 0.0, ErrorCode::DomainError, "sigma sqrt(T) must be positive");
    const double log_moneyness = std::log(market.u0 / opt.strike);
    const double d1 =
        (log_moneyness + (market.drift_d - market.drift_f + 0.5 * market.sigma * market.sigma) * opt.expiry) /
        vol_sqrt_t;
    return {d1, d1 - vol_sqrt_t};
}

namespace {

PriceResult closed_form(const MarketParams& market, const OptionSpec& opt, OptionKind kind) {
    require_risk_neutral(market);
    opt.validate();
    const auto [d1, d2] = d1_d2(market, opt);
    const double fwd_foreign = market.u0 * std::exp(-market.drift_f * opt.expiry);
    const double pv_strike = opt.strike * std::exp(-market.drift_d * opt.expiry);
    PriceResult r;
    r.method = Method::closed_form;
    // Out of the money the two terms nearly cancel. Since u0 e^{-r_f T} phi(d1) = K e^{-r_d T} phi(d2),
    // the premium factors as K e^{-r_d T} phi(d2) times a difference of Mills ratios, which stays accurate.
    if (kind == OptionKind::call) {
        r.premium = d1 < 0.0 ? pv_strike * std_normal_pdf(d2) * (mills_ratio(-d1) - mills_ratio(-d2))
                             : fwd_foreign * std_normal_cdf(d1) - pv_strike * std_normal_cdf(d2);
    } else {
        r.premium = d2 > 0.0 ? pv_strike * std_normal_pdf(d2) * (mills_ratio(d2) - mills_ratio(d1))
                             : pv_strike * std_normal_cdf(-d2) - fwd_foreign * std_normal_cdf(-d1);
    }
    r.diagnostics["d1"] = d1;
    r.diagnostics["d2"] = d2;
    return r;
}

}  // namespace

PriceResult gk_call(const MarketParams& market, const OptionSpec& opt) {
    require(opt.kind == OptionKind::call, ErrorCode::DomainError, "gk_call needs a call option");
    return closed_form(market, opt, OptionKind::call);
}

PriceResult gk_put(const MarketParams& market, const OptionSpec& opt) {
    require(opt.kind == OptionKind::put, ErrorCode::DomainError, "gk_put needs a put option");
    return closed_form(market, opt, OptionKind::put);
}

PriceResult closed_form_price(const MarketParams& market, const OptionSpec& opt) {
    return closed_form(market, opt, opt.kind);
}

double parity_residual(const MarketParams& market, double strike, double expiry) {
    const OptionSpec call{OptionKind::call, strike, expiry};
    const OptionSpec put{OptionKind::put, strike, expiry};
    const double c = gk_call(market, call).premium;
    const double p = gk_put(market, put).premium;
    const double forward_value =
        std::exp(-market.drift_f * expiry) * market.u0 - std::exp(-market.drift_d * expiry) * strike;
    return c - p - forward_value;
}

PriceResult quadrature_price(const MarketParams& market, const OptionSpec& opt, double tol) {
    require_risk_neutral(market);
    opt.validate();
    require(tol > 0.0, ErrorCode::DomainError, "quadrature tolerance must be positive");

    const double mean = std::log(market.u0) + market.log_drift() * opt.expiry;
    const double sd = market.sigma * std::sqrt(opt.expiry);
    const double discount = std::exp(-market.drift_d * opt.expiry);
    const double strike = opt.strike;

    // Integrate in the standardized variable z = (ln u - mean) / sd over [-12, 12].
    constexpr double span = 12.0;
    double lo = -span;
    double hi = span;
    if (strike > 0.0) {
        const double z_strike = (std::log(strike) - mean) / sd;
        if (opt.kind == OptionKind::call) lo = std::max(lo, z_strike);
        else hi = std::min(hi, z_strike);
    } else if (opt.kind == OptionKind::put) {
        hi = lo;  // a zero strike put never pays
    }

    const auto integrand = [&](double z) {
        const double u = std::exp(mean + sd * z);
        return discount * payoff(opt.kind, u, strike) * std_normal_pdf(z);
    };
    const auto q = detail::integrate_adaptive(integrand, lo, hi, 0.5 * tol);
    if (!q.converged) {
        fail(ErrorCode::ToleranceNotMet,
             "adaptive quadrature stalled at error estimate " + std::to_string(q.error));
    }

    PriceResult r;
    r.method = Method::quadrature;
    r.premium = q.value;
    r.diagnostics["quadrature_error"] = q.error;
    r.diagnostics["quadrature_intervals"] = static_cast<double>(q.intervals);
    return r;
}

namespace {

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0.0) return;
        const double total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }
};

}  // namespace

PriceResult mc_price(const MarketParams& market, const OptionSpec& opt, std::size_t n_paths, std::uint64_t seed,
                     const McOptions& options) {
    require_risk_neutral(market);
    opt.validate();
    require(n_paths >= 2, ErrorCode::DomainError, "Monte Carlo needs at least 2 paths");

    const double discount = std::exp(-market.drift_d * opt.expiry);
    Moments total;

    if (options.n_steps > 1) {
        const auto paths = dynamics::simulate_paths(market, opt.expiry, options.n_steps, n_paths, seed,
                                                    {options.threads});
        for (std::size_t p = 0; p < n_paths; ++p) {
            total.add(discount * payoff(opt.kind, std::exp(paths.log_value(p, options.n_steps)), opt.strike));
        }
    } else {
        const double x0 = std::log(market.u0) + market.log_drift() * opt.expiry;
        const double sd = market.sigma * std::sqrt(opt.expiry);
        const auto sample = [&](double z) { return discount * payoff(opt.kind, std::exp(x0 + sd * z), opt.strike); };

        // Antithetic mode draws one normal per pair and records the pair average.
        const std::size_t samples = options.antithetic ? n_paths / 2 : n_paths;
        const std::size_t n_blocks = (samples + dynamics::kPathsPerStream - 1) / dynamics::kPathsPerStream;
        std::vector<Moments> blocks(n_blocks);
        detail::parallel_blocks(n_blocks, options.threads, [&](std::size_t block) {
            auto engine = detail::stream_engine(seed, block);
            std::normal_distribution<double> normal;
            const std::size_t first = block * dynamics::kPathsPerStream;
            const std::size_t last = std::min(samples, first + dynamics::kPathsPerStream);
            Moments acc;
            for (std::size_t i = first; i < last; ++i) {
                const double z = normal(engine);
                acc.add(options.antithetic ? 0.5 * (sample(z) + sample(-z)) : sample(z));
            }
            blocks[block] = acc;
        });
        for (const auto& b : blocks) total.merge(b);
    }

    PriceResult r;
    r.method = Method::monte_carlo;
    r.premium = total.mean;
    r.std_error = std::sqrt(total.m2 / (total.n - 1.0) / total.n);
    r.diagnostics["n_paths"] = static_cast<double>(n_paths);
    r.diagnostics["samples"] = total.n;
    return r;
}

fokker_planck::FPGridSpec default_pde_grid(const MarketParams& market, const OptionSpec& opt, std::size_t n_points,
                                           std::size_t time_steps) {
    market.validate();
    opt.validate();
    require(opt.strike > 0.0, ErrorCode::DomainError, "the PDE pricer needs a positive strike");
    require(n_points >= 5, ErrorCode::DomainError, "PDE grid needs at least 5 points");
    require(time_steps >= 2, ErrorCode::DomainError, "PDE needs at least 2 time steps");

    const double x_strike = std::log(opt.strike);
    const double x_spot = std::log(market.u0);
    const double sd = market.sigma * std::sqrt(opt.expiry);
    const double margin = std::max(10.0 * sd, std::abs(x_spot - x_strike) / 4.0);
    const double lo = std::min(x_strike, x_spot) - margin;
    const double hi = std::max(x_strike, x_spot) + margin;
    const double h = (hi - lo) / static_cast<double>(n_points - 1);
    // Shift so ln K falls on a node; the payoff kink then sits on the grid.
    const double strike_index = std::round((x_strike - lo) / h);
    const double x_min = x_strike - strike_index * h;
    return {x_min, x_min + h * static_cast<double>(n_points - 1), n_points,
            opt.expiry / static_cast<double>(time_steps)};
}

namespace {

// Dirichlet wall values at log-rate x with time to expiry tau.
double wall_value(const MarketParams& m, const OptionSpec& opt, double x, double tau, bool upper) {
    const double forward = std::exp(x - m.drift_f * tau) - opt.strike * std::exp(-m.drift_d * tau);
    if (opt.kind == OptionKind::call) return upper ? forward : 0.0;
    return upper ? 0.0 : -forward;
}

double cubic_interpolate(const UniformGrid& grid, const std::vector<double>& values, double x) {
    const double pos = (x - grid.front()) / grid.spacing();
    auto base = static_cast<std::ptrdiff_t>(std::floor(pos)) - 1;
    base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(grid.size()) - 4);
    double result = 0.0;
    for (std::ptrdiff_t j = 0; j < 4; ++j) {
        double basis = 1.0;
        for (std::ptrdiff_t k = 0; k < 4; ++k) {
            if (k != j) basis *= (pos - static_cast<double>(base + k)) / static_cast<double>(j - k);
        }
        result += basis * values[static_cast<std::size_t>(base + j)];
    }
    return result;
}

}  // namespace

PdeSolution pde_solve(const MarketParams& market, const OptionSpec& opt, const fokker_planck::FPGridSpec& spec) {
    require_risk_neutral(market);
    opt.validate();
    require(opt.strike > 0.0, ErrorCode::DomainError, "the PDE pricer needs a positive strike");
    const UniformGrid grid = spec.grid();
    require(grid.size() >= 5, ErrorCode::DomainError, "PDE grid needs at least 5 points");

    const double x_strike = std::log(opt.strike);
    const double x_spot = std::log(market.u0);
    const double width = grid.back() - grid.front();
    const double sd = market.sigma * std::sqrt(opt.expiry);
    for (double x : {x_strike, x_spot}) {
        if (x - grid.front() < 0.1 * width || grid.back() - x < 0.1 * width) {
            fail(ErrorCode::GridTooNarrow, "u0 and K must lie at least 10% of the grid width from either wall");
        }
    }
    if (x_strike - 8.0 * sd < grid.front() || x_strike + 8.0 * sd > grid.back()) {
        fail(ErrorCode::GridTooNarrow, "grid must span ln K +- 8 sigma sqrt(T)");
    }

    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const double advection = market.log_drift();
    const double diffusion = 0.5 * market.sigma * market.sigma;
    const double rate = market.drift_d;

    // Interior generator of dE/dtau; wall rows stay zero and are imposed directly.
    detail::Tridiagonal op(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        op.lower[i] = diffusion / (h * h) - advection / (2.0 * h);
        op.diag[i] = -2.0 * diffusion / (h * h) - rate;
        op.upper[i] = diffusion / (h * h) + advection / (2.0 * h);
    }

    PdeSolution sol;
    sol.grid = grid;
    sol.terminal.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.terminal[i] = payoff(opt.kind, std::exp(grid[i]), opt.strike);

    const auto steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(opt.expiry / spec.dt_step - 1e-9)));
    const double dtau = opt.expiry / static_cast<double>(steps);
    sol.time_steps = steps;

    std::vector<double> e = sol.terminal, rhs(n), work, le_old(n), le_new(n);
    double tau = 0.0;
    double max_residual = 0.0;
    double max_value = 0.0;
    for (double v : e) max_value = std::max(max_value, std::abs(v));

    // theta = 1 is implicit Euler, theta = 1/2 is Crank-Nicolson.
    const auto advance = [&](double step, double theta) {
        op.apply(e, le_old);
        op.apply_shifted((1.0 - theta) * step, e, rhs);
        const double next_tau = tau + step;
        rhs.front() = wall_value(market, opt, grid.front(), next_tau, false);
        rhs.back() = wall_value(market, opt, grid.back(), next_tau, true);
        detail::solve_shifted(op, -theta * step, rhs, work);
        op.apply(rhs, le_new);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double r = (rhs[i] - e[i]) / step - theta * le_new[i] - (1.0 - theta) * le_old[i];
            max_residual = std::max(max_residual, std::abs(r));
            max_value = std::max(max_value, std::abs(rhs[i]));
        }
        e.swap(rhs);
        tau = next_tau;
    };

    // Rannacher start-up: the first step is taken as two implicit Euler half-steps.
    advance(0.5 * dtau, 1.0);
    advance(0.5 * dtau, 1.0);
    for (std::size_t k = 1; k < steps; ++k) advance(dtau, 0.5);

    // A wall too close to the action shows up as a mismatch with the wall asymptotics one node in.
    const double scale = std::max(market.u0, opt.strike);
    const auto gap = [&](std::size_t i, bool upper) {
        const double w = wall_value(market, opt, grid[i], tau, upper);
        return std::abs(e[i] - w) / std::max(scale, std::abs(w));
    };
    if (std::max(gap(1, false), gap(n - 2, true)) > 1e-6) {
        fail(ErrorCode::GridTooNarrow, "solution departs from the wall asymptotics; widen the grid");
    }

    sol.present = std::move(e);
    sol.scaled_residual = max_value > 0.0 ? max_residual * opt.expiry / max_value : max_residual;
    return sol;
}

PriceResult pde_price(const MarketParams& market, const OptionSpec& opt, const fokker_planck::FPGridSpec& grid) {
    const PdeSolution sol = pde_solve(market, opt, grid);
    PriceResult r;
    r.method = Method::pde;
    r.premium = cubic_interpolate(sol.grid, sol.present, std::log(market.u0));
    r.diagnostics["pde_residual"] = sol.scaled_residual;
    r.diagnostics["n_points"] = static_cast<double>(sol.grid.size());
    r.diagnostics["time_steps"] = static_cast<double>(sol.time_steps);
    return r;
}

}  // namespace efx::pricing
