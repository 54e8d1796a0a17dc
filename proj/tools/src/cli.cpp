#include "entropic_fx_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "entropic_fx/dynamics.hpp"
#include "entropic_fx/error.hpp"
#include "entropic_fx/fokker_planck.hpp"
#include "entropic_fx/maxent.hpp"
#include "entropic_fx/pricing.hpp"
#include "json_out.hpp"

namespace efx::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutputSink {
public:
    OutputSink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (path.empty() || path == "-") return;
        file_.open(path, std::ios::binary);
        if (!file_) throw UsageError("cannot open output file '" + path + "'");
        to_file_ = true;
    }
    std::ostream& stream() { return to_file_ ? file_ : fallback_; }
    bool to_file() const { return to_file_; }

private:
    std::ostream& fallback_;
    std::ofstream file_;
    bool to_file_ = false;
};

// ---------------------------------------------------------------- shared flags

struct MarketFlags {
    double u0 = 1.0;
    double rd = 0.0;
    double rf = 0.0;
    double sigma = 0.2;
    std::string measure = "risk_neutral";

    MarketParams params() const {
        return {u0, rd, rf, sigma, measure == "physical" ? Measure::physical : Measure::risk_neutral};
    }
};

void add_market_flags(CLI::App& cmd, MarketFlags& m) {
    cmd.add_option("--u0", m.u0, "spot exchange rate (domestic per foreign)");
    cmd.add_option("--rd,--mu-d", m.rd, "domestic rate or drift");
    cmd.add_option("--rf,--mu-f", m.rf, "foreign rate or drift");
    cmd.add_option("--sigma", m.sigma, "volatility");
    cmd.add_option("--measure", m.measure, "risk_neutral or physical")
        ->check(CLI::IsMember({"risk_neutral", "physical"}));
}

void add_threads_flag(CLI::App& cmd, std::size_t& threads) {
    cmd.add_option("--threads", threads, "worker threads (default: $ENTROPIC_FX_THREADS, else 1)")
        ->check(CLI::PositiveNumber);
}

std::size_t resolve_threads(const CLI::App& cmd, std::size_t flag_value) {
    if (cmd.count("--threads") > 0) return flag_value;
    const char* env = std::getenv("ENTROPIC_FX_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw UsageError(std::string("ENTROPIC_FX_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<std::size_t>(v);
}

void require_keys(const CLI::App& cmd, std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        if (cmd.count(std::string("--") + key) == 0) {
            throw UsageError(std::string("missing required key '") + key + "' (flag --" + key + " or config key \"" +
                             key + "\")");
        }
    }
}

Json to_ordered(const std::string& text) { return Json::parse(text); }

// ---------------------------------------------------------------- price

struct PriceFlags {
    MarketFlags market;
    std::string kind = "call";
    double strike = 1.0;
    double expiry = 1.0;
    std::string method = "closed_form";
    std::size_t n_paths = 1'000'000;
    std::uint64_t seed = 1;
    bool antithetic = false;
    std::size_t mc_steps = 0;
    double tol = 1e-12;
    std::size_t n_points = 1601;
    std::size_t time_steps = 400;
    std::size_t threads = 1;
};

// Absolute agreement band of a result around the exact premium.
double agreement_band(const pricing::PriceResult& r, double tol) {
    switch (r.method) {
        case pricing::Method::closed_form: return 0.0;
        case pricing::Method::quadrature: return std::max(tol, 1e-10);
        case pricing::Method::monte_carlo: return 3.0 * r.std_error.value_or(0.0);
        case pricing::Method::pde: return 1e-4 * std::abs(r.premium);
    }
    return 0.0;
}

int cmd_price(const CLI::App& cmd, const PriceFlags& f, std::ostream& out) {
    require_keys(cmd, {"u0", "rd", "rf", "sigma", "strike", "expiry"});
    const MarketParams market = f.market.params();
    const pricing::OptionSpec opt{*pricing::parse_option_kind(f.kind), f.strike, f.expiry};

    const auto run_one = [&](pricing::Method m) {
        switch (m) {
            case pricing::Method::closed_form: return pricing::closed_form_price(market, opt);
            case pricing::Method::quadrature: return pricing::quadrature_price(market, opt, f.tol);
            case pricing::Method::monte_carlo:
                return pricing::mc_price(market, opt, f.n_paths, f.seed,
                                         {f.antithetic, f.mc_steps, resolve_threads(cmd, f.threads)});
            case pricing::Method::pde:
                return pricing::pde_price(market, opt, pricing::default_pde_grid(market, opt, f.n_points, f.time_steps));
        }
        throw std::logic_error("unhandled method");
    };

    if (f.method != "all") {
        out << pricing::to_json(run_one(*pricing::parse_method(f.method))) << '\n';
        return exit_ok;
    }

    std::vector<pricing::PriceResult> results;
    for (auto m : {pricing::Method::closed_form, pricing::Method::quadrature, pricing::Method::monte_carlo,
                   pricing::Method::pde}) {
        results.push_back(run_one(m));
    }
    bool consistent = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            const double gap = std::abs(results[i].premium - results[j].premium);
            const double scale = std::max(std::abs(results[i].premium), std::abs(results[j].premium));
            consistent = consistent && gap <= agreement_band(results[i], f.tol) + agreement_band(results[j], f.tol) +
                                                  1e-14 * scale;
        }
    }
    Json j;
    j["results"] = Json::array();
    for (const auto& r : results) j["results"].push_back(to_ordered(pricing::to_json(r)));
    j["pairwise_consistent"] = consistent;
    out << format_json(j) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------- parity

struct ParityFlags {
    MarketFlags market;
    double strike = 1.0;
    double expiry = 1.0;
    std::size_t sweep = 0;
    std::uint64_t seed = 1;
};

constexpr double kParityScale = 1e-12;

int cmd_parity(const CLI::App& cmd, const ParityFlags& f, std::ostream& out) {
    Json j;
    bool within = true;
    if (f.sweep == 0) {
        require_keys(cmd, {"u0", "rd", "rf", "sigma", "strike", "expiry"});
        const MarketParams market = f.market.params();
        const double residual = pricing::parity_residual(market, f.strike, f.expiry);
        const double bound = kParityScale * std::max(market.u0, f.strike);
        within = std::abs(residual) <= bound;
        j["residual"] = residual;
        j["abs_residual"] = std::abs(residual);
        j["bound"] = bound;
    } else {
        std::mt19937_64 rng(f.seed);
        std::uniform_real_distribution<double> moneyness(0.5, 2.0), strike(0.2, 5.0), rate(-0.01, 0.1),
            vol(0.05, 0.6), expiry(0.1, 5.0);
        const Measure measure = f.market.params().measure;
        double max_abs = 0.0, max_scaled = 0.0;
        for (std::size_t i = 0; i < f.sweep; ++i) {
            const double k = strike(rng);
            const double u0 = k * moneyness(rng);
            const double rd = rate(rng), rf = rate(rng), sigma = vol(rng), t = expiry(rng);
            const double residual = std::abs(pricing::parity_residual({u0, rd, rf, sigma, measure}, k, t));
            max_abs = std::max(max_abs, residual);
            max_scaled = std::max(max_scaled, residual / std::max(u0, k));
        }
        within = max_scaled <= kParityScale;
        j["tuples"] = f.sweep;
        j["seed"] = f.seed;
        j["max_abs_residual"] = max_abs;
        j["max_scaled_residual"] = max_scaled;
        j["bound_scale"] = kParityScale;
    }
    j["within_bound"] = within;
    out << format_json(j) << '\n';
    return within ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
    MarketFlags market;
    double horizon = 1.0;
    std::size_t n_steps = 252;
    std::size_t n_paths = 100;
    std::uint64_t seed = 1;
    std::string scale = "log";
    std::string output = "-";
    std::size_t threads = 1;
};

int cmd_simulate(const CLI::App& cmd, const SimulateFlags& f, std::ostream& out) {
    const auto paths = dynamics::simulate_paths(f.market.params(), f.horizon, f.n_steps, f.n_paths, f.seed,
                                                {resolve_threads(cmd, f.threads)});
    OutputSink sink(f.output, out);
    dynamics::write_csv(sink.stream(), paths, f.scale == "rate" ? dynamics::PathScale::rate : dynamics::PathScale::log_rate);
    return exit_ok;
}

// ---------------------------------------------------------------- fokker-planck

struct FokkerPlanckFlags {
    MarketFlags market;
    double t = 1.0;
    double initial_variance = 1e-4;
    std::size_t n_points = 2001;
    double x_min = 0.0;
    double x_max = 0.0;
    double dt_step = 0.0;
    std::string output = "-";
    std::string report = "-";
};

int cmd_fokker_planck(const CLI::App& cmd, const FokkerPlanckFlags& f, std::ostream& out, std::ostream& err) {
    const MarketParams params = f.market.params();
    if (!(f.t > 0.0)) throw Error(ErrorCode::DomainError, "t must be positive");
    auto spec = fokker_planck::default_grid(params, f.t, f.initial_variance, f.n_points);
    if (cmd.count("--x-min") > 0) spec.x_min = f.x_min;
    if (cmd.count("--x-max") > 0) spec.x_max = f.x_max;
    if (cmd.count("--dt-step") > 0) spec.dt_step = f.dt_step;
    spec.validate();

    const UniformGrid grid = spec.grid();
    const double x0 = std::log(params.u0);
    const double v0 = f.initial_variance > 0.0 ? f.initial_variance : fokker_planck::point_mass_variance(grid);
    const auto initial = DensityGrid::gaussian(grid, x0, v0);
    const auto evolved = fokker_planck::evolve_density_detailed(initial, params, f.t, spec);
    const auto exact = fokker_planck::analytic_density(params, f.t, grid, v0);

    OutputSink csv(f.output, out);
    fokker_planck::write_csv(csv.stream(), evolved.density);

    Json j;
    j["l1_error"] = l1_distance(evolved.density, exact);
    j["max_abs_error"] = max_abs_difference(evolved.density, exact);
    j["mean"] = evolved.density.mean();
    j["variance"] = evolved.density.variance();
    j["analytic_mean"] = x0 + params.log_drift() * f.t;
    j["analytic_variance"] = params.sigma * params.sigma * f.t + v0;
    j["mass_drift"] = evolved.mass_drift;
    j["boundary_outflow"] = evolved.boundary_outflow;
    j["steps"] = evolved.steps;
    j["x_min"] = spec.x_min;
    j["x_max"] = spec.x_max;
    j["n_points"] = spec.n_points;
    j["dt_step"] = spec.dt_step;
    j["t"] = f.t;

    std::ostream& fallback = csv.to_file() ? out : err;
    OutputSink report(f.report, fallback);
    report.stream() << format_json(j) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------- maxent-check

struct MaxentFlags {
    double sigma = 0.2;
    double dt = 1.0 / 12.0;
    double mu_d = 0.05;
    double mu_f = 0.02;
    double h = 1e-3;
    double extent = 10.0;
    double variance_target = 0.0;
    double mean_target = 0.0;
    std::string constraints = "both";
    double tol = 1e-12;
    std::size_t max_iter = 100;
};

constexpr double kMaxentDensityBound = 1e-6;

Json maxent_case(const DensityGrid& prior, const maxent::ConstraintSpec& spec, double mean, double var,
                 const std::vector<double>& expected_multipliers, const maxent::SolverOptions& options,
                 bool& pass) {
    const auto sol = maxent::solve_maxent(prior, spec, options);
    double max_error = 0.0;
    for (std::size_t i = 0; i < sol.density.size(); ++i) {
        const double x = sol.density.point(i) - mean;
        const double exact = std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
        max_error = std::max(max_error, std::abs(sol.density[i] - exact));
    }
    Json j;
    j["max_error"] = max_error;
    j["residual"] = sol.residual_norm;
    j["iterations"] = sol.iterations;
    j["multipliers"] = sol.multipliers;
    j["expected_multipliers"] = expected_multipliers;
    const bool ok = max_error < kMaxentDensityBound && sol.residual_norm <= options.tol;
    j["pass"] = ok;
    pass = pass && ok;
    return j;
}

int cmd_maxent_check(const CLI::App& cmd, const MaxentFlags& f, std::ostream& out) {
    const double alpha = maxent::alpha_from_entropic_time(f.sigma, f.dt);
    const double beta = maxent::beta_multiplier(f.mu_d, f.mu_f, f.sigma);
    const double natural_var = maxent::variance_from_alpha(alpha);
    const double var = cmd.count("--variance-target") > 0 ? f.variance_target : natural_var;
    const double mean =
        cmd.count("--mean-target") > 0 ? f.mean_target : (f.mu_d - f.mu_f - 0.5 * f.sigma * f.sigma) * f.dt;
    if (!(f.h > 0.0) || !(f.extent > 0.0)) throw Error(ErrorCode::DomainError, "spacing and extent must be positive");

    const double half = f.extent * std::sqrt(natural_var) + std::abs(mean);
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half / f.h)) + 1;
    if (n > 10'000'000) throw Error(ErrorCode::DomainError, "grid would exceed 1e7 points; increase h");
    const auto grid = UniformGrid::from_bounds(-half, half, n);
    const auto prior = DensityGrid::uniform(grid);
    const maxent::SolverOptions options{f.tol, f.max_iter, 60};

    Json j;
    j["constraints"] = f.constraints;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["variance_target"] = var;
    j["mean_target"] = mean;
    j["grid"] = {{"x_min", grid.front()}, {"x_max", grid.back()}, {"n_points", grid.size()},
                 {"spacing", grid.spacing()}};

    bool pass = true;
    if (f.constraints == "prior" || f.constraints == "both") {
        maxent::ConstraintSpec spec;
        spec.second_central_moment(0.0, var);
        j["prior"] = maxent_case(prior, spec, 0.0, var, {-0.5 / var}, options, pass);
    }
    if (f.constraints == "posterior" || f.constraints == "both") {
        maxent::ConstraintSpec spec;
        spec.first_moment(mean).second_central_moment(0.0, var + mean * mean);
        j["posterior"] = maxent_case(prior, spec, mean, var, {mean / var, -0.5 / var}, options, pass);
    }
    if (f.constraints == "none") {
        const auto sol = maxent::solve_maxent(prior, {}, options);
        const double diff = max_abs_difference(sol.density, prior);
        j["none"] = {{"max_abs_difference_from_prior", diff}, {"prior_echoed", diff == 0.0}};
        pass = diff == 0.0;
    }
    j["pass"] = pass;
    out << format_json(j) << '\n';
    return pass ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------- config file

std::string config_path_from(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    return path;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find('"' + key + '"');
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

// Flag tokens for the keys of a flat JSON config that belong to `selected`. Keys
// owned by another command are skipped so one file can serve several commands.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App& root, const CLI::App& selected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config " + path + ": top level must be a JSON object");

    std::vector<std::string> tokens;
    for (const auto& [raw_key, value] : j.items()) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string where =
            "config " + path + " line " + std::to_string(line_of_key(text, raw_key)) + ", key '" + raw_key + "'";
        if (key == "config") throw UsageError(where + ": nested config files are not supported");
        const std::string flag = "--" + key;
        if (selected.get_option_no_throw(flag) == nullptr) {
            bool known = false;
            for (const auto* sub : root.get_subcommands([](const CLI::App*) { return true; })) {
                known = known || sub->get_option_no_throw(flag) != nullptr;
            }
            if (!known) throw UsageError(where + ": unknown key");
            continue;
        }
        std::string v;
        if (value.is_null()) continue;
        if (value.is_boolean()) v = value.get<bool>() ? "true" : "false";
        else if (value.is_number()) v = format_json(value);
        else if (value.is_string()) v = value.get<std::string>();
        else throw UsageError(where + ": expected a number, string or boolean");
        tokens.push_back(flag + "=" + v);
    }
    return tokens;
}

const CLI::App* selected_command(const CLI::App& root, const std::vector<std::string>& args, std::size_t& index) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            ++i;
            continue;
        }
        if (!args[i].empty() && args[i][0] == '-') continue;
        if (const auto* sub = root.get_subcommand_no_throw(args[i])) {
            index = i;
            return sub;
        }
        return nullptr;
    }
    return nullptr;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exchange-rate dynamics, density evolution, maximum-entropy checks and FX option pricing.",
                 "entropic-fx"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "JSON object whose keys mirror flag names; flags take precedence");

    PriceFlags pf;
    auto* price = app.add_subcommand("price", "Price a European call or put; JSON to stdout");
    add_market_flags(*price, pf.market);
    price->add_option("--kind", pf.kind, "call or put")->check(CLI::IsMember({"call", "put"}));
    price->add_option("--strike", pf.strike, "strike K, domestic per foreign");
    price->add_option("--expiry", pf.expiry, "time to expiry in years");
    price->add_option("--method", pf.method, "closed_form, quadrature, monte_carlo, pde or all")
        ->check(CLI::IsMember({"closed_form", "quadrature", "monte_carlo", "pde", "all"}));
    price->add_option("--n-paths", pf.n_paths, "Monte Carlo paths");
    price->add_option("--seed", pf.seed, "Monte Carlo seed");
    price->add_flag("--antithetic", pf.antithetic, "antithetic Monte Carlo pairs");
    price->add_option("--mc-steps", pf.mc_steps, "Monte Carlo time steps; 0 or 1 draws the terminal rate exactly");
    price->add_option("--tol", pf.tol, "quadrature absolute tolerance");
    price->add_option("--n-points", pf.n_points, "PDE grid points");
    price->add_option("--time-steps", pf.time_steps, "PDE time steps");
    add_threads_flag(*price, pf.threads);

    ParityFlags yf;
    auto* parity = app.add_subcommand("parity", "Put-call parity residual; exit 1 when out of bound");
    add_market_flags(*parity, yf.market);
    parity->add_option("--strike", yf.strike, "strike K");
    parity->add_option("--expiry", yf.expiry, "time to expiry in years");
    parity->add_option("--sweep", yf.sweep, "check this many random tuples instead of one");
    parity->add_option("--seed", yf.seed, "sweep seed");

    SimulateFlags sf;
    auto* simulate = app.add_subcommand("simulate", "Simulate exchange-rate paths; CSV output");
    add_market_flags(*simulate, sf.market);
    simulate->add_option("--horizon", sf.horizon, "simulation horizon in years");
    simulate->add_option("--n-steps", sf.n_steps, "time steps per path");
    simulate->add_option("--n-paths", sf.n_paths, "number of paths");
    simulate->add_option("--seed", sf.seed, "random seed");
    simulate->add_option("--scale", sf.scale, "log (ln u) or rate (u)")->check(CLI::IsMember({"log", "rate"}));
    simulate->add_option("--output", sf.output, "CSV path, - for stdout");
    add_threads_flag(*simulate, sf.threads);

    FokkerPlanckFlags ff;
    ff.market.sigma = 0.2;
    auto* fp = app.add_subcommand("fokker-planck", "Evolve a log-rate density; CSV plus an error report");
    add_market_flags(*fp, ff.market);
    fp->add_option("--t", ff.t, "evolution time in years");
    fp->add_option("--initial-variance", ff.initial_variance, "variance of the initial Gaussian at ln u0; 0 for a point mass");
    fp->add_option("--n-points", ff.n_points, "grid points");
    fp->add_option("--x-min", ff.x_min, "lower log-rate bound (default: mean - 10 sd)");
    fp->add_option("--x-max", ff.x_max, "upper log-rate bound (default: mean + 10 sd)");
    fp->add_option("--dt-step", ff.dt_step, "time step (default: t / 1000)");
    fp->add_option("--output", ff.output, "density CSV path, - for stdout");
    fp->add_option("--report", ff.report, "report JSON path; - means stdout, or stderr when the CSV is on stdout");

    MaxentFlags mf;
    auto* me = app.add_subcommand("maxent-check", "Solve the discrete maximum-entropy problems against their Gaussian closed forms");
    me->add_option("--sigma", mf.sigma, "volatility");
    me->add_option("--dt", mf.dt, "time step");
    me->add_option("--mu-d", mf.mu_d, "domestic drift");
    me->add_option("--mu-f", mf.mu_f, "foreign drift");
    me->add_option("--spacing", mf.h, "grid spacing");
    me->add_option("--extent", mf.extent, "grid half-width in standard deviations");
    me->add_option("--variance-target", mf.variance_target, "variance constraint (default: sigma^2 dt)");
    me->add_option("--mean-target", mf.mean_target, "mean constraint (default: (mu_d - mu_f - sigma^2/2) dt)");
    me->add_option("--constraints", mf.constraints, "both, prior, posterior or none")
        ->check(CLI::IsMember({"both", "prior", "posterior", "none"}));
    me->add_option("--tol", mf.tol, "residual tolerance");
    me->add_option("--max-iter", mf.max_iter, "Newton iteration budget");

    const auto fail = [&](std::string_view kind, const std::string& message, int code) {
        Json j;
        j["error"] = kind;
        j["message"] = message;
        j["exit_code"] = code;
        err << format_json(j) << '\n';
        return code;
    };

    try {
        std::vector<std::string> tokens = args;
        const std::string path = config_path_from(args);
        std::size_t index = 0;
        if (const auto* sub = selected_command(app, args, index); sub != nullptr && !path.empty()) {
            const auto extra = config_tokens(path, app, *sub);
            tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(index) + 1, extra.begin(), extra.end());
        }
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);

        if (price->parsed()) return cmd_price(*price, pf, out);
        if (parity->parsed()) return cmd_parity(*parity, yf, out);
        if (simulate->parsed()) return cmd_simulate(*simulate, sf, out);
        if (fp->parsed()) return cmd_fokker_planck(*fp, ff, out, err);
        if (me->parsed()) return cmd_maxent_check(*me, mf, out);
        return fail("UsageError", "no command given", exit_usage_error);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        return fail("UsageError", e.what(), exit_usage_error);
    } catch (const UsageError& e) {
        return fail("UsageError", e.what(), exit_usage_error);
    } catch (const Error& e) {
        return fail(to_string(e.code()), e.what(), e.is_numerical() ? exit_numerical_error : exit_usage_error);
    } catch (const std::exception& e) {
        return fail("InternalError", e.what(), exit_internal_error);
    }
}

}  // namespace efx::cli
