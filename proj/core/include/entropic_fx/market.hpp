#pragma once

#include <string_view>

namespace efx {

/// Which drifts the parameters carry: the physical mu_d, mu_f or the risk-free r_d, r_f.
enum class Measure { physical, risk_neutral };

std::string_view to_string(Measure m) noexcept;

/// Spot exchange rate u0 (domestic per foreign) and the constant coefficients of its dynamics.
struct MarketParams {
    double u0 = 1.0;
    double drift_d = 0.0;
    double drift_f = 0.0;
    double sigma = 0.0;
    Measure measure = Measure::risk_neutral;

    static MarketParams risk_neutral(double u0, double r_d, double r_f, double sigma) {
        return {u0, r_d, r_f, sigma, Measure::risk_neutral};
    }
    static MarketParams physical(double u0, double mu_d, double mu_f, double sigma) {
        return {u0, mu_d, mu_f, sigma, Measure::physical};
    }

    /// Drift of ln u per unit time: drift_d - drift_f - sigma^2 / 2.
    double log_drift() const noexcept { return drift_d - drift_f - 0.5 * sigma * sigma; }

    /// Throws DomainError unless u0 > 0, sigma > 0 and the drifts are finite.
    void validate() const;
};

}  // namespace efx
