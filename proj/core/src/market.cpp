#include "entropic_fx/market.hpp"

#include <cmath>

#include "entropic_fx/error.hpp"

namespace efx {

std::string_view to_string(Measure m) noexcept {
    return m == Measure::physical ? "physical" : "risk_neutral";
}

void MarketParams::validate() const {
    using detail::require;
    require(std::isfinite(u0) && u0 > 0.0, ErrorCode::DomainError, "u0 must be positive");
    require(std::isfinite(sigma) && sigma > 0.0, ErrorCode::DomainError, "sigma must be positive");
    require(std::isfinite(drift_d) && std::isfinite(drift_f), ErrorCode::DomainError, "drifts must be finite");
}

}  // namespace efx
