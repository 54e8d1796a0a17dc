#include <cmath>
#include <string>

#include <json.hpp>

#include "entropic_fx/error.hpp"
#include "entropic_fx/pricing.hpp"
#include "format.hpp"

namespace efx::pricing {

namespace {

std::string number_or_null(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return "null";
    return detail::format_double(*v);
}

}  // namespace

std::string to_json(const PriceResult& result) {
    std::string out = "{\"premium\": " + number_or_null(result.premium);
    out += ", \"method\": \"" + std::string(to_string(result.method)) + "\"";
    out += ", \"std_error\": " + number_or_null(result.std_error);
    out += ", \"d1\": " + number_or_null(result.diagnostic("d1"));
    out += ", \"d2\": " + number_or_null(result.diagnostic("d2"));
    for (const auto& [key, value] : result.diagnostics) {
        if (key == "d1" || key == "d2") continue;
        out += ", \"" + key + "\": " + number_or_null(value);
    }
    out += "}";
    return out;
}

PriceResult price_result_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        detail::fail(ErrorCode::DomainError, std::string("price result is not valid JSON: ") + e.what());
    }
    detail::require(j.is_object(), ErrorCode::DomainError, "price result must be a JSON object");
    detail::require(j.contains("premium") && j["premium"].is_number(), ErrorCode::DomainError,
                    "price result needs a numeric premium");
    detail::require(j.contains("method") && j["method"].is_string(), ErrorCode::DomainError,
                    "price result needs a method string");

    PriceResult r;
    r.premium = j["premium"].get<double>();
    const auto method = parse_method(j["method"].get<std::string>());
    detail::require(method.has_value(), ErrorCode::DomainError, "unknown pricing method");
    r.method = *method;
    for (const auto& [key, value] : j.items()) {
        if (key == "premium" || key == "method") continue;
        if (value.is_null()) continue;
        detail::require(value.is_number(), ErrorCode::DomainError, "price result fields must be numbers or null");
        if (key == "std_error") r.std_error = value.get<double>();
        else r.diagnostics[key] = value.get<double>();
    }
    return r;
}

}  // namespace efx::pricing
