#pragma once

#include <string>

#include <json.hpp>

namespace efx::cli {

using Json = nlohmann::ordered_json;

/// Single-line JSON with every floating-point number at 17 significant digits
/// and non-finite numbers written as null.
std::string format_json(const Json& j);

}  // namespace efx::cli
