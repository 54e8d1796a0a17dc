#include "json_out.hpp"

#include <cmath>
#include <cstdio>

namespace efx::cli {

namespace {

void append(std::string& out, const Json& j) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ", ";
                first = false;
                out += Json(key).dump();
                out += ": ";
                append(out, value);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) out += ", ";
                append(out, j[i]);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                break;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            break;
        }
        default: out += j.dump();
    }
}

}  // namespace

std::string format_json(const Json& j) {
    std::string out;
    append(out, j);
    return out;
}

}  // namespace efx::cli
