#include "entropic_fx/normal.hpp"

#include <cmath>
#include <limits>

namespace efx {

double std_normal_cdf(double x) noexcept {
    constexpr double inv_sqrt2 = 0.7071067811865475244008443621048490392848;
    if (x < 0.0) return 0.5 * std::erfc(-x * inv_sqrt2);
    return 1.0 - 0.5 * std::erfc(x * inv_sqrt2);
}

double std_normal_pdf(double x) noexcept {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343818684759;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double mills_ratio(double x) noexcept {
    if (x < 2.5) return std_normal_cdf(-x) / std_normal_pdf(x);
    // 1 / (x + 1 / (x + 2 / (x + 3 / (x + ...)))) by the modified Lentz method.
    constexpr double tiny = 1e-300;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double f = tiny, c = tiny, d = 0.0;
    for (int j = 1; j < 200; ++j) {
        const double a = j == 1 ? 1.0 : static_cast<double>(j - 1);
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 0.5 * eps) break;
    }
    return f;
}

}  // namespace efx
