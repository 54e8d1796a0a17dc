#include "entropic_fx/density_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "entropic_fx/error.hpp"

namespace efx {

using detail::require;

UniformGrid UniformGrid::from_bounds(double x_min, double x_max, std::size_t n) {
    require(n >= 2, ErrorCode::DomainError, "grid needs at least two points");
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max,
            ErrorCode::DomainError, "grid bounds must be finite with x_min < x_max");
    return from_spacing(x_min, (x_max - x_min) / static_cast<double>(n - 1), n);
}

UniformGrid UniformGrid::from_spacing(double x_min, double spacing, std::size_t n) {
    require(n >= 2, ErrorCode::DomainError, "grid needs at least two points");
    require(std::isfinite(x_min) && std::isfinite(spacing) && spacing > 0.0,
            ErrorCode::DomainError, "grid spacing must be positive and finite");
    UniformGrid g;
    g.x0_ = x_min;
    g.h_ = spacing;
    g.n_ = n;
    return g;
}

UniformGrid UniformGrid::from_points(std::span<const double> points) {
    require(points.size() >= 2, ErrorCode::DomainError, "grid needs at least two points");
    const auto n = points.size();
    const double h = (points.back() - points.front()) / static_cast<double>(n - 1);
    require(h > 0.0, ErrorCode::DomainError, "grid points must be increasing");
    for (std::size_t i = 1; i < n; ++i) {
        const double step = points[i] - points[i - 1];
        require(step > 0.0, ErrorCode::DomainError, "grid points must be strictly increasing");
        require(std::abs(step - h) <= 1e-12 * h + 4.0 * std::numeric_limits<double>::epsilon() *
                                                       std::max(std::abs(points[i]), std::abs(points[i - 1])),
                ErrorCode::DomainError, "grid spacing is not uniform");
    }
    return from_spacing(points.front(), h, n);
}

std::vector<double> UniformGrid::points() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
    return out;
}

bool UniformGrid::matches(const UniformGrid& other) const noexcept {
    if (n_ != other.n_) return false;
    const double scale = std::max({std::abs(x0_), std::abs(back()), h_});
    return std::abs(x0_ - other.x0_) <= 1e-12 * scale && std::abs(h_ - other.h_) <= 1e-12 * h_;
}

DensityGrid::DensityGrid(UniformGrid grid, std::vector<double> weights)
    : grid_(grid), weights_(std::move(weights)) {
    require(weights_.size() == grid_.size(), ErrorCode::GridMismatch,
            "weight count differs from grid size");
    for (double w : weights_) {
        require(std::isfinite(w) && w >= 0.0, ErrorCode::DomainError,
                "density weights must be finite and nonnegative");
    }
}

DensityGrid DensityGrid::sample(const UniformGrid& grid, const std::function<double(double)>& pdf) {
    std::vector<double> w(grid.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = pdf(grid[i]);
    return {grid, std::move(w)};
}

DensityGrid DensityGrid::gaussian(const UniformGrid& grid, double mean, double variance) {
    require(variance > 0.0, ErrorCode::DomainError, "Gaussian variance must be positive");
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance);
    auto d = sample(grid, [&](double x) {
        const double z = x - mean;
        return norm * std::exp(-0.5 * z * z / variance);
    });
    d.normalize();
    return d;
}

DensityGrid DensityGrid::uniform(const UniformGrid& grid) {
    DensityGrid d(grid, std::vector<double>(grid.size(), 1.0));
    d.normalize();
    return d;
}

double DensityGrid::mass() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) s += grid_.trapezoid_weight(i) * weights_[i];
    return s;
}

double DensityGrid::expectation(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] != 0.0) s += grid_.trapezoid_weight(i) * weights_[i] * f(grid_[i]);
    }
    return s / mass();
}

double DensityGrid::mean() const {
    return expectation([](double x) { return x; });
}

double DensityGrid::variance() const {
    const double m = mean();
    return expectation([m](double x) { return (x - m) * (x - m); });
}

DensityGrid& DensityGrid::normalize() {
    const double m = mass();
    require(m > 0.0 && std::isfinite(m), ErrorCode::DomainError, "cannot normalize a density with zero mass");
    for (double& w : weights_) w /= m;
    return *this;
}

double DensityGrid::mass_between(double lo, double hi) const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
        const double a = grid_[i];
        const double b = grid_[i + 1];
        if (a >= lo && b <= hi) s += 0.5 * grid_.spacing() * (weights_[i] + weights_[i + 1]);
    }
    return s;
}

namespace {

void require_same_grid(const DensityGrid& a, const DensityGrid& b) {
    require(a.grid().matches(b.grid()), ErrorCode::GridMismatch, "densities live on different grids");
}

}  // namespace

double l1_distance(const DensityGrid& a, const DensityGrid& b) {
    require_same_grid(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.grid().trapezoid_weight(i) * std::abs(a[i] - b[i]);
    return s;
}

double max_abs_difference(const DensityGrid& a, const DensityGrid& b) {
    require_same_grid(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace efx
