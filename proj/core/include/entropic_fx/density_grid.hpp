#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace efx {

/// Uniformly spaced coordinates over log exchange rate.
class UniformGrid {
public:
    UniformGrid() = default;

    /// n points from x_min to x_max inclusive. Requires n >= 2 and x_min < x_max.
    static UniformGrid from_bounds(double x_min, double x_max, std::size_t n);

    /// n points starting at x_min with the given spacing.
    static UniformGrid from_spacing(double x_min, double spacing, std::size_t n);

    /// Validates that the points are strictly increasing with constant spacing
    /// (relative deviation below 1e-12) and adopts them.
    static UniformGrid from_points(std::span<const double> points);

    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double front() const noexcept { return x0_; }
    double back() const noexcept { return x0_ + h_ * static_cast<double>(n_ - 1); }
    double operator[](std::size_t i) const noexcept { return x0_ + h_ * static_cast<double>(i); }

    std::vector<double> points() const;

    /// Same grid translated by `offset`.
    UniformGrid shifted(double offset) const { return from_spacing(x0_ + offset, h_, n_); }

    /// Trapezoidal quadrature weight of node i.
    double trapezoid_weight(std::size_t i) const noexcept {
        return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_;
    }

    /// Exact equality of origin, spacing, and size up to 1e-12 relative.
    bool matches(const UniformGrid& other) const noexcept;

private:
    double x0_ = 0.0;
    double h_ = 1.0;
    std::size_t n_ = 0;
};

/// Probability density sampled on a uniform log-rate grid.
///
/// Weights are densities per unit log-rate, not cell masses. Moments and mass
/// are computed with the trapezoidal rule.
class DensityGrid {
public:
    DensityGrid() = default;
    DensityGrid(UniformGrid grid, std::vector<double> weights);

    /// Samples `pdf` at every node. The result is not normalized.
    static DensityGrid sample(const UniformGrid& grid, const std::function<double(double)>& pdf);

    /// Normalized Gaussian density with the given mean and variance.
    static DensityGrid gaussian(const UniformGrid& grid, double mean, double variance);

    /// Normalized constant density.
    static DensityGrid uniform(const UniformGrid& grid);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::vector<double>& mutable_weights() noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double point(std::size_t i) const noexcept { return grid_[i]; }
    double operator[](std::size_t i) const noexcept { return weights_[i]; }

    double mass() const noexcept;
    double expectation(const std::function<double(double)>& f) const;
    double mean() const;
    double variance() const;

    /// Rescales so the trapezoidal mass is 1. Throws DomainError on zero mass.
    DensityGrid& normalize();

    /// Mass on [lo, hi] by trapezoid over nodes inside the interval.
    double mass_between(double lo, double hi) const;

    /// Same density expressed over the grid translated by `offset`.
    DensityGrid shifted(double offset) const { return {grid_.shifted(offset), weights_}; }

private:
    UniformGrid grid_;
    std::vector<double> weights_;
};

/// Trapezoidal L1 distance. Throws GridMismatch if the grids differ.
double l1_distance(const DensityGrid& a, const DensityGrid& b);

/// Largest absolute pointwise difference. Throws GridMismatch if the grids differ.
double max_abs_difference(const DensityGrid& a, const DensityGrid& b);

}  // namespace efx
