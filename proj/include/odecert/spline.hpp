#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "odecert/integrate.hpp"

namespace odecert {

/// C1 piecewise Hermite cubic through a Trajectory: on interval i the local
/// cubic (per component) is c0 + c1 s + c2 s^2 + c3 s^3 with s = t - t_i.
/// Matching values and first derivatives at both ends makes it the unique
/// such interpolant.
class HermiteSpline {
public:
    /// Fits one cubic per interval per component:
    ///   c0 = x_i,  c1 = x'_i,
    ///   c2 = 3 (x_{i+1} - x_i) / h^2 - (x'_{i+1} + 2 x'_i) / h,
    ///   c3 = (x'_{i+1} + x'_i) / h^2 - 2 (x_{i+1} - x_i) / h^3.
    /// Requires at least 2 intervals.
    static HermiteSpline fit(const Trajectory& traj);

    /// Value at t; the interval is found by binary search, with interior
    /// knots owned by the interval to their right. Throws OutOfDomain when t
    /// lies outside [t0, tm] by more than 1e-12 of the span.
    Vector eval(double t) const;
    /// Analytic derivative c1 + 2 c2 s + 3 c3 s^2 of the same local cubic.
    Vector eval_deriv(double t) const;

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    std::size_t dimension() const { return dim_; }
    std::size_t intervals() const { return breakpoints_.size() - 1; }
    /// Coefficients (c0,c1,c2,c3) for interval i, component j.
    std::array<double, 4> coeffs(std::size_t i, std::size_t j) const;

    double t_begin() const { return breakpoints_.front(); }
    double t_end() const { return breakpoints_.back(); }

private:
    std::size_t locate(double t) const;

    std::vector<double> breakpoints_;
    std::size_t dim_ = 0;
    // coeff_[i * dim_ + j] holds the quadruple for interval i, component j
    std::vector<std::array<double, 4>> coeff_;
};

/// Interpolation error bound h^4 m4 / 384 for a C1 Hermite cubic on meshes
/// of width h when the interpolated function has |f''''| <= m4.
double hermite_error_bound(double h, double m4);

}  // namespace odecert
