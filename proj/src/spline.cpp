#include "odecert/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odecert {

HermiteSpline HermiteSpline::fit(const Trajectory& traj) {
    const std::size_t m = traj.intervals();
    if (m < 2)
        throw InvalidTrajectory("spline needs at least 2 intervals, got " + std::to_string(m));
    if (traj.values.size() != m + 1 || traj.derivs.size() != m + 1)
        throw InvalidTrajectory("trajectory values/derivs do not match node count");
    HermiteSpline s;
    s.breakpoints_ = traj.nodes;
    s.dim_ = traj.values.front().size();
    s.coeff_.resize(m * s.dim_);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = traj.step(i);
        if (!(h > 0.0)) throw NonMonotoneTime("trajectory nodes must strictly increase");
        for (std::size_t j = 0; j < s.dim_; ++j) {
            const double f0 = traj.values[i][j];
            const double f1 = traj.values[i + 1][j];
            const double d0 = traj.derivs[i][j];
            const double d1 = traj.derivs[i + 1][j];
            const double df = f1 - f0;
            s.coeff_[i * s.dim_ + j] = {
                f0,
                d0,
                3.0 * df / (h * h) - (d1 + 2.0 * d0) / h,
                (d1 + d0) / (h * h) - 2.0 * df / (h * h * h),
            };
        }
    }
    return s;
}

std::size_t HermiteSpline::locate(double t) const {
    const double t0 = breakpoints_.front();
    const double tm = breakpoints_.back();
    const double slack = 1e-12 * (tm - t0);
    if (t < t0 - slack || t > tm + slack)
        throw OutOfDomain("t=" + std::to_string(t) + " outside [" + std::to_string(t0) +
                          ", " + std::to_string(tm) + "]");
    // right-interval rule: knot t_i belongs to [t_i, t_i+1); tm to the last
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
    if (idx == 0) return 0;
    if (idx > intervals()) return intervals() - 1;
    return idx - 1;
}

Vector HermiteSpline::eval(double t) const {
    const std::size_t i = locate(t);
    const double s = t - breakpoints_[i];
    Vector out(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        const auto& c = coeff_[i * dim_ + j];
        out[j] = c[0] + s * (c[1] + s * (c[2] + s * c[3]));
    }
    return out;
}

Vector HermiteSpline::eval_deriv(double t) const {
    const std::size_t i = locate(t);
    const double s = t - breakpoints_[i];
    Vector out(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        const auto& c = coeff_[i * dim_ + j];
        out[j] = c[1] + s * (2.0 * c[2] + s * 3.0 * c[3]);
    }
    return out;
}

std::array<double, 4> HermiteSpline::coeffs(std::size_t i, std::size_t j) const {
    return coeff_.at(i * dim_ + j);
}

double hermite_error_bound(double h, double m4) { return h * h * h * h * m4 / 384.0; }

}  // namespace odecert
