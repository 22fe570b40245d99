#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "odecert/linalg.hpp"
#include "odecert/problem.hpp"
#include "odecert/spline.hpp"

namespace odecert {

class HermiteSpline;

/// Per-interval residual maxima. Transformed statistics (through P^-1) are
/// present only when a frame was supplied to profile().
struct ResidualProfile {
    std::vector<double> per_step_original;     // max ||delta(t)||_inf per interval
    std::vector<double> per_step_transformed;  // max |(P^-1 delta)_j|, empty without frame
    std::size_t samples_per_step = 0;
    double global_max_original = 0.0;
    double global_max_transformed = 0.0;
};

/// delta(t) = xtilde'(t) - A(t) xtilde(t) - q(t). Zero at trajectory nodes
/// whenever node derivatives equal f there. Throws OutOfDomain.
Vector residual_at(const HermiteSpline& s, const LinearOdeProblem& p, double t);

/// Samples delta on samples_per_step+1 equispaced points per interval
/// (endpoints included) and records per-interval maxima, both plain and
/// transformed by P^-1 when a frame is given. Maxima are of absolute values:
/// the growth bound needs magnitudes, and |.| dominates the signed maxima.
ResidualProfile profile(const HermiteSpline& s, const LinearOdeProblem& p,
                        const std::optional<EigenDecomposition>& frame,
                        std::size_t samples_per_step);

}  // namespace odecert
