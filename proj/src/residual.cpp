#include "odecert/residual.hpp"

#include <algorithm>
#include <cmath>

namespace odecert {

Vector residual_at(const HermiteSpline& s, const LinearOdeProblem& p, double t) {
    Vector d = s.eval_deriv(t);
    const Vector x = s.eval(t);
    const Matrix a = eval_A(p, t);
    const Vector q = eval_q(p, t);
    const Vector ax = a * x;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= ax[i] + q[i];
    return d;
}

ResidualProfile profile(const HermiteSpline& s, const LinearOdeProblem& p,
                        const std::optional<EigenDecomposition>& frame,
                        std::size_t samples_per_step) {
    if (samples_per_step < 3)
        throw InvalidProblem("residual sampling needs at least 3 samples per step");
    const std::size_t m = s.intervals();
    ResidualProfile prof;
    prof.samples_per_step = samples_per_step;
    prof.per_step_original.assign(m, 0.0);
    if (frame) prof.per_step_transformed.assign(m, 0.0);
    const auto& bp = s.breakpoints();
    for (std::size_t i = 0; i < m; ++i) {
        const double a = bp[i];
        const double b = bp[i + 1];
        double mo = 0.0, mt = 0.0;
        for (std::size_t k = 0; k <= samples_per_step; ++k) {
            // endpoints included; interior points never leave [a, b]
            const double t =
                (k == samples_per_step)
                    ? b
                    : a + (b - a) * (static_cast<double>(k) / samples_per_step);
            const Vector d = residual_at(s, p, t);
            mo = std::max(mo, inf_norm(d));
            if (frame) {
                const Vector td = frame->p_inv * d;
                mt = std::max(mt, inf_norm(td));
            }
        }
        prof.per_step_original[i] = mo;
        prof.global_max_original = std::max(prof.global_max_original, mo);
        if (frame) {
            prof.per_step_transformed[i] = mt;
            prof.global_max_transformed = std::max(prof.global_max_transformed, mt);
        }
    }
    return prof;
}

}  // namespace odecert
