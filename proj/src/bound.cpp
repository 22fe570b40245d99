#include "odecert/bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odecert {

namespace {

constexpr double kMuZero = 1e-12;  // below this the mu -> 0 limit applies

// phi advanced from phi_a at the left end of an interval with residual level
// d, evaluated after elapsed time s >= 0: solution of phi' = mu phi + d.
double phi_advance(double phi_a, double d, double mu, double s) {
    if (std::fabs(mu) <= kMuZero) return phi_a + d * s;
    const double r = d / mu;
    return (phi_a + r) * std::exp(mu * s) - r;
}

}  // namespace

SpectralFrame spectral_frame(const LinearOdeProblem& p) {
    SpectralFrame f;
    f.a0 = eval_A(p, p.t0);
    f.eig = real_eigen(f.a0);
    f.norm_p = inf_norm(f.eig.p);
    f.n = p.n;
    return f;
}

double compute_hmax(const LinearOdeProblem& p, const SpectralFrame& f,
                    std::size_t grid_points) {
    if (grid_points < 2) throw InvalidProblem("h_max grid needs at least 2 points");
    double hm = 0.0;
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double t = p.t0 + (p.tm - p.t0) *
                                    (static_cast<double>(k) / (grid_points - 1));
        const Matrix dev = f.eig.p_inv * (eval_A(p, t) - f.a0) * f.eig.p;
        for (std::size_t i = 0; i < dev.rows(); ++i)
            for (std::size_t j = 0; j < dev.cols(); ++j)
                hm = std::max(hm, std::fabs(dev(i, j)));
    }
    return hm;
}

double bound_envelope_global(const SpectralFrame& f, double h_max, double delta_max,
                             double t, double t0) {
    const double mu = f.eig.lambdas.front() + static_cast<double>(f.n) * h_max;
    return f.norm_p * phi_advance(0.0, delta_max, mu, t - t0);
}

BoundReport bound_report_global(const SpectralFrame& f, double h_max, double delta_max,
                                double t0, const std::vector<double>& grid) {
    BoundReport r;
    r.mu = f.eig.lambdas.front() + static_cast<double>(f.n) * h_max;
    r.h_max = h_max;
    r.delta_global = delta_max;
    r.grid = grid;
    r.envelope.reserve(grid.size());
    for (double t : grid)
        r.envelope.push_back(f.norm_p * phi_advance(0.0, delta_max, r.mu, t - t0));
    r.mode = BoundMode::Global;
    return r;
}

BoundReport bound_envelope_stepwise(const SpectralFrame& f, double h_max,
                                    const ResidualProfile& profile,
                                    const Trajectory& traj,
                                    const std::vector<double>& grid) {
    const std::size_t m = traj.intervals();
    if (profile.per_step_transformed.size() != m)
        throw InvalidProblem("residual profile does not align with the trajectory intervals");
    const double t0 = traj.nodes.front();
    const double tm = traj.nodes.back();
    const double slack = 1e-12 * (tm - t0);

    BoundReport r;
    r.mu = f.eig.lambdas.front() + static_cast<double>(f.n) * h_max;
    r.h_max = h_max;
    r.delta_steps = profile.per_step_transformed;
    r.delta_global = profile.global_max_transformed;
    r.mode = BoundMode::Stepwise;
    r.grid = grid;

    // phi at every trajectory node, by the interval recursion
    std::vector<double> phi_nodes(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        phi_nodes[i + 1] =
            phi_advance(phi_nodes[i], r.delta_steps[i], r.mu, traj.step(i));

    r.envelope.reserve(grid.size());
    for (double t : grid) {
        if (t < t0 - slack || t > tm + slack)
            throw GridOutsideDomain("bound grid point " + std::to_string(t) +
                                    " outside [t0, tm]");
        const double tc = std::clamp(t, t0, tm);
        auto it = std::upper_bound(traj.nodes.begin(), traj.nodes.end(), tc);
        std::size_t i = static_cast<std::size_t>(it - traj.nodes.begin());
        i = (i == 0) ? 0 : i - 1;
        if (i >= m) i = m - 1;
        r.envelope.push_back(
            f.norm_p *
            phi_advance(phi_nodes[i], r.delta_steps[i], r.mu, tc - traj.nodes[i]));
    }
    return r;
}

std::vector<Vector> forward_error_oracle(const LinearOdeProblem& p, const HermiteSpline& s,
                                         const IntegratorConfig& cfg,
                                         const std::vector<double>& times) {
    LinearOdeProblem ep;
    ep.name = p.name + "-fwderr";
    ep.n = p.n;
    ep.a = p.a;
    ep.x0 = Vector(p.n, 0.0);
    ep.t0 = p.t0;
    ep.tm = p.tm;
    const LinearOdeProblem base = p;
    const HermiteSpline spline = s;
    ep.q_fn = [base, spline](double t) {
        Vector d = residual_at(spline, base, t);
        for (double& v : d) v = -v;
        return d;
    };
    return dp45_states_at(ep, cfg, times);
}

}  // namespace odecert
