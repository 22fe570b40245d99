#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "odecert/problem.hpp"

namespace odecert {

/// Discrete numerical solution: nodes t0 = t_0 < ... < t_m = tm with values
/// x_k and derivatives x'_k. Integrators construct derivs as
/// eval_f(t_k, x_k) bitwise; external tables may supply their own.
struct Trajectory {
    std::vector<double> nodes;
    std::vector<Vector> values;
    std::vector<Vector> derivs;
    bool derivs_supplied = false;  // true when derivs came from an input table

    std::size_t intervals() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double step(std::size_t i) const { return nodes[i + 1] - nodes[i]; }
};

struct IntegratorConfig {
    double rtol = 1e-6;
    double atol = 1e-9;
    double h_init = 0.0;           // 0 means automatic
    double h_max_step = 0.0;       // 0 means unbounded
    std::size_t max_steps = 100000;
};

/// Adaptive Dormand-Prince 5(4) with FSAL. Error per step is controlled
/// against atol + rtol * ||x||_inf, step ratios use safety 0.9 clamped to
/// [0.2, 5], and the final step is clipped to land exactly on tm.
/// Throws StepSizeUnderflow, MaxStepsExceeded, NonFiniteState.
Trajectory integrate_dp45(const LinearOdeProblem& p, const IntegratorConfig& cfg);

/// Classical fixed-step RK4 on a uniform mesh (last step clipped to tm).
/// Throws NonFiniteState, InvalidProblem when fewer than 2 steps fit.
Trajectory integrate_rk4_fixed(const LinearOdeProblem& p, double h);

/// One row of an externally supplied solution table.
struct TableRow {
    double t = 0.0;
    Vector x;
    std::optional<Vector> xp;
};

/// Wraps external solver output as a Trajectory covering [p.t0, p.tm].
/// Missing derivatives are recomputed as eval_f(t_k, x_k); supplied ones are
/// kept and flagged. Throws NonMonotoneTime, DimensionMismatch,
/// InvalidTrajectory (fewer than 3 rows, wrong span, or first row != x0).
Trajectory trajectory_from_table(const std::vector<TableRow>& rows,
                                 const LinearOdeProblem& p);

/// CSV with header t,x1..xn[,dx1..dxn], 17 significant digits.
std::string trajectory_to_csv(const Trajectory& traj);
/// Parses the same CSV shape into table rows. Throws InvalidTrajectory on
/// malformed input.
std::vector<TableRow> table_rows_from_csv(const std::string& text);

/// Dense evaluation helper used by reference-solution oracles: integrates
/// with dp45 and records the state at each requested time (times must be
/// increasing, within [t0, tm]). Nodes of the result are exactly `times`.
std::vector<Vector> dp45_states_at(const LinearOdeProblem& p,
                                   const IntegratorConfig& cfg,
                                   const std::vector<double>& times);

}  // namespace odecert
