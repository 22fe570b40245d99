#include "odecert/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace odecert {

namespace {

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dormand-Prince 5(4) tableau. b holds the 5th-order weights (also row 7 of
// a, giving the FSAL property); e holds b5 - b4 for the embedded estimate.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kE[7] = {71.0 / 57600,  0.0,        -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Adaptive DP45 core. When targets is non-empty every target time becomes a
// node (steps are clipped to the next one); tm is always the final node.
Trajectory dp45_core(const LinearOdeProblem& p, const IntegratorConfig& cfg,
                     const std::vector<double>& targets) {
    if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
        throw InvalidProblem(p.name + ": tolerances must be positive");
    const double span = p.tm - p.t0;
    const double h_floor = 1e-14 * span;

    Vector x = p.x0;
    double t = p.t0;
    Vector k1 = eval_f(p, t, x);
    if (!all_finite(x) || !all_finite(k1))
        throw NonFiniteState(p.name + ": non-finite state at t0");

    Trajectory traj;
    traj.nodes.push_back(t);
    traj.values.push_back(x);
    traj.derivs.push_back(k1);

    // Starting step: 1e-3 of the span, shortened when f is large at t0.
    double h = cfg.h_init;
    if (h <= 0.0) {
        h = span * 1e-3;
        const double d0 = std::max(inf_norm(x), 1e-5);
        const double d1 = inf_norm(k1);
        if (d1 > 1e-12 * d0) h = std::min(h, 0.01 * d0 / d1);
    }
    const double h_cap = (cfg.h_max_step > 0.0) ? std::min(cfg.h_max_step, span / 2.0)
                                                : span / 2.0;
    h = std::min(h, h_cap);

    std::size_t next_target = 0;
    while (next_target < targets.size() && targets[next_target] <= p.t0 + 1e-15 * span)
        ++next_target;

    const std::size_t n = p.n;
    Vector k[7];
    k[0] = k1;
    Vector xs(n), xnew(n), errv(n);
    std::size_t steps = 0;
    while (t < p.tm) {
        if (++steps > cfg.max_steps)
            throw MaxStepsExceeded(p.name + ": exceeded " + std::to_string(cfg.max_steps) +
                                   " steps");
        double stop = p.tm;
        if (next_target < targets.size()) stop = std::min(stop, targets[next_target]);
        bool landing = false;
        // Land when the step reaches the stop, or would leave a sliver
        // smaller than the floor behind.
        if (h >= stop - t || (stop - t) - h < h_floor) {
            h = stop - t;
            landing = true;
        }
        if (h < h_floor)
            throw StepSizeUnderflow(p.name + ": step " + std::to_string(h) +
                                    " below floor at t=" + std::to_string(t));

        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
                xs[i] = x[i] + h * acc;
            }
            k[s] = eval_f(p, t + kC[s] * h, xs);
        }
        // stage 6 state is the 5th-order solution; k[6] = f(t+h, xnew) (FSAL)
        for (std::size_t i = 0; i < n; ++i) {
            xnew[i] = x[i] + h * (kA[6][0] * k[0][i] + kA[6][2] * k[2][i] +
                                  kA[6][3] * k[3][i] + kA[6][4] * k[4][i] +
                                  kA[6][5] * k[5][i]);
        }
        k[6] = eval_f(p, t + h, xnew);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            errv[i] = h * (kE[0] * k[0][i] + kE[2] * k[2][i] + kE[3] * k[3][i] +
                           kE[4] * k[4][i] + kE[5] * k[5][i] + kE[6] * k[6][i]);
            err = std::max(err, std::fabs(errv[i]));
        }
        const double sc = cfg.atol + cfg.rtol * std::max(inf_norm(x), inf_norm(xnew));

        if (std::isfinite(err) && err <= sc && all_finite(xnew) && all_finite(k[6])) {
            t = landing ? stop : t + h;
            x = xnew;
            k[0] = k[6];
            traj.nodes.push_back(t);
            traj.values.push_back(x);
            traj.derivs.push_back(k[0]);
            if (next_target < targets.size() && t >= targets[next_target]) ++next_target;
            double factor = (err > 0.0) ? 0.9 * std::pow(sc / err, 0.2) : 5.0;
            factor = std::clamp(factor, 0.2, 5.0);
            h = std::min(h * factor, h_cap);
        } else {
            double factor = 0.2;
            if (std::isfinite(err) && err > 0.0)
                factor = std::clamp(0.9 * std::pow(sc / err, 0.2), 0.2, 1.0);
            h *= factor;
        }
    }
    if (traj.intervals() < 2)
        throw InvalidProblem(p.name + ": trajectory needs at least 2 intervals");
    return traj;
}

}  // namespace

Trajectory integrate_dp45(const LinearOdeProblem& p, const IntegratorConfig& cfg) {
    return dp45_core(p, cfg, {});
}

Trajectory integrate_rk4_fixed(const LinearOdeProblem& p, double h) {
    const double span = p.tm - p.t0;
    if (!(h > 0.0) || span / h < 2.0)
        throw InvalidProblem(p.name + ": fixed step must fit at least twice into the interval");
    const std::size_t m = static_cast<std::size_t>(std::ceil(span / h - 1e-9));

    Trajectory traj;
    Vector x = p.x0;
    double t = p.t0;
    Vector k1 = eval_f(p, t, x);
    traj.nodes.push_back(t);
    traj.values.push_back(x);
    traj.derivs.push_back(k1);

    const std::size_t n = p.n;
    Vector xs(n), k2(n), k3(n), k4(n);
    for (std::size_t step = 1; step <= m; ++step) {
        const double tn = (step == m) ? p.tm : p.t0 + static_cast<double>(step) * h;
        const double hs = tn - t;
        for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * hs * k1[i];
        k2 = eval_f(p, t + 0.5 * hs, xs);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + 0.5 * hs * k2[i];
        k3 = eval_f(p, t + 0.5 * hs, xs);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + hs * k3[i];
        k4 = eval_f(p, tn, xs);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = tn;
        k1 = eval_f(p, t, x);
        if (!all_finite(x) || !all_finite(k1))
            throw NonFiniteState(p.name + ": non-finite state at t=" + std::to_string(t));
        traj.nodes.push_back(t);
        traj.values.push_back(x);
        traj.derivs.push_back(k1);
    }
    return traj;
}

Trajectory trajectory_from_table(const std::vector<TableRow>& rows,
                                 const LinearOdeProblem& p) {
    if (rows.size() < 3)
        throw InvalidTrajectory(p.name + ": need at least 3 table rows, got " +
                                std::to_string(rows.size()));
    const double span = p.tm - p.t0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].t > rows[i - 1].t))
            throw NonMonotoneTime("table times must be strictly increasing (row " +
                                  std::to_string(i + 1) + ")");
    std::size_t with_xp = 0;
    for (const TableRow& r : rows) {
        if (r.x.size() != p.n)
            throw DimensionMismatch("table state width " + std::to_string(r.x.size()) +
                                    " does not match problem dimension " +
                                    std::to_string(p.n));
        if (r.xp) {
            if (r.xp->size() != p.n)
                throw DimensionMismatch("table derivative width does not match dimension");
            ++with_xp;
        }
    }
    if (with_xp != 0 && with_xp != rows.size())
        throw InvalidTrajectory(p.name + ": either all rows carry derivatives or none");
    const double ttol = 1e-12 * std::max(1.0, std::fabs(span));
    if (std::fabs(rows.front().t - p.t0) > ttol || std::fabs(rows.back().t - p.tm) > ttol)
        throw InvalidTrajectory(p.name + ": table must span [" + std::to_string(p.t0) +
                                ", " + std::to_string(p.tm) + "]");
    const double xtol = 1e-12 * std::max(1.0, inf_norm(p.x0));
    for (std::size_t i = 0; i < p.n; ++i)
        if (std::fabs(rows.front().x[i] - p.x0[i]) > xtol)
            throw InvalidTrajectory(p.name + ": first table row must equal x0");

    Trajectory traj;
    traj.derivs_supplied = (with_xp == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double t = rows[i].t;
        if (i == 0) t = p.t0;                  // snap endpoints onto the domain
        if (i + 1 == rows.size()) t = p.tm;
        traj.nodes.push_back(t);
        traj.values.push_back(rows[i].x);
        traj.derivs.push_back(traj.derivs_supplied ? *rows[i].xp
                                                   : eval_f(p, t, rows[i].x));
    }
    return traj;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string trajectory_to_csv(const Trajectory& traj) {
    const std::size_t n = traj.values.empty() ? 0 : traj.values.front().size();
    std::string s = "t";
    for (std::size_t j = 1; j <= n; ++j) s += ",x" + std::to_string(j);
    for (std::size_t j = 1; j <= n; ++j) s += ",dx" + std::to_string(j);
    s += "\n";
    for (std::size_t i = 0; i < traj.nodes.size(); ++i) {
        s += fmt17(traj.nodes[i]);
        for (std::size_t j = 0; j < n; ++j) s += "," + fmt17(traj.values[i][j]);
        for (std::size_t j = 0; j < n; ++j) s += "," + fmt17(traj.derivs[i][j]);
        s += "\n";
    }
    return s;
}

std::vector<TableRow> table_rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidTrajectory("empty trajectory file");
    const std::vector<std::string> head = split_csv_line(line);
    if (head.empty() || head[0] != "t")
        throw InvalidTrajectory("trajectory header must start with 't'");
    std::size_t n = 0;
    while (1 + n < head.size() && head[1 + n] == "x" + std::to_string(n + 1)) ++n;
    if (n == 0) throw InvalidTrajectory("trajectory header needs x1..xn columns");
    bool has_dx = false;
    if (head.size() == 1 + n) {
        has_dx = false;
    } else if (head.size() == 1 + 2 * n) {
        has_dx = true;
        for (std::size_t j = 0; j < n; ++j)
            if (head[1 + n + j] != "dx" + std::to_string(j + 1))
                throw InvalidTrajectory("trajectory header has malformed dx columns");
    } else {
        throw InvalidTrajectory("trajectory header has " + std::to_string(head.size()) +
                                " columns; expected 1+n or 1+2n");
    }

    std::vector<TableRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != head.size())
            throw InvalidTrajectory("row " + std::to_string(lineno) +
                                    " has wrong column count");
        TableRow r;
        auto num = [&](const std::string& s) {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0')
                throw InvalidTrajectory("row " + std::to_string(lineno) +
                                        ": bad number '" + s + "'");
            return v;
        };
        r.t = num(cells[0]);
        r.x.resize(n);
        for (std::size_t j = 0; j < n; ++j) r.x[j] = num(cells[1 + j]);
        if (has_dx) {
            Vector xp(n);
            for (std::size_t j = 0; j < n; ++j) xp[j] = num(cells[1 + n + j]);
            r.xp = std::move(xp);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<Vector> dp45_states_at(const LinearOdeProblem& p, const IntegratorConfig& cfg,
                                   const std::vector<double>& times) {
    const double span = p.tm - p.t0;
    const double tol = 1e-12 * std::max(1.0, std::fabs(span));
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < p.t0 - tol || times[i] > p.tm + tol)
            throw GridOutsideDomain("requested time outside [t0, tm]");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw NonMonotoneTime("requested times must be strictly increasing");
    }
    Trajectory traj = dp45_core(p, cfg, times);
    std::vector<Vector> out;
    out.reserve(times.size());
    std::size_t at = 0;
    for (double want : times) {
        while (at < traj.nodes.size() && traj.nodes[at] < want - tol) ++at;
        if (at >= traj.nodes.size() || std::fabs(traj.nodes[at] - want) > tol)
            throw GridOutsideDomain("integration did not land on a requested time");
        out.push_back(traj.values[at]);
    }
    return out;
}

}  // namespace odecert
