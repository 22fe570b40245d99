#include "odecert/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace odecert {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// report grid: equispaced points joined with the trajectory knots, so knot
// rows (where the residual vanishes) always appear in the curve file
std::vector<double> make_grid(double t0, double tm, std::size_t points,
                              const std::vector<double>& knots) {
    if (points < 2) throw InvalidProblem("report grid needs at least 2 points");
    std::vector<double> g;
    g.reserve(points + knots.size());
    for (std::size_t i = 0; i < points; ++i)
        g.push_back(t0 + (tm - t0) * (static_cast<double>(i) / (points - 1)));
    g.insert(g.end(), knots.begin(), knots.end());
    std::sort(g.begin(), g.end());
    const double tol = 1e-12 * (tm - t0);
    std::vector<double> out;
    for (double t : g)
        if (out.empty() || t - out.back() > tol) out.push_back(t);
    if (!out.empty()) out.back() = tm;
    return out;
}

Trajectory example1_table(const LinearOdeProblem& p) {
    std::vector<TableRow> rows;
    for (double t : {0.0, 1.0, 2.0}) {
        TableRow r;
        r.t = t;
        r.x = {std::exp(t)};
        r.xp = Vector{std::exp(t)};
        rows.push_back(std::move(r));
    }
    return trajectory_from_table(rows, p);
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    if (cfg.catalog_name.empty() == cfg.problem_file.empty())
        throw InvalidProblem("exactly one problem source (catalog name or problem file) required");
    LinearOdeProblem p = cfg.catalog_name.empty() ? load_problem_file(cfg.problem_file)
                                                  : catalog(cfg.catalog_name);

    Trajectory traj;
    if (cfg.example1_table)
        traj = example1_table(p);
    else if (!cfg.trajectory_file.empty())
        traj = trajectory_from_table(table_rows_from_csv(read_file(cfg.trajectory_file)), p);
    else
        traj = integrate_dp45(p, cfg.integrator);

    const HermiteSpline s = HermiteSpline::fit(traj);
    const SpectralFrame frame = spectral_frame(p);
    const ResidualProfile prof = profile(s, p, frame.eig, cfg.samples_per_step);
    const double hmax = compute_hmax(p, frame, cfg.hmax_grid);

    ScenarioResult r;
    r.traj = traj;
    r.grid = make_grid(p.t0, p.tm, cfg.report_grid, traj.nodes);

    BoundReport br = (cfg.mode == BoundMode::Global)
                         ? bound_report_global(frame, hmax, prof.global_max_transformed,
                                               p.t0, r.grid)
                         : bound_envelope_stepwise(frame, hmax, prof, traj, r.grid);
    r.bound = br.envelope;

    r.xtilde.reserve(r.grid.size());
    r.delta.reserve(r.grid.size());
    for (double t : r.grid) {
        r.xtilde.push_back(s.eval(t));
        r.delta.push_back(residual_at(s, p, t));
    }

    Certificate& c = r.cert;
    c.problem = p.name;
    c.n = p.n;
    c.t0 = p.t0;
    c.tm = p.tm;
    c.trajectory_intervals = traj.intervals();
    c.lambdas = frame.eig.lambdas;
    c.norm_p = frame.norm_p;
    c.mu = br.mu;
    c.h_max = hmax;
    c.delta_max_transformed = prof.global_max_transformed;
    c.delta_max_original = prof.global_max_original;
    c.max_bound = r.bound.empty() ? 0.0 : *std::max_element(r.bound.begin(), r.bound.end());
    c.mode = (cfg.mode == BoundMode::Global) ? "global" : "stepwise";
    c.warnings.push_back("h_max and delta maxima are sampled on finite grids, not exact");
    if (frame.norm_p * inf_norm(frame.eig.p_inv) > 1e8)
        c.warnings.push_back("eigenvector matrix is ill-conditioned; bound may be inflated");

    c.exact_known = p.exact.has_value();
    if (c.exact_known) {
        r.xexact.reserve(r.grid.size());
        r.fwd_err_inf.reserve(r.grid.size());
        double verdict = 0.0;
        double max_err = 0.0;
        for (std::size_t i = 0; i < r.grid.size(); ++i) {
            Vector xe = p.exact->value(r.grid[i]);
            double err = 0.0;
            for (std::size_t j = 0; j < xe.size(); ++j)
                err = std::max(err, std::fabs(xe[j] - r.xtilde[i][j]));
            r.xexact.push_back(std::move(xe));
            r.fwd_err_inf.push_back(err);
            max_err = std::max(max_err, err);
            // B(t0) = 0 with err = 0 must not poison the ratio, and a
            // roundoff-scale numerator over a microscopic envelope is noise,
            // not a violation: the absolute floor absorbs both.
            verdict = std::max(verdict, err / (r.bound[i] + 1e-14));
        }
        c.max_forward_error = max_err;
        c.verdict = verdict;
        c.sound = std::isfinite(verdict) && verdict <= 1.0 + 1e-9;
    }
    return r;
}

std::string render_curves_csv(const ScenarioResult& r) {
    const std::size_t n = r.cert.n;
    std::string s = "t";
    for (std::size_t j = 1; j <= n; ++j) s += ",xtilde_" + std::to_string(j);
    for (std::size_t j = 1; j <= n; ++j) s += ",delta_" + std::to_string(j);
    s += ",bound";
    if (r.cert.exact_known) {
        for (std::size_t j = 1; j <= n; ++j) s += ",xexact_" + std::to_string(j);
        s += ",fwd_err_inf";
    }
    s += "\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        s += fmt17(r.grid[i]);
        for (std::size_t j = 0; j < n; ++j) s += "," + fmt17(r.xtilde[i][j]);
        for (std::size_t j = 0; j < n; ++j) s += "," + fmt17(r.delta[i][j]);
        s += "," + fmt17(r.bound[i]);
        if (r.cert.exact_known) {
            for (std::size_t j = 0; j < n; ++j) s += "," + fmt17(r.xexact[i][j]);
            s += "," + fmt17(r.fwd_err_inf[i]);
        }
        s += "\n";
    }
    return s;
}

std::string render_curves_json(const ScenarioResult& r) {
    nlohmann::ordered_json out;
    const std::size_t n = r.cert.n;
    out["t"] = r.grid;
    auto column = [&](const std::vector<Vector>& series, std::size_t j) {
        std::vector<double> col;
        col.reserve(series.size());
        for (const Vector& v : series) col.push_back(v[j]);
        return col;
    };
    for (std::size_t j = 0; j < n; ++j)
        out["xtilde_" + std::to_string(j + 1)] = column(r.xtilde, j);
    for (std::size_t j = 0; j < n; ++j)
        out["delta_" + std::to_string(j + 1)] = column(r.delta, j);
    out["bound"] = r.bound;
    if (r.cert.exact_known) {
        for (std::size_t j = 0; j < n; ++j)
            out["xexact_" + std::to_string(j + 1)] = column(r.xexact, j);
        out["fwd_err_inf"] = r.fwd_err_inf;
    }
    return out.dump(2) + "\n";
}

std::string certificate_json(const Certificate& c) {
    nlohmann::ordered_json out;
    out["problem"] = c.problem;
    out["n"] = c.n;
    out["t0"] = c.t0;
    out["tm"] = c.tm;
    out["trajectory_intervals"] = c.trajectory_intervals;
    out["lambdas"] = c.lambdas;
    out["norm_p"] = c.norm_p;
    out["mu"] = c.mu;
    out["h_max"] = c.h_max;
    out["delta_max_transformed"] = c.delta_max_transformed;
    out["delta_max_original"] = c.delta_max_original;
    out["max_bound"] = c.max_bound;
    out["mode"] = c.mode;
    out["exact_known"] = c.exact_known;
    if (c.exact_known) {
        out["max_forward_error"] = c.max_forward_error;
        out["verdict"] = std::isfinite(c.verdict) ? nlohmann::ordered_json(c.verdict)
                                                  : nlohmann::ordered_json("infinite");
        out["sound"] = c.sound;
    }
    out["warnings"] = c.warnings;
    return out.dump(2) + "\n";
}

std::string certificate_text(const Certificate& c) {
    std::ostringstream os;
    os << "problem: " << c.problem << " (n=" << c.n << ", t in [" << c.t0 << ", "
       << c.tm << "])\n";
    os << "trajectory: " << c.trajectory_intervals << " intervals\n";
    os << "spectrum (descending):";
    for (double l : c.lambdas) os << " " << l;
    os << "\n";
    os << "||P||inf = " << c.norm_p << ", h_max = " << c.h_max << ", mu = " << c.mu
       << "\n";
    os << "delta_max: transformed " << c.delta_max_transformed << ", original "
       << c.delta_max_original << "\n";
    os << "bound mode " << c.mode << ", max B = " << c.max_bound << "\n";
    if (c.exact_known) {
        os << "max forward error = " << c.max_forward_error << ", max ratio err/B = "
           << c.verdict << " -> " << (c.sound ? "SOUND" : "NOT COVERED") << "\n";
    } else {
        os << "exact solution unknown; envelope only\n";
    }
    for (const std::string& w : c.warnings) os << "note: " << w << "\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path fp(path);
    if (fp.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(fp.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + fp.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace odecert
