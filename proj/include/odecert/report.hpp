#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "odecert/bound.hpp"
#include "odecert/integrate.hpp"
#include "odecert/problem.hpp"
#include "odecert/residual.hpp"
#include "odecert/spline.hpp"

namespace odecert {

enum class CurveFormat { Csv, Json };

/// Everything run_scenario needs: exactly one problem source (catalog name
/// or problem file), optionally an external trajectory to certify instead of
/// integrating, and the sampling/bound knobs.
struct ScenarioConfig {
    std::string catalog_name;     // one of these two must be set
    std::string problem_file;
    std::string trajectory_file;  // optional, requires problem source
    bool example1_table = false;  // certify the built-in 3-node e^t table
    IntegratorConfig integrator;
    std::size_t samples_per_step = 32;
    std::size_t hmax_grid = 1024;
    BoundMode mode = BoundMode::Stepwise;
    std::size_t report_grid = 512;
};

/// Machine-readable summary of the certification run.
struct Certificate {
    std::string problem;
    std::size_t n = 0;
    double t0 = 0.0;
    double tm = 0.0;
    std::size_t trajectory_intervals = 0;
    std::vector<double> lambdas;
    double norm_p = 0.0;
    double mu = 0.0;
    double h_max = 0.0;
    double delta_max_transformed = 0.0;
    double delta_max_original = 0.0;
    double max_bound = 0.0;
    std::string mode;  // "global" or "stepwise"
    bool exact_known = false;
    double max_forward_error = 0.0;  // only when exact_known
    // max over the grid of ||dx||_inf / (B + 1e-14); the floor keeps the
    // ratio meaningful where B vanishes (t0) or is roundoff-small
    double verdict = 0.0;
    bool sound = false;  // verdict <= 1 + 1e-9, exact_known only
    std::vector<std::string> warnings;
};

/// Full scenario output: the certificate plus the curve series on the report
/// grid (equispaced points joined with the trajectory knots).
struct ScenarioResult {
    Certificate cert;
    Trajectory traj;
    std::vector<double> grid;
    std::vector<Vector> xtilde;
    std::vector<Vector> delta;
    std::vector<double> bound;
    std::vector<Vector> xexact;        // empty when exact unknown
    std::vector<double> fwd_err_inf;   // empty when exact unknown
};

/// Runs the pipeline integrate (or ingest) -> fit -> residual profile ->
/// spectral frame -> h_max -> envelope -> (direct forward error when the
/// exact solution is known). Throws the originating module's error.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Curve table: columns t, xtilde_1..n, delta_1..n, bound and, when the
/// exact solution is known, xexact_1..n, fwd_err_inf. 17 significant digits.
std::string render_curves_csv(const ScenarioResult& r);
/// Same series as a JSON object of named arrays.
std::string render_curves_json(const ScenarioResult& r);

/// Certificate as JSON.
std::string certificate_json(const Certificate& c);
/// Short human-readable certificate summary.
std::string certificate_text(const Certificate& c);

/// Writes text to path, creating parent directories. Throws IoError.
void write_file(const std::string& path, const std::string& text);
/// Reads an entire file. Throws IoError.
std::string read_file(const std::string& path);

}  // namespace odecert
