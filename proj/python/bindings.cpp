#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "odecert/report.hpp"

namespace py = pybind11;

namespace {

odecert::LinearOdeProblem resolve(const std::string& catalog_name,
                                  const std::string& problem_file) {
    if (catalog_name.empty() == problem_file.empty())
        throw odecert::InvalidProblem("give exactly one of catalog= or problem_file=");
    return catalog_name.empty() ? odecert::load_problem_file(problem_file)
                                : odecert::catalog(catalog_name);
}

py::dict certificate_dict(const odecert::Certificate& c) {
    py::dict d;
    d["problem"] = c.problem;
    d["n"] = c.n;
    d["t0"] = c.t0;
    d["tm"] = c.tm;
    d["trajectory_intervals"] = c.trajectory_intervals;
    d["lambdas"] = c.lambdas;
    d["norm_p"] = c.norm_p;
    d["mu"] = c.mu;
    d["h_max"] = c.h_max;
    d["delta_max_transformed"] = c.delta_max_transformed;
    d["delta_max_original"] = c.delta_max_original;
    d["max_bound"] = c.max_bound;
    d["mode"] = c.mode;
    d["exact_known"] = c.exact_known;
    if (c.exact_known) {
        d["max_forward_error"] = c.max_forward_error;
        d["verdict"] = c.verdict;
        d["sound"] = c.sound;
    }
    d["warnings"] = c.warnings;
    return d;
}

py::dict certify(const std::string& catalog_name, const std::string& problem_file,
                 const std::string& trajectory_file, double rtol, double atol,
                 const std::string& mode, std::size_t samples_per_step,
                 std::size_t hmax_grid, std::size_t report_grid) {
    odecert::ScenarioConfig cfg;
    cfg.catalog_name = catalog_name;
    cfg.problem_file = problem_file;
    cfg.trajectory_file = trajectory_file;
    cfg.integrator.rtol = rtol;
    cfg.integrator.atol = atol;
    if (mode == "global")
        cfg.mode = odecert::BoundMode::Global;
    else if (mode == "stepwise")
        cfg.mode = odecert::BoundMode::Stepwise;
    else
        throw odecert::InvalidProblem("mode must be 'global' or 'stepwise'");
    cfg.samples_per_step = samples_per_step;
    cfg.hmax_grid = hmax_grid;
    cfg.report_grid = report_grid;
    const odecert::ScenarioResult r = odecert::run_scenario(cfg);

    py::dict d;
    d["certificate"] = certificate_dict(r.cert);
    d["grid"] = r.grid;
    d["xtilde"] = r.xtilde;
    d["delta"] = r.delta;
    d["bound"] = r.bound;
    if (r.cert.exact_known) {
        d["xexact"] = r.xexact;
        d["fwd_err_inf"] = r.fwd_err_inf;
    }
    return d;
}

py::dict integrate(const std::string& catalog_name, const std::string& problem_file,
                   double rtol, double atol) {
    const odecert::LinearOdeProblem p = resolve(catalog_name, problem_file);
    odecert::IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    const odecert::Trajectory t = odecert::integrate_dp45(p, cfg);
    py::dict d;
    d["nodes"] = t.nodes;
    d["values"] = t.values;
    d["derivs"] = t.derivs;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "certified a-posteriori error bounds for linear ODE initial value problems";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const odecert::Error& e) {
            PyErr_SetString(PyExc_ValueError, (e.name() + ": " + e.what()).c_str());
        }
    });

    m.def("catalog_names", &odecert::catalog_names, "names of the built-in problems");
    m.def(
        "eval_expr",
        [](const std::string& src, double t) { return odecert::parse_expr(src).value(t); },
        py::arg("src"), py::arg("t"),
        "parse a coefficient expression and evaluate it at t");
    m.def("certify", &certify, py::arg("catalog") = "", py::arg("problem_file") = "",
          py::arg("trajectory_file") = "", py::arg("rtol") = 1e-6, py::arg("atol") = 1e-9,
          py::arg("mode") = "stepwise", py::arg("samples_per_step") = 32,
          py::arg("hmax_grid") = 1024, py::arg("report_grid") = 512,
          "solve (or ingest) a problem and compute the certified error envelope");
    m.def("integrate", &integrate, py::arg("catalog") = "", py::arg("problem_file") = "",
          py::arg("rtol") = 1e-6, py::arg("atol") = 1e-9,
          "adaptive integration returning nodes, values and derivatives");
}
