#include <doctest.h>

#include <cmath>
#include <string>

#include "odecert/integrate.hpp"

using namespace odecert;

namespace {

LinearOdeProblem rest_problem() {
    LinearOdeProblem p;
    p.name = "rest";
    p.n = 1;
    p.a = {{CoeffExpr{}}};
    p.q = {CoeffExpr{}};
    p.x0 = {0.0};
    p.t0 = 0.0;
    p.tm = 1.0;
    return p;
}

double max_node_error(const Trajectory& tr, const LinearOdeProblem& p) {
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        const Vector ex = p.exact->value(tr.nodes[k]);
        for (std::size_t i = 0; i < p.n; ++i)
            worst = std::max(worst, std::fabs(tr.values[k][i] - ex[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("adaptive solver hits the endpoint of exponential growth") {
    const LinearOdeProblem p = catalog("example1");
    IntegratorConfig cfg;
    cfg.rtol = 1e-8;
    cfg.atol = 1e-8;
    const Trajectory tr = integrate_dp45(p, cfg);
    REQUIRE(tr.nodes.size() >= 3);
    CHECK(tr.nodes.front() == p.t0);
    CHECK(tr.nodes.back() == p.tm);
    CHECK(std::fabs(tr.values.back()[0] - std::exp(2.0)) <= 1e-6);
}

TEST_CASE("trajectory invariants hold on every catalog problem") {
    for (const std::string& name : catalog_names()) {
        const LinearOdeProblem p = catalog(name);
        const Trajectory tr = integrate_dp45(p, IntegratorConfig{});
        REQUIRE(tr.intervals() >= 2);
        for (std::size_t k = 0; k + 1 < tr.nodes.size(); ++k) CHECK(tr.nodes[k] < tr.nodes[k + 1]);
        CHECK(tr.nodes.front() == p.t0);
        CHECK(tr.nodes.back() == p.tm);
        CHECK_FALSE(tr.derivs_supplied);
        for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
            const Vector f = eval_f(p, tr.nodes[k], tr.values[k]);
            for (std::size_t i = 0; i < p.n; ++i) CHECK(tr.derivs[k][i] == f[i]);
        }
    }
}

TEST_CASE("system at rest stays at rest") {
    const Trajectory tr = integrate_dp45(rest_problem(), IntegratorConfig{});
    for (const Vector& v : tr.values) CHECK(v[0] == 0.0);
    for (const Vector& v : tr.derivs) CHECK(v[0] == 0.0);
}

TEST_CASE("adaptive solver tracks a stable system with varying coefficients") {
    const LinearOdeProblem p = catalog("variant-stable");
    IntegratorConfig cfg;
    cfg.rtol = 1e-6;
    cfg.atol = 1e-9;
    const Trajectory tr = integrate_dp45(p, cfg);
    CHECK(max_node_error(tr, p) <= 1e-5);
}

TEST_CASE("step cap is honoured") {
    const LinearOdeProblem p = catalog("example1");
    IntegratorConfig cfg;
    cfg.h_max_step = 0.1;
    const Trajectory tr = integrate_dp45(p, cfg);
    for (std::size_t i = 0; i < tr.intervals(); ++i) CHECK(tr.step(i) <= 0.1 + 1e-12);
}

TEST_CASE("tightening tolerances never makes node errors worse") {
    const LinearOdeProblem p = catalog("invariant2x2");
    double prev = 1e99;
    for (double rtol : {1e-3, 1e-5, 1e-7, 1e-9}) {
        IntegratorConfig cfg;
        cfg.rtol = rtol;
        cfg.atol = 1e-12;
        const double err = max_node_error(integrate_dp45(p, cfg), p);
        CHECK(err <= prev);
        prev = err;
    }
    // the growing mode amplifies local errors by about e^12, so even the
    // tightest setting only lands near 4e-5 in absolute terms
    CHECK(prev <= 1e-3);
}

TEST_CASE("fixed-step solver reproduces the single-step closed form") {
    const LinearOdeProblem p = catalog("example1");
    const Trajectory tr = integrate_rk4_fixed(p, 1.0);
    REQUIRE(tr.nodes.size() == 3);
    CHECK(tr.nodes[0] == 0.0);
    CHECK(tr.nodes[1] == 1.0);
    CHECK(tr.nodes[2] == 2.0);
    // one unit step of the classical scheme on x' = x gives 65/24
    CHECK(std::fabs(tr.values[1][0] - 65.0 / 24.0) <= 1e-13);
    CHECK(std::fabs(tr.values[1][0] - std::exp(1.0)) <= 0.02);
}

TEST_CASE("fixed-step solver converges at fourth order") {
    const LinearOdeProblem p = catalog("example1");
    const double e1 = max_node_error(integrate_rk4_fixed(p, 0.1), p);
    const double e2 = max_node_error(integrate_rk4_fixed(p, 0.05), p);
    const double ratio = e1 / e2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("fixed-step solver keeps a constant solution constant") {
    LinearOdeProblem p = rest_problem();
    p.x0 = {2.5};
    const Trajectory tr = integrate_rk4_fixed(p, 0.25);
    for (const Vector& v : tr.values) CHECK(v[0] == 2.5);
}

TEST_CASE("external tables wrap into trajectories") {
    const LinearOdeProblem p = catalog("example1");
    const double e = std::exp(1.0), e2 = std::exp(2.0);
    std::vector<TableRow> rows = {{0.0, {1.0}, Vector{1.0}},
                                  {1.0, {e}, Vector{e}},
                                  {2.0, {e2}, Vector{e2}}};
    const Trajectory tr = trajectory_from_table(rows, p);
    CHECK(tr.derivs_supplied);
    CHECK(tr.nodes.size() == 3);
    CHECK(tr.values[1][0] == e);
    CHECK(tr.derivs[2][0] == e2);

    SUBCASE("derivatives are recomputed when the table omits them") {
        for (auto& r : rows) r.xp.reset();
        const Trajectory tr2 = trajectory_from_table(rows, p);
        CHECK_FALSE(tr2.derivs_supplied);
        // for x' = x the recomputed derivative equals the value bitwise
        for (std::size_t k = 0; k < 3; ++k) CHECK(tr2.derivs[k][0] == tr2.values[k][0]);
    }
    SUBCASE("rejects short, unordered, or mismatched tables") {
        CHECK_THROWS_AS(trajectory_from_table({rows[0], rows[2]}, p), InvalidTrajectory);
        auto bad = rows;
        bad[1].t = 0.0;
        CHECK_THROWS_AS(trajectory_from_table(bad, p), NonMonotoneTime);
        bad = rows;
        bad[2].t = 1.5;
        CHECK_THROWS_AS(trajectory_from_table(bad, p), InvalidTrajectory);
        bad = rows;
        bad[0].x = {5.0};
        CHECK_THROWS_AS(trajectory_from_table(bad, p), InvalidTrajectory);
        bad = rows;
        bad[1].x = {1.0, 2.0};
        CHECK_THROWS_AS(trajectory_from_table(bad, p), DimensionMismatch);
        bad = rows;
        bad[1].xp.reset();
        CHECK_THROWS_AS(trajectory_from_table(bad, p), InvalidTrajectory);
    }
}

TEST_CASE("trajectory csv round-trips bitwise") {
    const LinearOdeProblem p = catalog("invariant2x2");
    const Trajectory tr = integrate_dp45(p, IntegratorConfig{});
    const std::string csv = trajectory_to_csv(tr);
    const Trajectory tr2 = trajectory_from_table(table_rows_from_csv(csv), p);
    REQUIRE(tr2.nodes.size() == tr.nodes.size());
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        CHECK(tr2.nodes[k] == tr.nodes[k]);
        for (std::size_t i = 0; i < p.n; ++i) {
            CHECK(tr2.values[k][i] == tr.values[k][i]);
            CHECK(tr2.derivs[k][i] == tr.derivs[k][i]);
        }
    }
}

TEST_CASE("csv parsing rejects malformed input") {
    CHECK_THROWS_AS(table_rows_from_csv(""), InvalidTrajectory);
    CHECK_THROWS_AS(table_rows_from_csv("time,x1\n0,1\n"), InvalidTrajectory);
    CHECK_THROWS_AS(table_rows_from_csv("t,x1\n0,abc\n"), InvalidTrajectory);
    CHECK_THROWS_AS(table_rows_from_csv("t,x1\n0\n"), InvalidTrajectory);
}

TEST_CASE("state sampling lands exactly on requested times") {
    const LinearOdeProblem p = catalog("example1");
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;
    const std::vector<double> times = {0.0, 0.5, 1.0, 1.7, 2.0};
    const auto states = dp45_states_at(p, cfg, times);
    REQUIRE(states.size() == times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK(states[k][0] == doctest::Approx(std::exp(times[k])).epsilon(1e-8));
    CHECK_THROWS_AS(dp45_states_at(p, cfg, {0.5, 2.5}), GridOutsideDomain);
    CHECK_THROWS_AS(dp45_states_at(p, cfg, {1.0, 0.5}), NonMonotoneTime);
}
