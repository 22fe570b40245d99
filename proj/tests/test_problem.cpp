#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "odecert/problem.hpp"

using namespace odecert;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("catalog lists four problems and rejects unknown names") {
    const auto names = catalog_names();
    REQUIRE(names.size() == 4);
    CHECK(names[0] == "example1");
    CHECK(names[3] == "suspension");
    CHECK_THROWS_AS(catalog("nope"), UnknownProblem);
}

TEST_CASE("scalar growth problem evaluates as x' = x") {
    const LinearOdeProblem p = catalog("example1");
    CHECK(p.n == 1);
    CHECK(p.t0 == 0.0);
    CHECK(p.tm == 2.0);
    CHECK(p.x0[0] == 1.0);
    CHECK(eval_A(p, 1.7)(0, 0) == 1.0);
    CHECK(eval_q(p, 0.3)[0] == 0.0);
    const Vector f = eval_f(p, 0.0, {1.0});
    CHECK(f[0] == doctest::Approx(1.0));
    REQUIRE(p.exact.has_value());
    CHECK(p.exact->value(1.0)[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("constant diagonal system matches its closed forms") {
    const LinearOdeProblem p = catalog("invariant2x2");
    const Matrix a = eval_A(p, 2.31);
    CHECK(a(0, 0) == -1.0);
    CHECK(a(0, 1) == 0.0);
    CHECK(a(1, 0) == 0.0);
    CHECK(a(1, 1) == 2.0);
    // q was manufactured from x* = (cos(pi t) - 1, sin(pi t))
    for (double t : {0.0, 0.37, 1.5, 4.2}) {
        const Vector q = eval_q(p, t);
        CHECK(q[0] == doctest::Approx(-kPi * std::sin(kPi * t) + std::cos(kPi * t) - 1.0)
                          .epsilon(1e-13));
        CHECK(q[1] == doctest::Approx(kPi * std::cos(kPi * t) - 2.0 * std::sin(kPi * t))
                          .epsilon(1e-13));
    }
    const Vector f = eval_f(p, 0.0, {0.0, 0.0});
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(kPi));
}

TEST_CASE("periodically perturbed system has the stated coefficients") {
    const LinearOdeProblem p = catalog("variant-stable");
    const Matrix a0 = eval_A(p, 0.0);
    CHECK(a0(0, 0) == doctest::Approx(-6.0));
    CHECK(a0(1, 0) == 1.0);
    CHECK(a0(1, 1) == doctest::Approx(-5.0));
    CHECK(a0(0, 1) == 0.0);
    const Matrix a = eval_A(p, 0.25);
    CHECK(a(0, 0) == doctest::Approx(-6.0 + 0.2 * std::sin(kPi / 2.0)));
    CHECK(a(1, 1) == doctest::Approx(-5.0 - 0.1 * std::sin(kPi / 4.0)));
}

TEST_CASE("coupled 4d problem carries its quadratic coefficients") {
    const LinearOdeProblem p = catalog("suspension");
    CHECK(p.n == 4);
    CHECK(p.tm == 0.5);
    CHECK(p.x0[1] == doctest::Approx(0.1 * kPi));
    CHECK(p.x0[3] == doctest::Approx(0.01 * kPi));
    const double t = 0.3;
    const Matrix a = eval_A(p, t);
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 0) == 3.0);
    CHECK(a(1, 1) == doctest::Approx(0.8 - kPi * kPi * t * t / 250.0).epsilon(1e-14));
    CHECK(a(1, 3) == doctest::Approx(kPi * kPi * t * t / 250.0 - 0.8).epsilon(1e-14));
    CHECK(a(3, 0) == doctest::Approx(kPi * kPi * t * t / 50.0 - 4.0).epsilon(1e-14));
    CHECK(a(3, 1) == 15.0);
    CHECK(a(3, 2) == 35.0);
    CHECK(a(3, 3) == doctest::Approx(4.0 - kPi * kPi * t * t / 50.0).epsilon(1e-14));
    // forcing falls back to a closure because t^2 times trig leaves the term language
    CHECK(bool(p.q_fn));
}

TEST_CASE("every catalog exact solution satisfies its own equation") {
    std::mt19937 rng(4242);
    for (const std::string& name : catalog_names()) {
        const LinearOdeProblem p = catalog(name);
        REQUIRE(p.exact.has_value());
        std::uniform_real_distribution<double> u(p.t0, p.tm);
        for (int k = 0; k < 1000; ++k) {
            const double t = u(rng);
            const Vector x = p.exact->value(t);
            const Vector xp = p.exact->derivative(t);
            const Vector f = eval_f(p, t, x);
            for (std::size_t i = 0; i < p.n; ++i)
                CHECK(std::fabs(xp[i] - f[i]) <= 1e-10 * (1.0 + inf_norm(xp)));
        }
    }
}

TEST_CASE("exact derivatives agree with finite differences") {
    const double h = 1e-5;
    for (const std::string& name : catalog_names()) {
        const LinearOdeProblem p = catalog(name);
        for (double frac : {0.1, 0.45, 0.9}) {
            const double t = p.t0 + frac * (p.tm - p.t0);
            const Vector d = p.exact->derivative(t);
            const Vector lo = p.exact->value(t - h);
            const Vector hi = p.exact->value(t + h);
            for (std::size_t i = 0; i < p.n; ++i)
                CHECK(d[i] == doctest::Approx((hi[i] - lo[i]) / (2.0 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("manufactured forcing for simple hand cases") {
    // A = [[1]], x* = t: q = 1 - t
    const auto q1 = manufacture_q({{CoeffExpr::constant(1.0)}}, {CoeffExpr::poly(1.0, 1)});
    CHECK(q1[0].value(0.0) == doctest::Approx(1.0));
    CHECK(q1[0].value(2.0) == doctest::Approx(-1.0));
    // A = 0, x* constant: q = 0
    const auto q2 = manufacture_q({{CoeffExpr{}}}, {CoeffExpr::constant(3.0)});
    CHECK(q2[0].is_zero());
}

TEST_CASE("eval_f is linear in the state") {
    const LinearOdeProblem p = catalog("variant-stable");
    const double t = 1.3;
    const Vector x{0.4, -1.1}, y{2.0, 0.5};
    const Vector q = eval_q(p, t);
    const Vector fx = eval_f(p, t, x);
    const Vector fy = eval_f(p, t, y);
    const Vector fxy = eval_f(p, t, {x[0] + y[0], x[1] + y[1]});
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::fabs(fxy[i] - (fx[i] + fy[i] - q[i])) <= 1e-12);
    CHECK_THROWS_AS(eval_f(p, t, Vector{1.0}), DimensionMismatch);
}

TEST_CASE("problem text parses and evaluates like the built form") {
    const std::string text =
        "# damped oscillator with forcing\n"
        "dim 2\n"
        "interval 0 1.5\n"
        "x0 1 0\n"
        "A 1 1 = -0.5\n"
        "A 1 2 = 1\n"
        "A 2 1 = -1\n"
        "A 2 2 = -0.5 + 0.1*sin(2*t)\n"
        "q 1 = 0.25*cos(3*t)\n";
    const LinearOdeProblem p = parse_problem_text(text, "osc");
    CHECK(p.n == 2);
    CHECK(p.t0 == 0.0);
    CHECK(p.tm == 1.5);
    CHECK(p.x0[0] == 1.0);
    const Matrix a = eval_A(p, 0.8);
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 1) == doctest::Approx(-0.5 + 0.1 * std::sin(1.6)));
    CHECK(eval_q(p, 0.8)[0] == doctest::Approx(0.25 * std::cos(2.4)));
    CHECK(eval_q(p, 0.8)[1] == 0.0);
    CHECK_FALSE(p.exact.has_value());
}

TEST_CASE("problem text with exact rows builds an exact solution") {
    const std::string text =
        "dim 1\n"
        "interval 0 2\n"
        "x0 1\n"
        "A 1 1 = -1\n"
        "exact 1 = 1*exp(-1*t)\n";
    const LinearOdeProblem p = parse_problem_text(text, "decay");
    REQUIRE(p.exact.has_value());
    CHECK(p.exact->value(1.0)[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(p.exact->derivative(1.0)[0] == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("problem text failures are reported with line numbers") {
    const auto expect_invalid = [](const std::string& text, const std::string& needle) {
        try {
            parse_problem_text(text, "bad");
            FAIL("expected InvalidProblem for: ", needle);
        } catch (const InvalidProblem& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_invalid("interval 0 1\nx0 1\n", "dim must come before");
    expect_invalid("dim 1\nx0 1\nA 1 1 = 1\n", "missing 'interval'");
    expect_invalid("dim 1\ninterval 0 1\nA 1 1 = 1\n", "missing 'x0'");
    expect_invalid("dim 2\ninterval 0 1\nx0 1 0\nA 3 1 = 1\n", "out of range");
    expect_invalid("dim 1\ninterval 0 1\nx0 1\nwobble 1 = 2\n", "unknown directive");
    expect_invalid("dim 1\ninterval 0 1\nx0 1\nA 1 1 = 2*\n", "line 4");
    expect_invalid("dim 2\ninterval 0 1\nx0 0 1\nA 1 1 = 1\nexact 1 = 0\n",
                   "all components or none");
    expect_invalid("dim 1\ninterval 0 1\nx0 1\nA 1 1 = 1\nexact 1 = 5\n",
                   "does not match x0");
    expect_invalid("dim 1\ninterval 3 1\nx0 1\nA 1 1 = 1\n", "t0 < tm");
}

TEST_CASE("validate_problem rejects malformed hand-built problems") {
    LinearOdeProblem p = catalog("example1");
    p.x0 = {1.0, 2.0};
    CHECK_THROWS_AS(validate_problem(p), InvalidProblem);
    p = catalog("example1");
    p.a.clear();
    CHECK_THROWS_AS(validate_problem(p), InvalidProblem);
}
