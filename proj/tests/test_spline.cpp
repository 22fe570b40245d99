#include <doctest.h>

#include <cmath>
#include <functional>

#include "odecert/spline.hpp"

using namespace odecert;

namespace {

Trajectory sample_function(const std::function<double(double)>& f,
                           const std::function<double(double)>& df,
                           const std::vector<double>& nodes) {
    Trajectory tr;
    tr.nodes = nodes;
    for (double t : nodes) {
        tr.values.push_back({f(t)});
        tr.derivs.push_back({df(t)});
    }
    return tr;
}

Trajectory uniform_sample(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double a,
                          double b, std::size_t intervals) {
    std::vector<double> nodes;
    for (std::size_t k = 0; k <= intervals; ++k)
        nodes.push_back(a + (b - a) * double(k) / double(intervals));
    nodes.back() = b;
    return sample_function(f, df, nodes);
}

double dense_error(const HermiteSpline& s, const std::function<double(double)>& f) {
    double worst = 0.0;
    const double a = s.t_begin(), b = s.t_end();
    const std::size_t grid = 40 * s.intervals();
    for (std::size_t k = 0; k <= grid; ++k) {
        const double t = a + (b - a) * double(k) / double(grid);
        worst = std::max(worst, std::fabs(s.eval(t)[0] - f(t)));
    }
    return worst;
}

}  // namespace

TEST_CASE("coefficients of the two-interval exponential table") {
    const double e = std::exp(1.0), e2 = std::exp(2.0);
    Trajectory tr;
    tr.nodes = {0.0, 1.0, 2.0};
    tr.values = {{1.0}, {e}, {e2}};
    tr.derivs = {{1.0}, {e}, {e2}};
    const HermiteSpline s = HermiteSpline::fit(tr);
    REQUIRE(s.intervals() == 2);
    const auto c0 = s.coeffs(0, 0);
    CHECK(c0[0] == 1.0);
    CHECK(c0[1] == 1.0);
    CHECK(c0[2] == doctest::Approx(2.0 * e - 5.0).epsilon(1e-12));
    CHECK(c0[3] == doctest::Approx(3.0 - e).epsilon(1e-12));
    const auto c1 = s.coeffs(1, 0);
    CHECK(c1[0] == e);
    CHECK(c1[1] == e);
    CHECK(c1[2] == doctest::Approx(e * (2.0 * e - 5.0)).epsilon(1e-12));
    CHECK(c1[3] == doctest::Approx(e * (3.0 - e)).epsilon(1e-12));

    // interior knots belong to the interval on their right
    CHECK(s.eval(1.0)[0] == e);
    CHECK(s.eval(0.0)[0] == 1.0);
    CHECK(s.eval(0.5)[0] ==
          doctest::Approx(1.0 + 0.5 + (2.0 * e - 5.0) * 0.25 + (3.0 - e) * 0.125)
              .epsilon(1e-14));
    CHECK(s.eval_deriv(0.5)[0] ==
          doctest::Approx(1.0 + (2.0 * e - 5.0) + 3.0 * (3.0 - e) * 0.25).epsilon(1e-14));
}

TEST_CASE("constant data produces constant cubics") {
    Trajectory tr;
    tr.nodes = {0.0, 0.5, 2.0};
    tr.values = {{4.0}, {4.0}, {4.0}};
    tr.derivs = {{0.0}, {0.0}, {0.0}};
    const HermiteSpline s = HermiteSpline::fit(tr);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto c = s.coeffs(i, 0);
        CHECK(c[0] == 4.0);
        CHECK(c[1] == 0.0);
        CHECK(c[2] == 0.0);
        CHECK(c[3] == 0.0);
    }
    CHECK(s.eval(1.7)[0] == 4.0);
    CHECK(s.eval_deriv(0.2)[0] == 0.0);
}

TEST_CASE("knots are reproduced and the join is C1") {
    const auto f = [](double t) { return std::sin(t) + 0.3 * t; };
    const auto df = [](double t) { return std::cos(t) + 0.3; };
    const Trajectory tr = sample_function(f, df, {0.0, 0.4, 0.9, 1.3, 2.0});
    const HermiteSpline s = HermiteSpline::fit(tr);
    for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
        CHECK(std::fabs(s.eval(tr.nodes[k])[0] - tr.values[k][0]) <= 1e-12);
        CHECK(std::fabs(s.eval_deriv(tr.nodes[k])[0] - tr.derivs[k][0]) <= 1e-12);
    }
    // approach the interior knots from the left
    for (std::size_t k = 1; k + 1 < tr.nodes.size(); ++k) {
        const double t = tr.nodes[k] - 1e-13;
        CHECK(std::fabs(s.eval(t)[0] - tr.values[k][0]) <= 1e-11);
        CHECK(std::fabs(s.eval_deriv(t)[0] - tr.derivs[k][0]) <= 1e-10);
    }
}

TEST_CASE("cubics are reproduced exactly") {
    const auto f = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t + 0.25 * t * t * t; };
    const auto df = [](double t) { return -2.0 + t + 0.75 * t * t; };
    const Trajectory tr = sample_function(f, df, {0.0, 0.3, 1.1, 2.0});
    const HermiteSpline s = HermiteSpline::fit(tr);
    for (double t : {0.05, 0.3, 0.77, 1.5, 1.99}) {
        CHECK(s.eval(t)[0] == doctest::Approx(f(t)).epsilon(1e-12));
        CHECK(s.eval_deriv(t)[0] == doctest::Approx(df(t)).epsilon(1e-12));
    }
}

TEST_CASE("interpolation error obeys the quartic bound and rate") {
    struct Case {
        std::function<double(double)> f, df;
        double a, b, m4;
    };
    const double e = std::exp(1.0);
    const Case cases[] = {
        {[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }, 0.0,
         3.14159265358979323846, 1.0},
        {[](double t) { return std::exp(0.5 * t); },
         [](double t) { return 0.5 * std::exp(0.5 * t); }, 0.0, 2.0, e / 16.0},
        {[](double t) { return std::pow(t, 5); },
         [](double t) { return 5.0 * std::pow(t, 4); }, 0.0, 1.0, 120.0},
    };
    for (const Case& c : cases) {
        double prev = 0.0;
        for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
            const HermiteSpline s = HermiteSpline::fit(uniform_sample(c.f, c.df, c.a, c.b, n));
            const double err = dense_error(s, c.f);
            const double h = (c.b - c.a) / double(n);
            CHECK(err <= hermite_error_bound(h, c.m4) * (1.0 + 1e-9));
            if (n >= 16) {
                const double ratio = prev / err;
                CHECK(ratio > 12.0);
                CHECK(ratio < 20.0);
            }
            prev = err;
        }
    }
}

TEST_CASE("evaluation outside the covered span is rejected") {
    Trajectory tr;
    tr.nodes = {0.0, 1.0, 2.0};
    tr.values = {{0.0}, {1.0}, {2.0}};
    tr.derivs = {{1.0}, {1.0}, {1.0}};
    const HermiteSpline s = HermiteSpline::fit(tr);
    CHECK_THROWS_AS(s.eval(-0.1), OutOfDomain);
    CHECK_THROWS_AS(s.eval(2.1), OutOfDomain);
    CHECK_THROWS_AS(s.eval_deriv(2.1), OutOfDomain);
    CHECK(s.eval(2.0)[0] == doctest::Approx(2.0));
    // hairline overshoot within the slack still evaluates
    CHECK(s.eval(2.0 + 1e-14)[0] == doctest::Approx(2.0));
}

TEST_CASE("fit needs at least two intervals") {
    Trajectory tr;
    tr.nodes = {0.0, 1.0};
    tr.values = {{0.0}, {1.0}};
    tr.derivs = {{1.0}, {1.0}};
    CHECK_THROWS_AS(HermiteSpline::fit(tr), InvalidTrajectory);
}

TEST_CASE("quartic bound closed form") {
    CHECK(hermite_error_bound(0.1, 1.0) == doctest::Approx(2.6041666666666666e-7));
    CHECK(hermite_error_bound(0.5, 0.0) == 0.0);
    CHECK(hermite_error_bound(2.0, 384.0) == doctest::Approx(16.0));
}
