#include "odecert/problem.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace odecert {

void validate_problem(const LinearOdeProblem& p) {
    if (p.n == 0) throw InvalidProblem(p.name + ": dimension must be positive");
    if (!(p.t0 < p.tm))
        throw InvalidProblem(p.name + ": require t0 < tm, got [" + std::to_string(p.t0) +
                             ", " + std::to_string(p.tm) + "]");
    if (!std::isfinite(p.t0) || !std::isfinite(p.tm))
        throw InvalidProblem(p.name + ": non-finite time bounds");
    if (p.x0.size() != p.n)
        throw InvalidProblem(p.name + ": x0 has " + std::to_string(p.x0.size()) +
                             " entries, expected " + std::to_string(p.n));
    for (double v : p.x0)
        if (!std::isfinite(v)) throw InvalidProblem(p.name + ": non-finite x0");
    if (p.a.size() != p.n) throw InvalidProblem(p.name + ": A must have n rows");
    for (const auto& row : p.a)
        if (row.size() != p.n) throw InvalidProblem(p.name + ": A must have n columns per row");
    if (!p.q_fn && p.q.size() != p.n)
        throw InvalidProblem(p.name + ": q must have n entries");
    if (p.exact) {
        const Vector v0 = p.exact->value(p.t0);
        if (v0.size() != p.n) throw InvalidProblem(p.name + ": exact solution has wrong dimension");
        const double tol = 1e-12 * std::max(1.0, inf_norm(p.x0));
        for (std::size_t i = 0; i < p.n; ++i)
            if (std::fabs(v0[i] - p.x0[i]) > tol)
                throw InvalidProblem(p.name + ": exact solution does not match x0 at t0");
    }
}

Matrix eval_A(const LinearOdeProblem& p, double t) {
    Matrix m(p.n, p.n, 0.0);
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j) m(i, j) = p.a[i][j].value(t);
    return m;
}

Vector eval_q(const LinearOdeProblem& p, double t) {
    if (p.q_fn) return p.q_fn(t);
    Vector v(p.n, 0.0);
    for (std::size_t i = 0; i < p.n; ++i) v[i] = p.q[i].value(t);
    return v;
}

Vector eval_f(const LinearOdeProblem& p, double t, const Vector& x) {
    if (x.size() != p.n) throw DimensionMismatch(p.name + ": state has wrong dimension");
    Vector v = eval_q(p, t);
    for (std::size_t i = 0; i < p.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.n; ++j) s += p.a[i][j].value(t) * x[j];
        v[i] += s;
    }
    return v;
}

ExactSolution exact_from_exprs(std::vector<CoeffExpr> comps) {
    std::vector<CoeffExpr> derivs;
    derivs.reserve(comps.size());
    for (const CoeffExpr& c : comps) derivs.push_back(c.derivative());
    ExactSolution e;
    e.value = [comps](double t) {
        Vector v(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) v[i] = comps[i].value(t);
        return v;
    };
    e.derivative = [derivs](double t) {
        Vector v(derivs.size());
        for (std::size_t i = 0; i < derivs.size(); ++i) v[i] = derivs[i].value(t);
        return v;
    };
    return e;
}

std::vector<CoeffExpr> manufacture_q(const std::vector<std::vector<CoeffExpr>>& a,
                                     const std::vector<CoeffExpr>& exact) {
    const std::size_t n = exact.size();
    if (a.size() != n) throw DimensionMismatch("manufacture: A and exact dimensions differ");
    std::vector<CoeffExpr> q;
    q.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw DimensionMismatch("manufacture: A row has wrong length");
        CoeffExpr qi = exact[i].derivative();
        for (std::size_t j = 0; j < n; ++j) qi = qi - a[i][j] * exact[j];
        q.push_back(qi);
    }
    return q;
}

namespace {

const double kPi = 3.14159265358979323846;

std::vector<std::vector<CoeffExpr>> const_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<CoeffExpr>> a;
    for (const auto& r : rows) {
        std::vector<CoeffExpr> row;
        for (double v : r) row.push_back(CoeffExpr::constant(v));
        a.push_back(std::move(row));
    }
    return a;
}

// Attaches q = exact' - A exact, preferring the term language, falling back
// to an evaluable closure when a product leaves it.
void attach_manufactured_q(LinearOdeProblem& p, const std::vector<CoeffExpr>& exact_comps) {
    try {
        p.q = manufacture_q(p.a, exact_comps);
    } catch (const UnrepresentableProduct&) {
        p.q.clear();
        ExactSolution ex = exact_from_exprs(exact_comps);
        std::vector<std::vector<CoeffExpr>> a = p.a;
        const std::size_t n = p.n;
        p.q_fn = [ex, a, n](double t) {
            Vector v = ex.derivative(t);
            const Vector xv = ex.value(t);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += a[i][j].value(t) * xv[j];
                v[i] -= s;
            }
            return v;
        };
    }
    p.exact = exact_from_exprs(exact_comps);
}

LinearOdeProblem make_example1() {
    LinearOdeProblem p;
    p.name = "example1";
    p.n = 1;
    p.a = const_matrix({{1.0}});
    p.q = {CoeffExpr{}};
    p.x0 = {1.0};
    p.t0 = 0.0;
    p.tm = 2.0;
    p.exact = exact_from_exprs({CoeffExpr::sinusoid(Term::Kind::Exp, 1.0, 1.0)});
    return p;
}

LinearOdeProblem make_invariant2x2() {
    LinearOdeProblem p;
    p.name = "invariant2x2";
    p.n = 2;
    p.a = const_matrix({{-1.0, 0.0}, {0.0, 2.0}});
    p.x0 = {0.0, 0.0};
    p.t0 = 0.0;
    p.tm = 6.0;
    std::vector<CoeffExpr> exact = {
        CoeffExpr::sinusoid(Term::Kind::Cos, 1.0, kPi) + CoeffExpr::constant(-1.0),
        CoeffExpr::sinusoid(Term::Kind::Sin, 1.0, kPi)};
    attach_manufactured_q(p, exact);
    return p;
}

LinearOdeProblem make_variant_stable() {
    LinearOdeProblem p;
    p.name = "variant-stable";
    p.n = 2;
    p.a = {{CoeffExpr::constant(-6.0) + CoeffExpr::sinusoid(Term::Kind::Sin, 0.2, 2.0 * kPi),
            CoeffExpr{}},
           {CoeffExpr::constant(1.0),
            CoeffExpr::constant(-5.0) + CoeffExpr::sinusoid(Term::Kind::Sin, -0.1, kPi)}};
    p.x0 = {0.0, 0.0};
    p.t0 = 0.0;
    p.tm = 6.0;
    std::vector<CoeffExpr> exact = {
        CoeffExpr::sinusoid(Term::Kind::Cos, 1.0, kPi) + CoeffExpr::constant(-1.0),
        CoeffExpr::sinusoid(Term::Kind::Sin, 1.0, kPi)};
    attach_manufactured_q(p, exact);
    return p;
}

LinearOdeProblem make_suspension() {
    LinearOdeProblem p;
    p.name = "suspension";
    p.n = 4;
    const double c2 = kPi * kPi / 250.0;  // quadratic damping scale, row 2
    const double c4 = kPi * kPi / 50.0;   // quadratic damping scale, row 4
    auto quad = [](double c0, double c2s) {
        return CoeffExpr::constant(c0) + CoeffExpr::poly(c2s, 2);
    };
    p.a = {{CoeffExpr{}, CoeffExpr::constant(1.0), CoeffExpr{}, CoeffExpr{}},
           {CoeffExpr::constant(3.0), quad(0.8, -c2), CoeffExpr::constant(-3.0), quad(-0.8, c2)},
           {CoeffExpr{}, CoeffExpr{}, CoeffExpr{}, CoeffExpr::constant(1.0)},
           {quad(-4.0, c4), CoeffExpr::constant(15.0), CoeffExpr::constant(35.0), quad(4.0, -c4)}};
    p.x0 = {0.0, 0.1 * kPi, 0.0, 0.01 * kPi};
    p.t0 = 0.0;
    p.tm = 0.5;
    std::vector<CoeffExpr> exact = {
        CoeffExpr::sinusoid(Term::Kind::Sin, 0.1, kPi),
        CoeffExpr::sinusoid(Term::Kind::Cos, 0.1 * kPi, kPi),
        CoeffExpr::sinusoid(Term::Kind::Sin, 0.01, kPi),
        CoeffExpr::sinusoid(Term::Kind::Cos, 0.01 * kPi, kPi)};
    attach_manufactured_q(p, exact);
    return p;
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"example1", "invariant2x2", "variant-stable", "suspension"};
}

LinearOdeProblem catalog(const std::string& name) {
    LinearOdeProblem p;
    if (name == "example1")
        p = make_example1();
    else if (name == "invariant2x2")
        p = make_invariant2x2();
    else if (name == "variant-stable")
        p = make_variant_stable();
    else if (name == "suspension")
        p = make_suspension();
    else
        throw UnknownProblem("no built-in problem named '" + name +
                             "' (try: example1, invariant2x2, variant-stable, suspension)");
    validate_problem(p);
    return p;
}

namespace {

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_line(std::size_t lineno, const std::string& why) {
    throw InvalidProblem("line " + std::to_string(lineno) + ": " + why);
}

}  // namespace

LinearOdeProblem parse_problem_text(const std::string& text, const std::string& name) {
    LinearOdeProblem p;
    p.name = name;
    bool have_dim = false, have_interval = false, have_x0 = false;
    std::vector<CoeffExpr> exact_comps;
    std::vector<bool> exact_given;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dim") {
            long n = 0;
            if (!(ls >> n) || n <= 0) bad_line(lineno, "dim needs a positive integer");
            p.n = static_cast<std::size_t>(n);
            p.a.assign(p.n, std::vector<CoeffExpr>(p.n));
            p.q.assign(p.n, CoeffExpr{});
            exact_comps.assign(p.n, CoeffExpr{});
            exact_given.assign(p.n, false);
            have_dim = true;
            continue;
        }
        if (key == "interval") {
            if (!(ls >> p.t0 >> p.tm)) bad_line(lineno, "interval needs two reals");
            have_interval = true;
            continue;
        }
        if (!have_dim) bad_line(lineno, "dim must come before '" + key + "'");
        if (key == "x0") {
            p.x0.clear();
            double v;
            while (ls >> v) p.x0.push_back(v);
            if (p.x0.size() != p.n) bad_line(lineno, "x0 needs exactly n values");
            have_x0 = true;
            continue;
        }
        if (key == "A" || key == "q" || key == "exact") {
            long i = 0, j = 0;
            if (!(ls >> i)) bad_line(lineno, key + " needs a 1-based index");
            if (key == "A" && !(ls >> j)) bad_line(lineno, "A needs two 1-based indices");
            std::string eq;
            if (!(ls >> eq) || eq != "=") bad_line(lineno, "expected '='");
            std::string expr_text;
            std::getline(ls, expr_text);
            expr_text = trim(expr_text);
            if (expr_text.empty()) bad_line(lineno, "missing expression after '='");
            if (i < 1 || static_cast<std::size_t>(i) > p.n ||
                (key == "A" && (j < 1 || static_cast<std::size_t>(j) > p.n)))
                bad_line(lineno, "index out of range for dim " + std::to_string(p.n));
            CoeffExpr e;
            try {
                e = parse_expr(expr_text);
            } catch (const ParseError& pe) {
                bad_line(lineno, std::string(pe.what()));
            }
            if (key == "A")
                p.a[i - 1][j - 1] = e;
            else if (key == "q")
                p.q[i - 1] = e;
            else {
                exact_comps[i - 1] = e;
                exact_given[i - 1] = true;
            }
            continue;
        }
        bad_line(lineno, "unknown directive '" + key + "'");
    }

    if (!have_dim) throw InvalidProblem(name + ": missing 'dim'");
    if (!have_interval) throw InvalidProblem(name + ": missing 'interval'");
    if (!have_x0) throw InvalidProblem(name + ": missing 'x0'");
    bool any_exact = false, all_exact = true;
    for (std::size_t i = 0; i < p.n; ++i) {
        if (exact_given[i])
            any_exact = true;
        else
            all_exact = false;
    }
    if (any_exact && !all_exact)
        throw InvalidProblem(name + ": exact solution must list all components or none");
    if (any_exact) p.exact = exact_from_exprs(exact_comps);
    validate_problem(p);
    return p;
}

LinearOdeProblem load_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str(), std::filesystem::path(path).stem().string());
}

}  // namespace odecert
