#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "odecert/expr.hpp"
#include "odecert/linalg.hpp"

namespace odecert {

/// Known exact solution, evaluable together with its analytic derivative.
/// Built either from coefficient expressions or, when the term language
/// cannot hold the data, from explicit closures.
struct ExactSolution {
    std::function<Vector(double)> value;
    std::function<Vector(double)> derivative;
};

/// The linear initial value problem x' = A(t) x + q(t), x(t0) = x0 on
/// [t0, tm]. Entries of A and q are coefficient expressions; q_fn, when set,
/// overrides the expression form of q (used when manufacturing q would leave
/// the term language).
struct LinearOdeProblem {
    std::string name;
    std::size_t n = 0;
    std::vector<std::vector<CoeffExpr>> a;  // n rows of n entries
    std::vector<CoeffExpr> q;               // n entries, all zero when q_fn set
    std::function<Vector(double)> q_fn;
    Vector x0;
    double t0 = 0.0;
    double tm = 1.0;
    std::optional<ExactSolution> exact;
};

/// Checks shape and consistency invariants (t0 < tm, dimensions, finite x0,
/// exact(t0) = x0 within 1e-12 when exact is present).
/// Throws InvalidProblem.
void validate_problem(const LinearOdeProblem& p);

/// A(t) evaluated entrywise.
Matrix eval_A(const LinearOdeProblem& p, double t);
/// q(t), from the closure when present, else entrywise.
Vector eval_q(const LinearOdeProblem& p, double t);
/// Right-hand side A(t) x + q(t).
Vector eval_f(const LinearOdeProblem& p, double t, const Vector& x);

/// Builds an ExactSolution from per-component expressions.
ExactSolution exact_from_exprs(std::vector<CoeffExpr> comps);

/// Method of manufactured solutions: q = x*' - A x*, computed inside the
/// term language. Throws UnrepresentableProduct when a product (for example
/// t^2 times a sinusoid) has no term form; callers may then fall back to an
/// evaluable closure for q instead.
std::vector<CoeffExpr> manufacture_q(const std::vector<std::vector<CoeffExpr>>& a,
                                     const std::vector<CoeffExpr>& exact);

/// Built-in problems: "example1" (scalar x' = x on [0,2]), "invariant2x2"
/// (constant diag(-1,2) with a manufactured trigonometric solution),
/// "variant-stable" (2x2 with slowly oscillating diagonal), "suspension"
/// (4x4 quarter-car model with quadratic-in-t damping terms).
/// Throws UnknownProblem for any other name.
LinearOdeProblem catalog(const std::string& name);
/// Names accepted by catalog, in presentation order.
std::vector<std::string> catalog_names();

/// Parses the line-oriented problem file format:
///   dim n
///   interval t0 tm
///   x0 v1 ... vn
///   A i j = <expr>     (1-based indices; unlisted entries are 0)
///   q i = <expr>
///   exact i = <expr>   (optional; all n components or none)
/// '#' starts a comment. Throws InvalidProblem / ParseError.
LinearOdeProblem parse_problem_text(const std::string& text, const std::string& name);
/// Reads and parses a problem file. Throws IoError when unreadable.
LinearOdeProblem load_problem_file(const std::string& path);

}  // namespace odecert
