#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "odecert/errors.hpp"

namespace odecert {

/// One term of a coefficient expression. Meaning by kind:
///   Poly: c * t^p          Sin: c * sin(w*t + phase)
///   Cos:  c * cos(w*t + phase)   Exp: c * exp(w*t + phase)
struct Term {
    enum class Kind { Poly, Sin, Cos, Exp };
    Kind kind = Kind::Poly;
    double c = 0.0;
    unsigned p = 0;      // Poly only
    double w = 0.0;      // oscillation / growth rate, non-Poly only
    double phase = 0.0;  // non-Poly only
};

/// Sum of terms in a small closed language: polynomials, sinusoids and real
/// exponentials. Closed under differentiation; closed under products except
/// for t^p (p > 0) against a sinusoid or exponential.
class CoeffExpr {
public:
    CoeffExpr() = default;
    explicit CoeffExpr(std::vector<Term> terms) : terms_(std::move(terms)) {}

    static CoeffExpr constant(double c);
    static CoeffExpr poly(double c, unsigned p);
    static CoeffExpr sinusoid(Term::Kind kind, double c, double w, double phase = 0.0);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double value(double t) const;
    /// Term-wise analytic derivative.
    CoeffExpr derivative() const;

    CoeffExpr operator+(const CoeffExpr& other) const;
    CoeffExpr operator-(const CoeffExpr& other) const;
    /// Product inside the language. Sin/cos products rewrite through the
    /// product-to-sum identities; throws UnrepresentableProduct when a
    /// t^p (p > 0) factor meets a sinusoid or exponential.
    CoeffExpr operator*(const CoeffExpr& other) const;
    CoeffExpr scaled(double s) const;

    /// Text form that parse_expr accepts back; numbers carry 17 significant
    /// digits so evaluation round-trips exactly.
    std::string render() const;

private:
    std::vector<Term> terms_;
};

/// Parses the coefficient grammar:
///   expr   := [sign] term (sign term)*
///   term   := number ("*" number)* ["*" (tpow | call)] | tpow
///   tpow   := "t" ["^" int]
///   call   := ("sin"|"cos"|"exp") "(" [sign] number "*" "t" [sign number] ")"
/// Both ASCII "-" and U+2212 act as minus. Whitespace is insignificant.
/// Errors carry the byte offset of the failure.
CoeffExpr parse_expr(const std::string& src);

}  // namespace odecert
