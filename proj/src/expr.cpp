#include "odecert/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace odecert {

namespace {

double pow_int(double t, unsigned p) {
    double r = 1.0;
    for (unsigned i = 0; i < p; ++i) r *= t;
    return r;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Merge terms sharing a shape: Poly keyed by p, the rest by (kind, w, phase)
// with exact equality. Zero-coefficient terms are dropped.
std::vector<Term> fold(std::vector<Term> in) {
    std::vector<Term> out;
    for (const Term& t : in) {
        if (t.c == 0.0) continue;
        bool merged = false;
        for (Term& o : out) {
            if (o.kind != t.kind) continue;
            if (t.kind == Term::Kind::Poly ? (o.p == t.p)
                                           : (o.w == t.w && o.phase == t.phase)) {
                o.c += t.c;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(t);
    }
    std::vector<Term> clean;
    for (const Term& t : out)
        if (t.c != 0.0) clean.push_back(t);
    return clean;
}

}  // namespace

CoeffExpr CoeffExpr::constant(double c) { return poly(c, 0); }

CoeffExpr CoeffExpr::poly(double c, unsigned p) {
    if (c == 0.0) return CoeffExpr{};
    Term t;
    t.kind = Term::Kind::Poly;
    t.c = c;
    t.p = p;
    return CoeffExpr({t});
}

CoeffExpr CoeffExpr::sinusoid(Term::Kind kind, double c, double w, double phase) {
    if (c == 0.0) return CoeffExpr{};
    Term t;
    t.kind = kind;
    t.c = c;
    t.w = w;
    t.phase = phase;
    return CoeffExpr({t});
}

double CoeffExpr::value(double t) const {
    double s = 0.0;
    for (const Term& tm : terms_) {
        switch (tm.kind) {
            case Term::Kind::Poly: s += tm.c * pow_int(t, tm.p); break;
            case Term::Kind::Sin: s += tm.c * std::sin(tm.w * t + tm.phase); break;
            case Term::Kind::Cos: s += tm.c * std::cos(tm.w * t + tm.phase); break;
            case Term::Kind::Exp: s += tm.c * std::exp(tm.w * t + tm.phase); break;
        }
    }
    return s;
}

CoeffExpr CoeffExpr::derivative() const {
    std::vector<Term> out;
    for (const Term& tm : terms_) {
        Term d = tm;
        switch (tm.kind) {
            case Term::Kind::Poly:
                if (tm.p == 0) continue;
                d.c = tm.c * tm.p;
                d.p = tm.p - 1;
                break;
            case Term::Kind::Sin:
                d.kind = Term::Kind::Cos;
                d.c = tm.c * tm.w;
                break;
            case Term::Kind::Cos:
                d.kind = Term::Kind::Sin;
                d.c = -tm.c * tm.w;
                break;
            case Term::Kind::Exp:
                d.c = tm.c * tm.w;
                break;
        }
        out.push_back(d);
    }
    return CoeffExpr(fold(std::move(out)));
}

CoeffExpr CoeffExpr::operator+(const CoeffExpr& other) const {
    std::vector<Term> out = terms_;
    out.insert(out.end(), other.terms_.begin(), other.terms_.end());
    return CoeffExpr(fold(std::move(out)));
}

CoeffExpr CoeffExpr::operator-(const CoeffExpr& other) const {
    return *this + other.scaled(-1.0);
}

CoeffExpr CoeffExpr::scaled(double s) const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.c *= s;
    return CoeffExpr(fold(std::move(out)));
}

namespace {

// Product of two terms inside the language. Sin/cos pairs rewrite through
// the product-to-sum identities; t^p (p > 0) against a sinusoid or
// exponential, and exp against trig, have no term form.
void term_product(const Term& a, const Term& b, std::vector<Term>& out) {
    const double k = a.c * b.c;
    using K = Term::Kind;
    if (a.kind == K::Poly && b.kind == K::Poly) {
        Term t;
        t.kind = K::Poly;
        t.c = k;
        t.p = a.p + b.p;
        out.push_back(t);
        return;
    }
    if (a.kind == K::Poly || b.kind == K::Poly) {
        const Term& pol = (a.kind == K::Poly) ? a : b;
        const Term& oth = (a.kind == K::Poly) ? b : a;
        if (pol.p > 0)
            throw UnrepresentableProduct("t^" + std::to_string(pol.p) +
                                         " times a sinusoid or exponential has no term form");
        Term t = oth;
        t.c = k;
        out.push_back(t);
        return;
    }
    if (a.kind == K::Exp && b.kind == K::Exp) {
        Term t = a;
        t.c = k;
        t.w = a.w + b.w;
        t.phase = a.phase + b.phase;
        out.push_back(t);
        return;
    }
    if (a.kind == K::Exp || b.kind == K::Exp)
        throw UnrepresentableProduct("exp times sin/cos has no term form");
    // both trig
    const double wm = a.w - b.w, pm = a.phase - b.phase;
    const double wp = a.w + b.w, pp = a.phase + b.phase;
    Term u, v;
    u.c = 0.5 * k;
    v.c = 0.5 * k;
    u.w = wm;
    u.phase = pm;
    v.w = wp;
    v.phase = pp;
    if (a.kind == K::Sin && b.kind == K::Sin) {
        // sin sin = (cos(a-b) - cos(a+b)) / 2
        u.kind = K::Cos;
        v.kind = K::Cos;
        v.c = -v.c;
    } else if (a.kind == K::Cos && b.kind == K::Cos) {
        // cos cos = (cos(a-b) + cos(a+b)) / 2
        u.kind = K::Cos;
        v.kind = K::Cos;
    } else if (a.kind == K::Sin && b.kind == K::Cos) {
        // sin cos = (sin(a+b) + sin(a-b)) / 2
        u.kind = K::Sin;
        v.kind = K::Sin;
    } else {
        // cos sin = (sin(a+b) - sin(a-b)) / 2
        u.kind = K::Sin;
        v.kind = K::Sin;
        u.c = -u.c;
    }
    out.push_back(u);
    out.push_back(v);
}

}  // namespace

CoeffExpr CoeffExpr::operator*(const CoeffExpr& other) const {
    std::vector<Term> out;
    for (const Term& a : terms_)
        for (const Term& b : other.terms_) term_product(a, b, out);
    return CoeffExpr(fold(std::move(out)));
}

std::string CoeffExpr::render() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const Term& t : terms_) {
        double c = t.c;
        if (!first) {
            s += (c < 0.0) ? " - " : " + ";
            c = std::fabs(c);
        }
        first = false;
        switch (t.kind) {
            case Term::Kind::Poly:
                s += fmt(c);
                if (t.p >= 1) s += "*t";
                if (t.p >= 2) s += "^" + std::to_string(t.p);
                break;
            case Term::Kind::Sin:
            case Term::Kind::Cos:
            case Term::Kind::Exp: {
                const char* fn = (t.kind == Term::Kind::Sin)   ? "sin"
                                 : (t.kind == Term::Kind::Cos) ? "cos"
                                                               : "exp";
                s += fmt(c);
                s += "*";
                s += fn;
                s += "(" + fmt(t.w) + "*t";
                if (t.phase > 0.0)
                    s += "+" + fmt(t.phase);
                else if (t.phase < 0.0)
                    s += "-" + fmt(-t.phase);
                s += ")";
                break;
            }
        }
    }
    return s;
}

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& src) : s_(src) {}

    CoeffExpr run() {
        skip_ws();
        if (eof()) fail("expected expression");
        std::vector<Term> terms;
        double sign = at_sign() ? take_sign() : 1.0;
        term(terms, sign);
        skip_ws();
        while (!eof()) {
            if (!at_sign()) fail("expected '+' or '-' between terms");
            const double sg = take_sign();
            term(terms, sg);
            skip_ws();
        }
        return CoeffExpr(fold(std::move(terms)));
    }

private:
    [[noreturn]] void fail(const std::string& what) { throw ParseError(pos_, what); }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[pos_]; }

    void skip_ws() {
        while (!eof() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    // ASCII '-' or the UTF-8 minus sign U+2212 (0xE2 0x88 0x92)
    bool at_minus() const {
        if (peek() == '-') return true;
        return pos_ + 2 < s_.size() && static_cast<unsigned char>(s_[pos_]) == 0xE2 &&
               static_cast<unsigned char>(s_[pos_ + 1]) == 0x88 &&
               static_cast<unsigned char>(s_[pos_ + 2]) == 0x92;
    }
    bool at_sign() const { return peek() == '+' || at_minus(); }

    double take_sign() {
        skip_ws();
        if (peek() == '+') {
            ++pos_;
            return 1.0;
        }
        if (peek() == '-') {
            ++pos_;
            return -1.0;
        }
        if (at_minus()) {
            pos_ += 3;
            return -1.0;
        }
        fail("expected '+' or '-'");
    }

    void expect(char ch, const char* what) {
        skip_ws();
        if (peek() != ch) fail(what);
        ++pos_;
    }

    double number() {
        skip_ws();
        if (!(std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
            if (std::isalpha(static_cast<unsigned char>(peek()))) {
                const std::size_t at = pos_;
                const std::string name = ident();
                pos_ = at;
                fail("expected a number, found '" + name +
                     "' (function calls need a leading coefficient, like 1*sin(2*t))");
            }
            fail("expected number");
        }
        const char* start = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start || !std::isfinite(v)) fail("expected number");
        pos_ += static_cast<std::size_t>(end - start);
        return v;
    }

    unsigned integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer power");
        unsigned v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<unsigned>(s_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    std::string ident() {
        skip_ws();
        std::string name;
        while (!eof() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
            name += s_[pos_++];
        return name;
    }

    // t or t^p, with an already accumulated coefficient
    void tpow(std::vector<Term>& terms, double c) {
        ++pos_;  // consume 't'
        unsigned p = 1;
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            p = integer();
        }
        Term t;
        t.kind = Term::Kind::Poly;
        t.c = c;
        t.p = p;
        terms.push_back(t);
    }

    // sin | cos | exp "(" [sign] number "*" "t" [sign number] ")"
    void call(std::vector<Term>& terms, double c) {
        const std::size_t at = pos_;
        const std::string name = ident();
        Term::Kind kind;
        if (name == "sin")
            kind = Term::Kind::Sin;
        else if (name == "cos")
            kind = Term::Kind::Cos;
        else if (name == "exp")
            kind = Term::Kind::Exp;
        else
            throw ParseError(at, "unknown function '" + name + "', expected sin, cos or exp");
        expect('(', "expected '(' after function name");
        skip_ws();
        double wsign = 1.0;
        if (at_sign()) wsign = take_sign();
        const double w = wsign * number();
        expect('*', "expected '*' between frequency and t");
        skip_ws();
        if (peek() != 't') fail("expected 't' inside function argument");
        ++pos_;
        double phase = 0.0;
        skip_ws();
        if (at_sign()) {
            const double psign = take_sign();
            phase = psign * number();
        }
        expect(')', "expected ')'");
        Term t;
        t.kind = kind;
        t.c = c;
        t.w = w;
        t.phase = phase;
        terms.push_back(t);
    }

    // number ("*" number)* ["*" (tpow | call)] | tpow
    void term(std::vector<Term>& terms, double sign) {
        skip_ws();
        if (peek() == 't') {
            tpow(terms, sign);
            return;
        }
        double c = sign * number();
        for (;;) {
            skip_ws();
            if (peek() != '*') {
                Term t;
                t.kind = Term::Kind::Poly;
                t.c = c;
                t.p = 0;
                terms.push_back(t);
                return;
            }
            ++pos_;  // consume '*'
            skip_ws();
            if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
                c *= number();
            } else if (peek() == 't') {
                tpow(terms, c);
                return;
            } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
                call(terms, c);
                return;
            } else {
                fail("expected number, 't' or function after '*'");
            }
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

CoeffExpr parse_expr(const std::string& src) { return ExprParser(src).run(); }

}  // namespace odecert
