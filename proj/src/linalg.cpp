#include "odecert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace odecert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const Matrix& a, const char* op) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        std::ostringstream os;
        os << op << ": matrix must be square, got " << a.rows() << "x" << a.cols();
        throw DimensionMismatch(os.str());
    }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::operator*(const Vector& v) const {
    if (v.size() != cols_)
        throw DimensionMismatch("matrix-vector product: size mismatch");
    Vector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix Matrix::operator*(const Matrix& b) const {
    if (cols_ != b.rows_)
        throw DimensionMismatch("matrix product: inner dimension mismatch");
    Matrix out(rows_, b.cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
        throw DimensionMismatch("matrix sum: shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] += b.e_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
        throw DimensionMismatch("matrix difference: shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] -= b.e_[i];
    return out;
}

bool Matrix::all_finite() const {
    for (double x : e_)
        if (!std::isfinite(x)) return false;
    return true;
}

double inf_norm(const Matrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) row += std::fabs(a(i, j));
        best = std::max(best, row);
    }
    return best;
}

double inf_norm(const Vector& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::fabs(x));
    return best;
}

namespace {

struct LuFactors {
    Matrix lu;                       // packed unit-lower L and upper U
    std::vector<std::size_t> perm;   // row permutation applied to the input
};

// Doolittle LU with partial pivoting. In strict mode a pivot below
// 1e-13 * ||a||_inf raises SingularMatrix; in relaxed mode the pivot is
// floored in magnitude instead, which is what inverse iteration wants when
// factoring the (theoretically singular) shifted matrix.
LuFactors lu_factor(Matrix a, bool relaxed, double pivot_floor) {
    const std::size_t n = a.rows();
    const double singular_tol = 1e-13 * inf_norm(a);
    LuFactors f;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = std::fabs(a(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best < singular_tol || best == 0.0) {
            if (!relaxed)
                throw SingularMatrix("pivot " + std::to_string(best) +
                                     " below tolerance in column " + std::to_string(k));
            const double v = a(piv, k);
            a(piv, k) = (v < 0.0) ? -pivot_floor : pivot_floor;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        const double d = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a(i, k) / d;
            a(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

Vector lu_apply(const LuFactors& f, const Vector& b) {
    const std::size_t n = f.perm.size();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
        x[ii] = s / f.lu(ii, ii);
    }
    return x;
}

}  // namespace

Vector lu_solve(const Matrix& a, const Vector& b) {
    require_square(a, "lu_solve");
    if (b.size() != a.rows())
        throw DimensionMismatch("lu_solve: right-hand side size mismatch");
    LuFactors f = lu_factor(a, false, 0.0);
    return lu_apply(f, b);
}

Matrix inverse(const Matrix& a) {
    require_square(a, "inverse");
    const std::size_t n = a.rows();
    LuFactors f = lu_factor(a, false, 0.0);
    Matrix out(n, n, 0.0);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        Vector col = lu_apply(f, e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
    }
    return out;
}

namespace {

// Householder similarity reduction to upper Hessenberg form, in place.
// The orthogonal factor is not accumulated; eigenvectors are recovered later
// by inverse iteration on the original matrix.
void hessenberg_reduce(Matrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    Vector u(n, 0.0);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = k + 1;
        double scale = 0.0;
        for (std::size_t i = m; i < n; ++i) scale = std::max(scale, std::fabs(h(i, k)));
        if (scale == 0.0) continue;
        double xnorm2 = 0.0;
        for (std::size_t i = m; i < n; ++i) {
            u[i] = h(i, k) / scale;
            xnorm2 += u[i] * u[i];
        }
        double alpha = std::sqrt(xnorm2);
        if (u[m] > 0.0) alpha = -alpha;
        const double unorm2 = 2.0 * (xnorm2 - alpha * u[m]);
        if (unorm2 <= 0.0) continue;
        u[m] -= alpha;
        // left: H = (I - 2 u u^T / u^T u) applied to rows m..n-1
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = m; i < n; ++i) s += u[i] * h(i, j);
            s *= 2.0 / unorm2;
            for (std::size_t i = m; i < n; ++i) h(i, j) -= s * u[i];
        }
        // right: same reflector applied to columns m..n-1
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t j = m; j < n; ++j) s += h(r, j) * u[j];
            s *= 2.0 / unorm2;
            for (std::size_t j = m; j < n; ++j) h(r, j) -= s * u[j];
        }
        h(m, k) = alpha * scale;
        for (std::size_t i = m + 1; i < n; ++i) h(i, k) = 0.0;
    }
}

// Eigenvalues of an upper Hessenberg matrix by the implicit double-shift QR
// iteration (EISPACK hqr lineage). Fills wr/wi with the real and imaginary
// parts; returns false when the sweep cap is exhausted before deflation.
bool hqr_eigenvalues(Matrix& h, std::vector<double>& wr, std::vector<double>& wi,
                     long sweep_cap) {
    const int n = static_cast<int>(h.rows());
    wr.assign(n, 0.0);
    wi.assign(n, 0.0);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(h(i, j));
    if (anorm == 0.0) return true;  // zero matrix: spectrum is all zeros
    long sweeps = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::fabs(h(l, l - 1)) <= kEps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = h(nn, nn);
            if (l == nn) {  // single root deflates
                wr[nn] = x + t;
                wi[nn] = 0.0;
                --nn;
                break;
            }
            double y = h(nn - 1, nn - 1);
            double w = h(nn, nn - 1) * h(nn - 1, nn);
            if (l == nn - 1) {  // trailing 2x2 deflates
                double p = 0.5 * (y - x);
                double q = p * p + w;
                double z = std::sqrt(std::fabs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + ((p >= 0.0) ? z : -z);
                    wr[nn - 1] = wr[nn] = x + z;
                    if (z != 0.0) wr[nn] = x - w / z;
                    wi[nn - 1] = wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }
            if (++sweeps > sweep_cap) return false;
            if (its > 0 && its % 10 == 0) {  // exceptional shift
                t += x;
                for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                double s = std::fabs(h(nn, nn - 1)) + std::fabs(h(nn - 1, nn - 2));
                x = y = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++its;
            int m;
            double p = 0.0, q = 0.0, r = 0.0;
            for (m = nn - 2; m >= l; --m) {
                const double z = h(m, m);
                const double rr = x - z;
                const double ss = y - z;
                p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - rr - ss;
                r = h(m + 2, m + 1);
                const double s = std::fabs(p) + std::fabs(q) + std::fabs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                const double u = std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                const double v = std::fabs(p) *
                                 (std::fabs(h(m - 1, m - 1)) + std::fabs(z) +
                                  std::fabs(h(m + 1, m + 1)));
                if (u <= kEps * v) break;
            }
            for (int i = m + 2; i <= nn; ++i) {
                h(i, i - 2) = 0.0;
                if (i != m + 2) h(i, i - 3) = 0.0;
            }
            for (int k = m; k <= nn - 1; ++k) {
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
                    x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                double s = std::sqrt(p * p + q * q + r * r);
                if (p < 0.0) s = -s;
                if (k == m) {
                    if (l != m) h(k, k - 1) = -h(k, k - 1);
                } else {
                    h(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                const double z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {
                    double pp = h(k, j) + q * h(k + 1, j);
                    if (k != nn - 1) pp += r * h(k + 2, j);
                    h(k, j) -= pp * x;
                    h(k + 1, j) -= pp * y;
                    if (k != nn - 1) h(k + 2, j) -= pp * z;
                }
                const int mmin = std::min(nn, k + 3);
                for (int i = l; i <= mmin; ++i) {
                    double pp = x * h(i, k) + y * h(i, k + 1);
                    if (k != nn - 1) pp += z * h(i, k + 2);
                    h(i, k) -= pp;
                    h(i, k + 1) -= pp * q;
                    if (k != nn - 1) h(i, k + 2) -= pp * r;
                }
            }
        } while (l < nn - 1);
    }
    return true;
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

// Remove components along the (unit 2-norm) vectors in basis.
void deflate_against(Vector& v, const std::vector<Vector>& basis) {
    for (const Vector& u : basis) {
        const double c = dot(u, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
}

// One eigenvector of a for the (converged) eigenvalue lambda, by inverse
// iteration on the shifted matrix. Vectors already accepted for the same
// eigenvalue cluster are deflated out so repeated eigenvalues with a full
// eigenspace still yield independent columns.
Vector inverse_iteration(const Matrix& a, double lambda,
                         const std::vector<Vector>& cluster_prior) {
    const std::size_t n = a.rows();
    const double scale = std::max(1.0, inf_norm(a));
    Matrix b = a;
    for (std::size_t i = 0; i < n; ++i) b(i, i) -= lambda;
    LuFactors f = lu_factor(std::move(b), true, kEps * scale);

    Vector best;
    double best_res = std::numeric_limits<double>::infinity();
    const double small_res = 64.0 * kEps * scale;
    for (std::size_t attempt = 0; attempt <= n; ++attempt) {
        Vector v(n, 0.0);
        if (attempt == 0)
            v.assign(n, 1.0);
        else
            v[attempt - 1] = 1.0;
        deflate_against(v, cluster_prior);
        double nrm = norm2(v);
        if (nrm < 1e-3) continue;  // start vector swallowed by the deflation
        for (double& x : v) x /= nrm;
        for (int iter = 0; iter < 4; ++iter) {
            v = lu_apply(f, v);
            deflate_against(v, cluster_prior);
            nrm = norm2(v);
            if (nrm == 0.0 || !std::isfinite(nrm)) break;
            for (double& x : v) x /= nrm;
            Vector av = a * v;
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                res = std::max(res, std::fabs(av[i] - lambda * v[i]));
            if (res < best_res) {
                best_res = res;
                best = v;
            }
            if (res <= small_res) return best;
        }
        if (best_res <= small_res) break;
    }
    if (best.empty())
        throw DefectiveMatrix("inverse iteration produced no usable eigenvector for lambda=" +
                              std::to_string(lambda));
    return best;
}

}  // namespace

EigenDecomposition real_eigen(const Matrix& a, double tol) {
    require_square(a, "real_eigen");
    if (!a.all_finite()) throw InvalidProblem("real_eigen: matrix has non-finite entries");
    const std::size_t n = a.rows();
    const double anorm = inf_norm(a);

    Matrix h = a;
    hessenberg_reduce(h);
    std::vector<double> wr, wi;
    if (!hqr_eigenvalues(h, wr, wi, 100L * static_cast<long>(n)))
        throw DefectiveMatrix("QR iteration did not converge within 100 n sweeps");

    const double imag_tol = tol * anorm;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(wi[i]) > imag_tol) {
            std::ostringstream os;
            os << "eigenvalue " << wr[i] << " + " << wi[i]
               << "i has imaginary part above tolerance " << imag_tol;
            throw ComplexSpectrum(os.str());
        }
    }

    // Stable descending sort keeps encounter order among ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return wr[i] > wr[j]; });

    EigenDecomposition d;
    d.lambdas.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.lambdas[i] = wr[order[i]];

    // Eigenvalues closer than cluster_tol share a deflation basis so that a
    // repeated eigenvalue with full geometric multiplicity still produces
    // independent columns.
    const double cluster_tol = 1e-8 * std::max(1.0, anorm);
    d.p = Matrix(n, n, 0.0);
    std::vector<Vector> cluster;  // unit 2-norm vectors of the current cluster
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && std::fabs(d.lambdas[i] - d.lambdas[i - 1]) > cluster_tol)
            cluster.clear();
        Vector v = inverse_iteration(a, d.lambdas[i], cluster);
        cluster.push_back(v);
        // Column scaling: unit infinity norm, sign anchored on the first
        // entry within roundoff of the largest magnitude (a hard argmax would
        // let a 1-ulp perturbation flip the sign of a tied column).
        double mx = 0.0;
        for (std::size_t r = 0; r < n; ++r) mx = std::max(mx, std::fabs(v[r]));
        std::size_t arg = 0;
        while (arg + 1 < n && std::fabs(v[arg]) < mx * (1.0 - 1e-12)) ++arg;
        const double s = (v[arg] < 0.0 ? -1.0 : 1.0) / mx;
        for (std::size_t r = 0; r < n; ++r) d.p(r, i) = v[r] * s;
    }

    try {
        d.p_inv = inverse(d.p);
    } catch (const SingularMatrix& e) {
        throw DefectiveMatrix(std::string("eigenvector matrix is singular: ") + e.what());
    }

    Matrix prod = d.p * d.p_inv;
    const Matrix id = Matrix::identity(n);
    if (inf_norm(prod - id) > 1e-10)
        throw DefectiveMatrix("P * P^-1 deviates from identity beyond 1e-10");

    Matrix sig_pinv = d.p_inv;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sig_pinv(i, j) *= d.lambdas[i];
    const Matrix recon = d.p * sig_pinv;
    if (inf_norm(a - recon) > 1e-10 * std::max(1.0, anorm))
        throw DefectiveMatrix("reconstruction P Sigma P^-1 deviates from the input beyond tolerance");

    return d;
}

}  // namespace odecert
