#pragma once

#include <cstddef>
#include <vector>

#include "odecert/errors.hpp"

namespace odecert {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Sized for the small systems this library
/// certifies (n rarely above 16), so no attempt is made at blocking or
/// sparsity.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), e_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    Vector operator*(const Vector& v) const;
    Matrix operator*(const Matrix& b) const;
    Matrix operator+(const Matrix& b) const;
    Matrix operator-(const Matrix& b) const;

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> e_;
};

/// Infinity norm: max over rows of the sum of absolute entries.
double inf_norm(const Matrix& a);
/// Infinity norm: max absolute entry.
double inf_norm(const Vector& v);

/// Solves a x = b by LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-13 * ||a||_inf.
Vector lu_solve(const Matrix& a, const Vector& b);

/// Inverse via LU, column by column. Same singularity rule as lu_solve.
Matrix inverse(const Matrix& a);

/// Real spectral decomposition a = P diag(lambdas) P^-1 with eigenvalues
/// sorted descending and every column of P scaled to unit infinity norm.
struct EigenDecomposition {
    std::vector<double> lambdas;
    Matrix p;
    Matrix p_inv;
};

/// Eigenvalues by Hessenberg reduction plus shifted QR, eigenvectors by
/// inverse iteration on the original matrix. Throws ComplexSpectrum when the
/// converged spectrum has an imaginary part above tol * ||a||_inf, and
/// DefectiveMatrix when no well-conditioned eigenbasis exists (or the QR
/// sweep cap of 100 n is hit).
EigenDecomposition real_eigen(const Matrix& a, double tol = 1e-9);

}  // namespace odecert
