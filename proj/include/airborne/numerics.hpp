#pragma once

#include <cstddef>
#include <vector>

#include "airborne/errors.hpp"

namespace airborne::numerics {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sized for this problem: tens of rows, a handful
/// of columns; everything is unblocked and allocation-simple.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    /// Assemble from equally sized column vectors.
    static Matrix from_columns(const std::vector<Vector>& columns);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector column(std::size_t j) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    Vector data_;
};

double dot(const Vector& a, const Vector& b);

/// A · x
Vector matvec(const Matrix& A, const Vector& x);
/// Aᵀ · x
Vector matvec_transposed(const Matrix& A, const Vector& x);

/// XᵀX (symmetric by construction: mirrored entries are stored once and copied).
Matrix gram(const Matrix& X);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// A pivot at or below 1e-12 · max(diag) throws NotPositiveDefinite, which is
/// how collinear regressors or instruments surface.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const Matrix& A);
    Vector solve(const Vector& b) const;
    Matrix inverse() const;
    std::size_t dim() const { return lower_.rows(); }

private:
    Matrix lower_;
};

Vector solve_spd(const Matrix& A, const Vector& b);

/// P_W v where P_W = W (WᵀW)⁻¹ Wᵀ, computed by solve; the T×T projection
/// matrix is never formed.
Vector project(const Matrix& W, const Vector& v);

/// (I − P_W) v
Vector annihilate(const Matrix& W, const Vector& v);

// --- distribution kernels ---------------------------------------------------

double std_normal_cdf(double x);

/// Inverse standard normal CDF; DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// Chi-square CDF with one degree of freedom (equals 2·Φ(√x) − 1 for x ≥ 0).
double chi2_cdf_1df(double x);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided Student-t tail probability P(|T_dof| ≥ |t|).
double student_t_two_sided_p(double t, double dof);

namespace detail {
/// Rational approximation to the normal quantile (|error| < 1.2e-9), the fast
/// path used for Monte-Carlo sampling; std_normal_quantile refines it.
double acklam_quantile(double p);
} // namespace detail

} // namespace airborne::numerics
