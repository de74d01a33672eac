#include "airborne/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "airborne/rng.hpp"

namespace airborne::numerics {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns) {
    if (columns.empty()) return {};
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw DomainError("from_columns: ragged column lengths");
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector matvec(const Matrix& A, const Vector& x) {
    Vector y(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& A, const Vector& x) {
    Vector y(A.cols(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) y[j] += A(i, j) * x[i];
    return y;
}

Matrix gram(const Matrix& X) {
    const std::size_t k = X.cols();
    Matrix G(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < X.rows(); ++i) s += X(i, a) * X(i, b);
            G(a, b) = s;
            G(b, a) = s;
        }
    }
    return G;
}

CholeskyFactor::CholeskyFactor(const Matrix& A) {
    const std::size_t n = A.rows();
    if (n == 0 || A.cols() != n) throw DomainError("cholesky: matrix must be square and nonempty");

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, A(i, i));
    const double tol = 1e-12 * max_diag;

    lower_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= lower_(j, k) * lower_(j, k);
        if (!(d > tol))
            throw NotPositiveDefinite("pivot " + std::to_string(d) + " at column " +
                                      std::to_string(j) + " (collinear columns?)");
        const double l = std::sqrt(d);
        lower_(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / l;
        }
    }
}

Vector CholeskyFactor::solve(const Vector& b) const {
    const std::size_t n = dim();
    if (b.size() != n) throw DomainError("cholesky solve: size mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * y[k];
        y[i] = s / lower_(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower_(k, ii) * x[k];
        x[ii] = s / lower_(ii, ii);
    }
    return x;
}

Matrix CholeskyFactor::inverse() const {
    const std::size_t n = dim();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        Vector col = solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return inv;
}

Vector solve_spd(const Matrix& A, const Vector& b) { return CholeskyFactor(A).solve(b); }

Vector project(const Matrix& W, const Vector& v) {
    if (W.rows() != v.size()) throw DomainError("project: row count must match vector length");
    const Vector wtv = matvec_transposed(W, v);
    const Vector coef = solve_spd(gram(W), wtv);
    return matvec(W, coef);
}

Vector annihilate(const Matrix& W, const Vector& v) {
    Vector p = project(W, v);
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - p[i];
    return r;
}

// --- distribution kernels ---------------------------------------------------

double std_normal_cdf(double x) {
    // erfc keeps full relative accuracy in the lower tail.
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double chi2_cdf_1df(double x) {
    if (x <= 0.0) return 0.0;
    return std::erf(std::sqrt(x / 2.0));
}

namespace detail {

double acklam_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace detail

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1)");
    double x = detail::acklam_quantile(p);
    // One Halley step against the exact CDF; skipped deep in the tails where
    // exp(x²/2) would overflow (the rational approximation is ample there).
    if (std::abs(x) < 37.0) {
        static const double sqrt_2pi = std::sqrt(2.0 * std::acos(-1.0));
        const double err = std_normal_cdf(x) - p;
        const double u = err * sqrt_2pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("incomplete beta: a, b must be positive");
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    // Continued fraction (modified Lentz); proper convergence needs
    // x < (a+1)/(a+b+2), otherwise use the symmetry I_x(a,b) = 1 − I_{1−x}(b,a).
    const auto cont_frac = [](double aa, double bb, double xx) {
        constexpr double tiny = 1e-300;
        constexpr double eps = 1e-15;
        const double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
        double c = 1.0;
        double d = 1.0 - qab * xx / qap;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m <= 300; ++m) {
            const double m2 = 2.0 * m;
            double aa_term = m * (bb - m) * xx / ((qam + m2) * (aa + m2));
            d = 1.0 + aa_term * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa_term / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            h *= d * c;
            aa_term = -(aa + m) * (qab + m) * xx / ((aa + m2) * (qap + m2));
            d = 1.0 + aa_term * d;
            if (std::abs(d) < tiny) d = tiny;
            c = 1.0 + aa_term / c;
            if (std::abs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::abs(del - 1.0) < eps) break;
        }
        return h;
    };

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * cont_frac(a, b, x) / a;
    return 1.0 - front * cont_frac(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw DomainError("student t: dof must be positive");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double x = dof / (dof + t * t);
    return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

} // namespace airborne::numerics

namespace airborne::rng {

double Stream::next_normal() { return numerics::detail::acklam_quantile(next_uniform()); }

} // namespace airborne::rng
