#include "itc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace itc {

ClassKFn::ClassKFn(double coefficient, double exponent) : c_(coefficient), p_(exponent) {
    if (!(c_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "ClassKFn: coefficient must be positive");
    }
    if (!(p_ >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "ClassKFn: exponent must be >= 1");
    }
}

double ClassKFn::eval(double s) const {
    if (s == 0.0) return 0.0;
    const double v = c_ * std::pow(std::abs(s), p_);
    return s > 0.0 ? v : -v;
}

double ClassKFn::inverse(double s) const {
    if (s == 0.0) return 0.0;
    const double v = std::pow(std::abs(s) / c_, 1.0 / p_);
    return s > 0.0 ? v : -v;
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values)
    : rows_(rows), cols_(cols), a_(values) {
    if (a_.size() != rows * cols) {
        throw Error(ErrorCode::InvalidArgument, "Matrix: initializer size mismatch");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw Error(ErrorCode::InvalidArgument, "Matrix multiply: dimension mismatch");
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += aik * rhs(k, j);
            }
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw Error(ErrorCode::InvalidArgument, "Matrix add: dimension mismatch");
    }
    Matrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw Error(ErrorCode::InvalidArgument, "Matrix subtract: dimension mismatch");
    }
    Matrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
}

State Matrix::apply(const State& v) const {
    if (v.size() != cols_) {
        throw Error(ErrorCode::InvalidArgument, "Matrix apply: dimension mismatch");
    }
    State out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

std::optional<Matrix> Matrix::cholesky() const {
    if (rows_ != cols_) return std::nullopt;
    const std::size_t n = rows_;
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = (*this)(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) return std::nullopt;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

State Matrix::solve(Matrix a, State b) {
    if (a.rows_ != a.cols_ || b.size() != a.rows_) {
        throw Error(ErrorCode::InvalidArgument, "Matrix solve: dimension mismatch");
    }
    const std::size_t n = a.rows_;
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) {
            throw Error(ErrorCode::DomainError, "Matrix solve: singular system");
        }
        if (pivot != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / a(col, col);
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
            b[r] -= factor * b[col];
        }
    }
    State x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

double spd_min_eigenvalue(const Matrix& q, double tol) {
    if (q.rows() != q.cols()) {
        throw Error(ErrorCode::InvalidArgument, "spd_min_eigenvalue: square matrix required");
    }
    if (!q.is_spd()) {
        throw Error(ErrorCode::InvalidArgument, "spd_min_eigenvalue: matrix is not SPD");
    }
    // lambda_min is the largest s with Q - s*I still positive definite.
    double hi = q(0, 0);
    for (std::size_t i = 1; i < q.rows(); ++i) hi = std::min(hi, q(i, i));
    double lo = 0.0;
    const Matrix eye = Matrix::identity(q.rows());
    while (hi - lo > tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        Matrix shifted = q;
        for (std::size_t i = 0; i < q.rows(); ++i) shifted(i, i) -= mid;
        if (shifted.is_spd()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

State rk4_step(const VectorField& field, const State& x, double t, double dt) {
    const std::size_t n = x.size();
    const State k1 = field(t, x);
    State tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const State k2 = field(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const State k3 = field(t + 0.5 * dt, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    const State k4 = field(t + dt, tmp);
    State out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

std::vector<std::pair<double, State>> rk4_integrate(const VectorField& field, const State& x0,
                                                    double t0, double dt, std::size_t n_steps) {
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "rk4_integrate: dt must be positive");
    }
    std::vector<std::pair<double, State>> samples;
    samples.reserve(n_steps + 1);
    samples.emplace_back(t0, x0);
    State x = x0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        x = rk4_step(field, x, t, dt);
        if (!all_finite(x)) {
            throw Error(ErrorCode::IntegrationDiverged,
                        "rk4_integrate: non-finite state at t = " + std::to_string(t + dt), t);
        }
        samples.emplace_back(t0 + static_cast<double>(k + 1) * dt, x);
    }
    return samples;
}

double bisect_event(const std::function<double(double)>& residual, double t_lo, double t_hi,
                    double tol) {
    if (!(tol > 0.0) || !(t_hi >= t_lo)) {
        throw Error(ErrorCode::InvalidArgument, "bisect_event: bad interval or tolerance");
    }
    double f_lo = residual(t_lo);
    double f_hi = residual(t_hi);
    if (f_lo == 0.0) return t_lo;
    if (f_hi == 0.0) return t_hi;
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw Error(ErrorCode::BracketInvalid, "bisect_event: endpoints do not bracket a sign change");
    }
    while (t_hi - t_lo > tol) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (mid <= t_lo || mid >= t_hi) break;  // interval at floating-point resolution
        const double f_mid = residual(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            t_lo = mid;
            f_lo = f_mid;
        } else {
            t_hi = mid;
        }
    }
    return 0.5 * (t_lo + t_hi);
}

Matrix solve_ctle(const Matrix& a_cl, const Matrix& q) {
    const std::size_t n = a_cl.rows();
    if (a_cl.cols() != n || q.rows() != n || q.cols() != n) {
        throw Error(ErrorCode::InvalidArgument, "solve_ctle: square matrices of equal size required");
    }
    if (!q.is_spd()) {
        throw Error(ErrorCode::InvalidArgument, "solve_ctle: Q must be SPD");
    }
    // Row-major vectorization of A^T P + P A = -Q: unknown p[(i,j)] = P(i,j).
    const std::size_t m = n * n;
    Matrix sys(m, m);
    State rhs(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = i * n + j;
            rhs[row] = -q(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                sys(row, k * n + j) += a_cl(k, i);  // (A^T P)(i,j) term
                sys(row, i * n + k) += a_cl(k, j);  // (P A)(i,j) term
            }
        }
    }
    State p_vec;
    try {
        p_vec = Matrix::solve(sys, rhs);
    } catch (const Error&) {
        throw Error(ErrorCode::NotHurwitz, "solve_ctle: vectorized Lyapunov system is singular");
    }
    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) p(i, j) = p_vec[i * n + j];
    }
    // Symmetrize; the exact solution is symmetric for symmetric Q.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = s;
            p(j, i) = s;
        }
    }
    if (!p.is_spd()) {
        throw Error(ErrorCode::NotHurwitz, "solve_ctle: P is not SPD (A_cl is not Hurwitz)");
    }
    const Matrix residual = a_cl.transpose() * p + p * a_cl + q;
    if (residual.frobenius_norm() > 1e-10 * q.frobenius_norm()) {
        throw Error(ErrorCode::NotHurwitz, "solve_ctle: residual exceeds tolerance");
    }
    return p;
}

bool is_hurwitz(const Matrix& a_cl) {
    try {
        (void)solve_ctle(a_cl, Matrix::identity(a_cl.rows()));
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace itc
