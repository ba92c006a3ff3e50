#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "itc/errors.hpp"
#include "itc/types.hpp"

namespace itc {

/// Power-law class-K_infinity function s -> c * s^p on s >= 0 (c > 0, p >= 1).
/// Evaluation is extended to negative arguments as an odd function so that
/// residuals stay continuous when a barrier value crosses zero numerically.
class ClassKFn {
public:
    ClassKFn() = default;  // identity map s -> s
    ClassKFn(double coefficient, double exponent);

    [[nodiscard]] double eval(double s) const;
    [[nodiscard]] double inverse(double s) const;

    [[nodiscard]] double coefficient() const { return c_; }
    [[nodiscard]] double exponent() const { return p_; }

private:
    double c_ = 1.0;
    double p_ = 1.0;
};

/// Row-major dense real matrix. All scenarios use n <= 6; the CTLE solve
/// peaks at 36x36.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values);

    [[nodiscard]] static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    [[nodiscard]] double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    [[nodiscard]] Matrix operator*(const Matrix& rhs) const;
    [[nodiscard]] Matrix operator+(const Matrix& rhs) const;
    [[nodiscard]] Matrix operator-(const Matrix& rhs) const;
    [[nodiscard]] Matrix transpose() const;

    /// Matrix-vector product.
    [[nodiscard]] State apply(const State& v) const;

    [[nodiscard]] double frobenius_norm() const;

    /// Lower Cholesky factor, or nullopt if the matrix is not SPD.
    [[nodiscard]] std::optional<Matrix> cholesky() const;
    [[nodiscard]] bool is_spd() const { return cholesky().has_value(); }

    /// Solve A x = b by Gaussian elimination with partial pivoting.
    /// Throws Error(NotHurwitz is NOT used here; throws InvalidArgument on
    /// dimension mismatch and DomainError on a singular system).
    [[nodiscard]] static State solve(Matrix a, State b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

/// Smallest eigenvalue of an SPD matrix, located by bisection on the
/// Cholesky test for Q - s*I (no general eigensolver needed).
[[nodiscard]] double spd_min_eigenvalue(const Matrix& q, double tol = 1e-12);

/// Time-dependent vector field xdot = f(t, x).
using VectorField = std::function<State(double, const State&)>;

/// One classic RK4 step of size dt from (t, x).
[[nodiscard]] State rk4_step(const VectorField& field, const State& x, double t, double dt);

/// Fixed-step RK4 over n_steps steps; returns n_steps+1 samples including
/// (t0, x0). Throws Error(IntegrationDiverged) carrying the last valid time
/// if the state goes non-finite.
[[nodiscard]] std::vector<std::pair<double, State>> rk4_integrate(
    const VectorField& field, const State& x0, double t0, double dt, std::size_t n_steps);

/// Locate a zero crossing of a continuous scalar residual on [t_lo, t_hi]
/// by interval halving, to within tol. The endpoints must bracket a sign
/// change (or one of them is an exact zero); otherwise Error(BracketInvalid).
[[nodiscard]] double bisect_event(const std::function<double(double)>& residual,
                                  double t_lo, double t_hi, double tol);

/// Solve the continuous-time Lyapunov equation A_cl^T P + P A_cl = -Q for
/// SPD Q, via Kronecker vectorization. Returns the symmetric SPD P; throws
/// Error(NotHurwitz) when the vectorized system is singular or P is not SPD
/// (P is SPD iff A_cl is Hurwitz, so this doubles as the Hurwitz test).
[[nodiscard]] Matrix solve_ctle(const Matrix& a_cl, const Matrix& q);

/// Lyapunov test for Hurwitz stability: true iff solve_ctle(a_cl, I)
/// produces an SPD solution.
[[nodiscard]] bool is_hurwitz(const Matrix& a_cl);

}  // namespace itc
