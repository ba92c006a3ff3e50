#pragma once

#include <cstddef>
#include <limits>

#include "itc/certificates.hpp"
#include "itc/types.hpp"

namespace itc {

/// Trigger scheme parameters shared by the stabilization and safety modes.
/// eps_term and tol_inv are NaN by default, meaning "derive from the run":
/// eps_term = 1e-9 * V(x0) and tol_inv = 1e-6 * max(1, V(x0)).
struct TriggerConfig {
    double sigma = 0.5;                                        // robustness margin, in (0, 1)
    double t_max = std::numeric_limits<double>::infinity();    // maximum on-time, > 0
    double lambda = 0.1;                                       // spec decay rate, >= 0
    double kappa = 2.0;                                        // c_beta margin, > 1
    double c_min = 0.01;                                       // c_beta floor, > 0
    double theta = 0.5;                                        // safety margin, in (0, 1)
    double eps_term = std::numeric_limits<double>::quiet_NaN();  // termination level on V
    double tol_inv = std::numeric_limits<double>::quiet_NaN();   // invariant check slack

    /// Throws Error(InvalidArgument) naming the offending field.
    void validate() const;
};

enum class Mode { On, Off };

/// Per-phase bookkeeping owned by a single simulation run. x_held is the
/// sample frozen at the phase start and is meaningful in On mode; c_beta is
/// selected at each off event and is meaningful in Off mode. input_dim sizes
/// the zero input applied while the controller is off.
struct PhaseState {
    Mode mode = Mode::On;
    double t_phase_start = 0.0;
    State x_held;
    double c_beta = 0.0;
    std::size_t input_dim = 0;
};

/// Off-trigger residual (stabilization): LfV(x, u_held) + (1 - sigma) *
/// alpha-term. Negative at the phase start; the controller turns off at its
/// first zero, capped by t_max.
[[nodiscard]] double off_residual(const IssCertificate& cert, const ControlledField& system,
                                  const Controller& controller, const PhaseState& phase,
                                  const State& x, double t, double sigma);

/// On-trigger residual (stabilization): LfV(x, 0) - dS/dt - c_beta * (S - V).
/// Negative on [t_off, t_on); the controller turns back on at its first zero.
[[nodiscard]] double on_residual(const IssCertificate& cert, const PerformanceSpec& spec,
                                 const ControlledField& system, const PhaseState& phase,
                                 const State& x, double t);

/// Select c_beta at an off event: max(kappa * bound, c_min, kappa * lambda)
/// with bound = (LfV - dS/dt) / (S - V). Requires S > V strictly; throws
/// Error(PerformanceViolated) otherwise.
[[nodiscard]] double select_c_beta(double lfv_at_off, double dsdt_at_off, double s_at_off,
                                   double v_at_off, double kappa, double c_min, double lambda);

/// Off-trigger residual (safety): hdot(x, e_on, t) + omega(h) - theta * d.
/// Positive at the phase start; the controller turns off at its first zero,
/// capped by t_max.
[[nodiscard]] double safe_off_residual(const BarrierCertificate& cert, const PhaseState& phase,
                                       const State& x, double t);

/// On-trigger residual (safety): hdot(x, e_off, t) + c_beta * omega(h).
/// Positive on [t_off, t_on); the controller turns back on at its first zero.
[[nodiscard]] double safe_on_residual(const BarrierCertificate& cert, const PhaseState& phase,
                                      const State& x, double t);

/// Select c_beta at a safety off event: max(kappa * bound, c_min) with
/// bound = -hdot / omega(h). Requires omega(h) > 0; throws
/// Error(BoundaryContact) otherwise.
[[nodiscard]] double select_c_beta_safety(double hdot_at_off, double omega_h_at_off, double kappa,
                                          double c_min);

/// Held error at time t for a phase: x_held - x while on, -x while off.
[[nodiscard]] State held_error(const PhaseState& phase, const State& x);

}  // namespace itc
