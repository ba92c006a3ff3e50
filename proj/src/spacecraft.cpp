#include "itc/spacecraft.hpp"

#include <cmath>
#include <string>

#include "itc/controllers.hpp"
#include "itc/errors.hpp"

namespace itc::spacecraft {

CylState CylState::from_state(const State& x) {
    if (x.size() != 6) {
        throw Error(ErrorCode::InvalidArgument, "CylState: expected a 6-dimensional state");
    }
    return CylState{x[0], x[1], x[2], x[3], x[4], x[5]};
}

State CylState::to_state() const { return State{r, theta, z, r_dot, theta_dot, z_dot}; }

double OrbitParams::omega_ref() const { return std::sqrt(mu / (r_des * r_des * r_des)); }

void OrbitParams::validate() const {
    if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "OrbitParams: mu must be positive");
    if (!(r_des > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "OrbitParams: r_des must be positive");
    }
    if (!(r_min > 0.0) || !(r_min < r_des)) {
        throw Error(ErrorCode::InvalidArgument,
                    "OrbitParams: r_min must satisfy 0 < r_min < r_des");
    }
}

State dynamics(const CylState& x, const Input& u, const OrbitParams& params) {
    if (!(x.r > 0.0)) {
        throw Error(ErrorCode::DomainError,
                    "spacecraft dynamics: r = " + std::to_string(x.r) + " <= 0");
    }
    const double rz2 = x.r * x.r + x.z * x.z;
    const double grav = params.mu / (rz2 * std::sqrt(rz2));  // mu / (r^2+z^2)^{3/2}
    return State{
        x.r_dot,
        x.theta_dot,
        x.z_dot,
        x.r * x.theta_dot * x.theta_dot - grav * x.r + u[0],
        -(2.0 / x.r) * x.r_dot * x.theta_dot + u[1] / x.r,
        -grav * x.z + u[2],
    };
}

State output_eta(const CylState& x, double t, const OrbitParams& params) {
    const double w = params.omega_ref();
    return State{
        x.r - params.r_des, x.theta - (params.theta0 + w * t), x.z,
        x.r_dot,            x.theta_dot - w,                   x.z_dot,
    };
}

std::pair<State, Matrix> decoupling(const CylState& x, const OrbitParams& params) {
    if (!(x.r > 0.0)) {
        throw Error(ErrorCode::DomainError,
                    "spacecraft decoupling: r = " + std::to_string(x.r) + " <= 0");
    }
    const double rz2 = x.r * x.r + x.z * x.z;
    const double grav = params.mu / (rz2 * std::sqrt(rz2));
    State drift{
        x.r * x.theta_dot * x.theta_dot - grav * x.r,
        -(2.0 / x.r) * x.r_dot * x.theta_dot,
        -grav * x.z,
    };
    Matrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0 / x.r;
    d(2, 2) = 1.0;
    return {std::move(drift), std::move(d)};
}

Input fl_input(const CylState& x, const State& v, const OrbitParams& params) {
    const auto [drift, d] = decoupling(x, params);
    // D = diag(1, 1/r, 1), so D^{-1} scales the second channel by r.
    return Input{
        v[0] - drift[0],
        x.r * (v[1] - drift[1]),
        v[2] - drift[2],
    };
}

GainMatrices design_gains(double kp, double kd, const Matrix& q) {
    if (!(kp > 0.0) || !(kd > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "design_gains: kp and kd must be positive");
    }
    GainMatrices g{Matrix(6, 6), Matrix(6, 3), Matrix(3, 6), q, Matrix(6, 6), 0.0};
    for (std::size_t i = 0; i < 3; ++i) {
        g.a(i, i + 3) = 1.0;
        g.b(i + 3, i) = 1.0;
        g.k(i, i) = -kp;
        g.k(i, i + 3) = -kd;
    }
    const Matrix a_cl = g.a + g.b * g.k;
    g.p = solve_ctle(a_cl, q);  // throws NotHurwitz if it ever fails
    g.q_min_eig = spd_min_eigenvalue(q);
    return g;
}

namespace {

// Shared pieces of Vdot = 2 (P eta).(A eta) + 2 w.v, with w = B^T P eta and
// v = drift + D u the mapped auxiliary input.
struct ClfTerms {
    State eta;
    State p_eta;
    double quad_a = 0.0;   // eta^T (A^T P + P A) eta
    double quad_q = 0.0;   // eta^T Q eta
    State w;               // B^T P eta (3-vector)
    State drift;           // output drift
    Matrix dec;            // decoupling matrix
};

ClfTerms clf_terms(const CylState& x, double t, const GainMatrices& gains,
                   const OrbitParams& params) {
    ClfTerms terms;
    terms.eta = output_eta(x, t, params);
    terms.p_eta = gains.p.apply(terms.eta);
    State a_eta = gains.a.apply(terms.eta);
    terms.quad_a = 2.0 * dot(terms.p_eta, a_eta);
    terms.quad_q = dot(terms.eta, gains.q.apply(terms.eta));
    terms.w = State{terms.p_eta[3], terms.p_eta[4], terms.p_eta[5]};
    auto [drift, dec] = decoupling(x, params);
    terms.drift = std::move(drift);
    terms.dec = std::move(dec);
    return terms;
}

}  // namespace

std::pair<double, double> clf_value_and_rate(const CylState& x, const Input& u, double t,
                                             const GainMatrices& gains,
                                             const OrbitParams& params) {
    const ClfTerms terms = clf_terms(x, t, gains, params);
    const double v_val = dot(terms.eta, terms.p_eta);
    const State mapped = terms.dec.apply(State{u[0], u[1], u[2]});
    double v_aux = 0.0;
    for (std::size_t i = 0; i < 3; ++i) v_aux += terms.w[i] * (terms.drift[i] + mapped[i]);
    return {v_val, terms.quad_a + 2.0 * v_aux};
}

Input controller(const CylState& x, double t, const GainMatrices& gains,
                 const OrbitParams& params) {
    const ClfTerms terms = clf_terms(x, t, gains, params);
    AffineConstraint c;
    c.p = terms.quad_a + terms.quad_q;
    for (std::size_t i = 0; i < 3; ++i) c.p += 2.0 * terms.w[i] * terms.drift[i];
    // q^T u = 2 w . (D u); D is diagonal.
    c.q = Input{2.0 * terms.w[0] * terms.dec(0, 0), 2.0 * terms.w[1] * terms.dec(1, 1),
                2.0 * terms.w[2] * terms.dec(2, 2)};
    try {
        return min_norm_qp(c);
    } catch (const Error& e) {
        throw Error(ErrorCode::InfeasibleConstraint,
                    std::string("spacecraft controller singularity at r = ") +
                        std::to_string(x.r) + ", t = " + std::to_string(t) + ": " + e.what(),
                    t);
    }
}

Scenario make_scenario(const GainMatrices& gains, const OrbitParams& params) {
    params.validate();
    Scenario sc;
    sc.params = params;
    sc.gains = gains;

    sc.field = [params](const State& xs, const Input& u, double) {
        const CylState x = CylState::from_state(xs);
        if (!(x.r > params.r_min)) {
            throw Error(ErrorCode::DomainError,
                        "spacecraft crash guard: r = " + std::to_string(x.r) +
                            " <= r_min = " + std::to_string(params.r_min));
        }
        return dynamics(x, u, params);
    };
    sc.controller = [gains, params](const State& xs, double t) {
        return controller(CylState::from_state(xs), t, gains, params);
    };

    const double w_ref = params.omega_ref();
    sc.cert = IssCertificate{
        .value =
            [gains, params](const State& xs, double t) {
                const State eta = output_eta(CylState::from_state(xs), t, params);
                return dot(eta, gains.p.apply(eta));
            },
        .grad =
            [gains, params](const State& xs, double t) {
                // eta = x - x_ref(t), so dV/dx = 2 P eta.
                const State eta = output_eta(CylState::from_state(xs), t, params);
                State g = gains.p.apply(eta);
                for (double& v : g) v *= 2.0;
                return g;
            },
        .partial_t =
            [gains, params, w_ref](const State& xs, double t) {
                // d eta/dt = -(0, omega_ref, 0, 0, 0, 0).
                const State eta = output_eta(CylState::from_state(xs), t, params);
                return -2.0 * w_ref * gains.p.apply(eta)[1];
            },
        .alpha = ClassKFn(gains.q_min_eig, 2.0),
        .gamma = std::nullopt,
        .alpha_term =
            [gains, params](const State& xs, double t) {
                const State eta = output_eta(CylState::from_state(xs), t, params);
                return dot(eta, gains.q.apply(eta));
            },
        .alpha_lo = std::nullopt,
        .alpha_hi = std::nullopt,
    };
    return sc;
}

State reference_state(double t, const OrbitParams& params) {
    const double w = params.omega_ref();
    return State{params.r_des, params.theta0 + w * t, 0.0, 0.0, w, 0.0};
}

}  // namespace itc::spacecraft
