#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>

#include "itc/errors.hpp"
#include "itc/sim_engine.hpp"
#include "itc/spacecraft.hpp"
#include "itc/triggers.hpp"

using namespace itc;
using namespace itc::spacecraft;

TEST_SUITE_BEGIN("spacecraft");

namespace {

const OrbitParams kParams{1.0, 1.0, 0.0, 0.1};

CylState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> height(-0.5, 0.5);
    std::uniform_real_distribution<double> rate(-1.0, 1.0);
    return CylState{radius(rng), angle(rng), height(rng), rate(rng), rate(rng), rate(rng)};
}

}  // namespace

TEST_CASE("circular-orbit equilibrium of the dynamics") {
    const CylState x{1.0, 0.7, 0.0, 0.0, 1.0, 0.0};
    const State d = dynamics(x, Input{0.0, 0.0, 0.0}, kParams);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == 0.0);
    CHECK(d[3] == doctest::Approx(0.0));  // r theta_dot^2 - mu/r^2 = 0
    CHECK(d[4] == 0.0);
    CHECK(d[5] == 0.0);
}

TEST_CASE("radial acceleration at rest follows the inverse square law") {
    const CylState x{2.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const State d = dynamics(x, Input{0.0, 0.0, 0.0}, kParams);
    CHECK(d[3] == doctest::Approx(-0.25));  // -mu * 2 / 8
    CHECK(d[4] == 0.0);
    CHECK(d[5] == 0.0);
}

TEST_CASE("vertical gravity is odd in z") {
    const double h = 0.3;
    const CylState up{1.0, 0.0, h, 0.0, 0.0, 0.0};
    const CylState down{1.0, 0.0, -h, 0.0, 0.0, 0.0};
    const State du = dynamics(up, Input{0.0, 0.0, 0.0}, kParams);
    const State dd = dynamics(down, Input{0.0, 0.0, 0.0}, kParams);
    CHECK(du[5] == doctest::Approx(-dd[5]));
    CHECK(du[5] < 0.0);
}

TEST_CASE("dynamics reject nonpositive radius") {
    try {
        (void)dynamics(CylState{0.0, 0, 0, 0, 0, 0}, Input{0, 0, 0}, kParams);
        FAIL("expected domain error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("tracking output vanishes on the nominal orbit") {
    for (double t : {0.0, 1.7, 42.0}) {
        const State eta = output_eta(CylState::from_state(reference_state(t, kParams)), t, kParams);
        for (double v : eta) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("tracking output picks up a radial offset") {
    const CylState x{1.1, 0.0, 0.0, 0.0, 1.0, 0.0};
    const State eta = output_eta(x, 0.0, kParams);
    CHECK(eta[0] == doctest::Approx(0.1));
    for (std::size_t i = 1; i < 6; ++i) CHECK(eta[i] == doctest::Approx(0.0));
}

TEST_CASE("the angle error is not wrapped") {
    const CylState x{1.0, 2.0 * std::numbers::pi, 0.0, 0.0, 1.0, 0.0};
    const State eta = output_eta(x, 0.0, kParams);
    CHECK(eta[1] == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("decoupling matrix and drift") {
    const CylState x{2.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const auto [drift, d] = decoupling(x, kParams);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(1, 1) == doctest::Approx(0.5));
    CHECK(d(2, 2) == 1.0);
    CHECK(d(0, 1) == 0.0);

    const auto [drift0, d0] =
        decoupling(CylState::from_state(reference_state(0.0, kParams)), kParams);
    for (double v : drift0) CHECK(v == doctest::Approx(0.0));

    // Invertibility on r > 0: the determinant is 1/r.
    std::mt19937_64 rng(51);
    for (int i = 0; i < 20; ++i) {
        const CylState xs = random_state(rng);
        const auto [dr, dm] = decoupling(xs, kParams);
        CHECK(dm(1, 1) == doctest::Approx(1.0 / xs.r));
        CHECK(dm(1, 1) != 0.0);
    }
}

TEST_CASE("feedback linearization renders ydotdot = v") {
    // Nominal orbit with v = 0 takes no effort.
    const CylState xr = CylState::from_state(reference_state(0.0, kParams));
    const Input u0 = fl_input(xr, State{0.0, 0.0, 0.0}, kParams);
    for (double v : u0) CHECK(v == doctest::Approx(0.0));

    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> vd(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const CylState x = random_state(rng);
        const State v{vd(rng), vd(rng), vd(rng)};
        const Input u = fl_input(x, v, kParams);
        const State d = dynamics(x, u, kParams);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(d[3 + k] - v[k]) <= 1e-9);
        }
    }
}

TEST_CASE("diagonal inverse of the decoupling matrix") {
    const CylState x{2.0, 0.3, 0.1, 0.2, 0.4, -0.1};
    const auto [drift, dm] = decoupling(x, kParams);
    const Input u = fl_input(x, State{0.0, 0.0, 0.0}, kParams);
    CHECK(u[0] == doctest::Approx(-drift[0]));
    CHECK(u[1] == doctest::Approx(-2.0 * drift[1]));
    CHECK(u[2] == doctest::Approx(-drift[2]));
}

TEST_CASE("gain design produces the hand-solved Lyapunov blocks") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(g.p(i, i) == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(g.p(i, i + 3) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(g.p(i + 3, i + 3) == doctest::Approx(0.5).epsilon(1e-12));
        for (std::size_t j = 0; j < 6; ++j) {
            if (j != i && j != i + 3) {
                CHECK(g.p(i, j) == doctest::Approx(0.0).epsilon(1e-12));
            }
        }
    }
    const Matrix a_cl = g.a + g.b * g.k;
    CHECK(is_hurwitz(a_cl));
    const Matrix residual = a_cl.transpose() * g.p + g.p * a_cl + g.q;
    CHECK(residual.frobenius_norm() <= 1e-10 * g.q.frobenius_norm());

    try {
        (void)design_gains(0.0, 2.0, Matrix::identity(6));
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("CLF value and rate") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const CylState xr = CylState::from_state(reference_state(0.0, kParams));
    const auto [v0, vdot0] = clf_value_and_rate(xr, Input{0.5, -0.2, 0.1}, 0.0, g, kParams);
    CHECK(v0 == doctest::Approx(0.0));
    CHECK(vdot0 == doctest::Approx(0.0));

    // u* = fl_input(x, K eta) achieves Vdot = -eta^T Q eta exactly.
    std::mt19937_64 rng(53);
    for (int i = 0; i < 100; ++i) {
        const CylState x = random_state(rng);
        const double t = 0.37;
        const State eta = output_eta(x, t, kParams);
        const State k_eta = g.k.apply(eta);
        const Input u_star = fl_input(x, k_eta, kParams);
        const auto [v, vdot] = clf_value_and_rate(x, u_star, t, g, kParams);
        const double eta_q_eta = dot(eta, g.q.apply(eta));
        CHECK(vdot == doctest::Approx(-eta_q_eta).epsilon(1e-9));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("CLF rate matches a finite difference along controlled flows") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const auto sc = make_scenario(g, kParams);
    std::mt19937_64 rng(54);
    const double delta = 1e-6;
    for (int i = 0; i < 30; ++i) {
        const CylState x = random_state(rng);
        const Input u{0.3, -0.1, 0.2};
        auto flow = [&](double t, const State& xs) { return sc.field(xs, u, t); };
        const double t0 = 1.1;
        const State fwd = rk4_step(flow, x.to_state(), t0, delta);
        const State bwd = rk4_step(flow, x.to_state(), t0, -delta);
        const double fd = (sc.cert.value(fwd, t0 + delta) - sc.cert.value(bwd, t0 - delta)) /
                          (2.0 * delta);
        const auto [v, vdot] = clf_value_and_rate(x, u, t0, g, kParams);
        CHECK(std::abs(fd - vdot) < 1e-4 * std::max(1.0, std::abs(vdot)));
        // The certificate wiring agrees with the direct expression.
        CHECK(lie_derivative_V(sc.field, sc.cert, x.to_state(), u, t0) ==
              doctest::Approx(vdot).epsilon(1e-9));
    }
}

TEST_CASE("QP controller is zero on the nominal orbit and meets its constraint") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const CylState xr = CylState::from_state(reference_state(2.0, kParams));
    const Input u0 = spacecraft::controller(xr, 2.0, g, kParams);
    for (double v : u0) CHECK(v == doctest::Approx(0.0));

    std::mt19937_64 rng(55);
    for (int i = 0; i < 100; ++i) {
        const CylState x = random_state(rng);
        const double t = 0.9;
        const Input u = spacecraft::controller(x, t, g, kParams);
        const State eta = output_eta(x, t, kParams);
        const double eta_q_eta = dot(eta, g.q.apply(eta));
        const auto [v, vdot] = clf_value_and_rate(x, u, t, g, kParams);
        CHECK(vdot <= -eta_q_eta + 1e-9);

        // Norm-minimality against the feasible feedback-linearizing input.
        const Input u_star = fl_input(x, g.k.apply(eta), kParams);
        CHECK(std::sqrt(dot(u, u)) <= std::sqrt(dot(u_star, u_star)) + 1e-9);
    }
}

TEST_CASE("trigger bundle residual at a fresh sample is -sigma * eta^T Q eta") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const auto sc = make_scenario(g, kParams);
    const double sigma = 0.5;
    std::mt19937_64 rng(56);
    for (int i = 0; i < 50; ++i) {
        const CylState x = random_state(rng);
        const double t = 0.4;
        const PhaseState phase{Mode::On, t, x.to_state(), 0.0, 3};
        const double r = off_residual(sc.cert, sc.field, sc.controller, phase, x.to_state(), t,
                                      sigma);
        const State eta = output_eta(x, t, kParams);
        const double eta_q_eta = dot(eta, g.q.apply(eta));
        // Equality when the QP constraint is active; below it otherwise.
        CHECK(r <= -sigma * eta_q_eta + 1e-9);
    }

    // Terminal on the nominal orbit.
    const State xr = reference_state(0.0, kParams);
    const PhaseState phase{Mode::On, 0.0, xr, 0.0, 3};
    CHECK(off_residual(sc.cert, sc.field, sc.controller, phase, xr, 0.0, sigma) ==
          doctest::Approx(0.0));
}

TEST_CASE("off-phase certificate rate matches finite differences under zero input") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const auto sc = make_scenario(g, kParams);
    std::mt19937_64 rng(57);
    const double delta = 1e-6;
    const Input zero{0.0, 0.0, 0.0};
    for (int i = 0; i < 30; ++i) {
        const CylState x = random_state(rng);
        const double t0 = 3.3;
        auto flow = [&](double t, const State& xs) { return sc.field(xs, zero, t); };
        const State fwd = rk4_step(flow, x.to_state(), t0, delta);
        const State bwd = rk4_step(flow, x.to_state(), t0, -delta);
        const double fd = (sc.cert.value(fwd, t0 + delta) - sc.cert.value(bwd, t0 - delta)) /
                          (2.0 * delta);
        const double exact = lie_derivative_V(sc.field, sc.cert, x.to_state(), zero, t0);
        CHECK(std::abs(fd - exact) < 1e-4 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("nominal orbit is an equilibrium of the output dynamics over ten periods") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const auto sc = make_scenario(g, kParams);
    const double period = 2.0 * std::numbers::pi;
    const double dt = period / 1e4;
    const std::size_t steps = static_cast<std::size_t>(10 * 1e4);
    State x = reference_state(0.0, kParams);
    const Input zero{0.0, 0.0, 0.0};
    auto flow = [&](double t, const State& xs) { return sc.field(xs, zero, t); };
    double worst = 0.0;
    double t = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        x = rk4_step(flow, x, t, dt);
        t += dt;
        if (k % 500 == 0) {
            worst = std::max(worst, norm(output_eta(CylState::from_state(x), t, kParams)));
        }
    }
    worst = std::max(worst, norm(output_eta(CylState::from_state(x), t, kParams)));
    CHECK(worst <= 1e-7);
}

TEST_CASE("crash guard aborts instead of producing nonphysical output") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    OrbitParams tight = kParams;
    tight.r_min = 0.9;
    const auto sc = make_scenario(g, tight);
    try {
        (void)sc.field(State{0.85, 0, 0, 0, 1, 0}, Input{0, 0, 0}, 0.0);
        FAIL("expected crash-guard rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("the shipped scenario keeps the radius above the crash guard") {
    const GainMatrices g = design_gains(1.0, 2.0, Matrix::identity(6));
    const OrbitParams params{1.0, 1.0, 0.0, 0.5};
    const auto sc = make_scenario(g, params);
    TriggerConfig cfg;
    cfg.sigma = 0.5;
    cfg.lambda = 0.05;
    cfg.t_max = 10.0;
    const State x0{1.1, 0.0, 0.05, 0.0, 1.0, 0.0};
    const auto traj = run_stabilization(sc.field, sc.controller, sc.cert, cfg, x0, 20.0, 1e-3,
                                        1e-10);
    double min_r = std::numeric_limits<double>::infinity();
    for (const Sample& s : traj.samples) min_r = std::min(min_r, s.x[0]);
    CHECK(min_r > params.r_min);
}

TEST_CASE("params validation") {
    OrbitParams bad = kParams;
    bad.r_min = 2.0;  // r_min >= r_des
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = kParams;
    bad.mu = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    kParams.validate();
}

TEST_SUITE_END();
