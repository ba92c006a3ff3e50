#include <cmath>
#include <random>

#include <doctest.h>

#include "itc/benchmarks.hpp"
#include "itc/errors.hpp"
#include "itc/triggers.hpp"

using namespace itc;

TEST_SUITE_BEGIN("triggers");

namespace {

PhaseState on_phase_at(const State& x_held, double t0 = 0.0) {
    return PhaseState{Mode::On, t0, x_held, 0.0, 1};
}

PhaseState off_phase_with(double c_beta, double t0 = 0.0) {
    return PhaseState{Mode::Off, t0, State{}, c_beta, 1};
}

}  // namespace

TEST_CASE("trigger config validation names the offending field") {
    TriggerConfig cfg;
    cfg.validate();

    auto expect_reject = [](TriggerConfig bad, const char* field) {
        try {
            bad.validate();
            FAIL_CHECK("expected rejection of ", field);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArgument);
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    TriggerConfig bad = cfg;
    bad.sigma = 1.0;
    expect_reject(bad, "sigma");
    bad = cfg;
    bad.t_max = 0.0;
    expect_reject(bad, "t_max");
    bad = cfg;
    bad.kappa = 1.0;
    expect_reject(bad, "kappa");
    bad = cfg;
    bad.c_min = 0.0;
    expect_reject(bad, "c_min");
    bad = cfg;
    bad.theta = 1.0;
    expect_reject(bad, "theta");
    bad = cfg;
    bad.lambda = -0.1;
    expect_reject(bad, "lambda");
}

TEST_CASE("off residual at a fresh sample of the scalar benchmark") {
    const auto sc = benchmarks::make_scalar_stab();
    const State x{1.0};
    // e = 0: LfV = -x^2 = -1, alpha term = (1-sigma) x^2/2 = 0.25.
    CHECK(off_residual(sc.cert, sc.field, sc.controller, on_phase_at(x), x, 0.0, 0.5) ==
          doctest::Approx(-0.75));
}

TEST_CASE("off residual along the held-input flow matches the closed form") {
    const auto sc = benchmarks::make_scalar_stab();
    const double x0 = 1.3;
    const double sigma = 0.5;
    const PhaseState phase = on_phase_at(State{x0});
    // Under u = -x0 the flow is x(tau) = x0 (1 - tau) and the residual is
    // x0^2 (1-tau) [(1-sigma)(1-tau)/2 - 1], negative on (0, 1).
    for (double tau = 0.0; tau < 1.0; tau += 0.05) {
        const State x{x0 * (1.0 - tau)};
        const double expected = x0 * x0 * (1.0 - tau) * ((1.0 - sigma) * (1.0 - tau) / 2.0 - 1.0);
        const double got = off_residual(sc.cert, sc.field, sc.controller, phase, x, tau, sigma);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        if (tau > 0.0) CHECK(got < 0.0);
    }
}

TEST_CASE("off residual vanishes at the origin") {
    const auto sc = benchmarks::make_scalar_stab();
    const State origin{0.0};
    CHECK(off_residual(sc.cert, sc.field, sc.controller, on_phase_at(origin), origin, 0.0, 0.5) ==
          doctest::Approx(0.0));
}

TEST_CASE("off residual at sampling is below -sigma * alpha (MIET-proof inequality)") {
    const auto sc = benchmarks::make_scalar_stab();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> xs(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double xv = xs(rng);
        if (xv == 0.0) continue;
        const State x{xv};
        const double sigma = 0.5;
        const double r = off_residual(sc.cert, sc.field, sc.controller, on_phase_at(x), x, 0.0,
                                      sigma);
        CHECK(r <= -sigma * sc.cert.alpha.eval(std::abs(xv)) + 1e-12);
        CHECK(r < 0.0);
    }
}

TEST_CASE("on residual during the scalar coast") {
    const auto sc = benchmarks::make_scalar_stab();
    const PerformanceSpec spec{0.3125, 0.1, 0.0};
    const PhaseState phase = off_phase_with(1.0 / 3.0);
    // At t_off: LfV = 0, residual = lambda S - c_beta (S - V) = -0.03125.
    CHECK(on_residual(sc.cert, spec, sc.field, phase, State{0.5}, 0.0) ==
          doctest::Approx(-0.03125));

    // The zero crossing sits where S(t) = c_beta V / (c_beta - lambda).
    const double s_star = (0.125 / 3.0) / (1.0 / 3.0 - 0.1);
    CHECK(s_star == doctest::Approx(0.178571).epsilon(1e-5));
    const double t_star = std::log(spec.s0 / s_star) / 0.1;
    CHECK(on_residual(sc.cert, spec, sc.field, phase, State{0.5}, t_star) ==
          doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("constant spec above constant V never reactivates") {
    const auto sc = benchmarks::make_scalar_stab();
    const PerformanceSpec spec{0.3125, 0.0, 0.0};  // lambda = 0
    const PhaseState phase = off_phase_with(1.0 / 3.0);
    for (double t = 0.0; t < 100.0; t += 5.0) {
        CHECK(on_residual(sc.cert, spec, sc.field, phase, State{0.5}, t) ==
              doctest::Approx(-(1.0 / 3.0) * (0.3125 - 0.125)));
    }
}

TEST_CASE("c_beta selection") {
    // Scalar benchmark at the first off event.
    CHECK(select_c_beta(0.0, -0.03125, 0.3125, 0.125, 2.0, 0.01, 0.1) ==
          doctest::Approx(1.0 / 3.0));
    // Negative bound falls back to the floor max(c_min, kappa * lambda).
    CHECK(select_c_beta(-1.0, 0.0, 1.0, 0.5, 2.0, 0.01, 0.1) == doctest::Approx(0.2));
    CHECK(select_c_beta(-1.0, 0.0, 1.0, 0.5, 2.0, 0.3, 0.1) == doctest::Approx(0.3));
    try {
        (void)select_c_beta(0.0, 0.0, 0.125, 0.125, 2.0, 0.01, 0.1);
        FAIL("expected performance-violated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PerformanceViolated);
    }
}

TEST_CASE("c_beta strictly satisfies the selection inequality with margin kappa") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> lfv(-2.0, 2.0);
    std::uniform_real_distribution<double> gap(1e-3, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double v = 0.5;
        const double s = v + gap(rng);
        const double dsdt = -0.1 * s;
        const double l = lfv(rng);
        const double c_beta = select_c_beta(l, dsdt, s, v, 2.0, 0.01, 0.1);
        CHECK(c_beta * (s - v) > l - dsdt);  // selection inequality, strictly
        const double bound = (l - dsdt) / (s - v);
        if (bound > 0.0) CHECK(c_beta >= 2.0 * bound);
        CHECK(c_beta > 0.1);  // exceeds lambda
    }
}

TEST_CASE("safety off residual at a fresh sample") {
    const auto sc = benchmarks::make_scalar_safety();
    const State x{0.5};
    // hdot = 0.5, omega(h) = 4 * 0.75 = 3, theta d = 1.5.
    CHECK(safe_off_residual(sc.barrier, on_phase_at(x), x, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("safety off residual vanishes at the quadratic-root state") {
    const auto sc = benchmarks::make_scalar_safety();
    const PhaseState phase = on_phase_at(State{0.5});
    const double x_star = (1.0 - std::sqrt(41.0)) / 8.0;  // -0.6753905
    CHECK(safe_off_residual(sc.barrier, phase, State{x_star}, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Positive before the root along the held flow x(tau) = 0.5 - 0.5 tau.
    for (double tau = 0.0; tau < 2.3; tau += 0.1) {
        const State x{0.5 - 0.5 * tau};
        CHECK(safe_off_residual(sc.barrier, phase, x, tau) > 0.0);
    }
}

TEST_CASE("safety off residual is positive on the boundary at a fresh sample") {
    const auto sc = benchmarks::make_scalar_safety();
    for (double xv : {1.0, -1.0}) {
        const State x{xv};
        const double r = safe_off_residual(sc.barrier, on_phase_at(x), x, 0.0);
        // omega(0) = 0, so the residual is hdot - theta d >= (1 - theta) d.
        CHECK(r >= (1.0 - sc.barrier.theta) * sc.barrier.d - 1e-12);
        CHECK(r > 0.0);
    }
}

TEST_CASE("safety on residual along the drift") {
    const auto sc = benchmarks::make_scalar_safety();
    const PhaseState phase = off_phase_with(0.25);
    // Residual -x + (1 - x^2) vanishes at the golden-ratio root.
    const double x_star = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(safe_on_residual(sc.barrier, phase, State{x_star}, 0.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(safe_on_residual(sc.barrier, phase, State{0.0}, 0.0) ==
          doctest::Approx(4.0 * 0.25));
}

TEST_CASE("drift-free coasting keeps the safety on residual positive") {
    auto sc = benchmarks::make_scalar_safety();
    // Variant with w = 0: hdot under zero input is identically 0.
    sc.barrier.hdot = [](const State& x, const State& e, double) {
        return -2.0 * x[0] * (0.0 - 2.0 * (x[0] + e[0]));
    };
    const PhaseState phase = off_phase_with(0.25);
    for (double xv = -0.9; xv < 0.95; xv += 0.1) {
        const State x{xv};
        CHECK(safe_on_residual(sc.barrier, phase, x, 0.0) ==
              doctest::Approx(0.25 * 4.0 * (1.0 - xv * xv)));
        if (std::abs(xv) < 0.999) {
            CHECK(safe_on_residual(sc.barrier, phase, x, 0.0) > 0.0);
        }
    }
}

TEST_CASE("safety c_beta selection") {
    // First benchmark cycle: hdot > 0 at the off event, so the floor wins.
    const double x_off = -0.6753905;
    const double hdot = -x_off;
    const double omega_h = 4.0 * (1.0 - x_off * x_off);
    CHECK(omega_h == doctest::Approx(4.0 * 0.543848).epsilon(1e-5));
    CHECK(select_c_beta_safety(hdot, omega_h, 2.0, 0.25) == doctest::Approx(0.25));

    CHECK(select_c_beta_safety(-0.5, 1.0, 2.0, 0.01) == doctest::Approx(1.0));

    try {
        (void)select_c_beta_safety(-0.5, 0.0, 2.0, 0.01);
        FAIL("expected boundary-contact");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BoundaryContact);
    }
}

TEST_CASE("residuals are continuous along flows") {
    const auto sc = benchmarks::make_scalar_stab();
    const PhaseState phase = on_phase_at(State{1.0});
    auto residual_at = [&](double tau) {
        const State x{1.0 * (1.0 - tau)};  // held flow
        return off_residual(sc.cert, sc.field, sc.controller, phase, x, tau, 0.5);
    };
    auto max_step = [&](double dt) {
        double worst = 0.0;
        for (double tau = 0.0; tau < 0.9; tau += dt) {
            worst = std::max(worst, std::abs(residual_at(tau + dt) - residual_at(tau)));
        }
        return worst;
    };
    const double coarse = max_step(1e-2);
    const double fine = max_step(1e-3);
    CHECK(fine < coarse);
    CHECK(fine < 0.2 * coarse);  // roughly linear shrinkage for a smooth residual
}

TEST_SUITE_END();
