#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "itc/controllers.hpp"
#include "itc/errors.hpp"

using namespace itc;

TEST_SUITE_BEGIN("controllers");

namespace {

// Random feasible constraint in m dimensions. Feasible means q != 0 or p <= 0.
AffineConstraint random_constraint(std::mt19937_64& rng, std::size_t m) {
    std::uniform_real_distribution<double> pd(-2.0, 2.0);
    std::uniform_real_distribution<double> qd(-1.5, 1.5);
    AffineConstraint c;
    c.p = pd(rng);
    c.q.resize(m);
    double qq = 0.0;
    for (double& v : c.q) {
        v = qd(rng);
        qq += v * v;
    }
    if (qq < 1e-6) c.q[0] = 1.0;
    return c;
}

}  // namespace

TEST_CASE("min-norm QP closed form") {
    CHECK(min_norm_qp({-1.0, {1.0, 0.0, 0.0}}) == Input{0.0, 0.0, 0.0});

    const Input u1 = min_norm_qp({1.0, {1.0, 0.0, 0.0}});
    CHECK(u1[0] == doctest::Approx(-1.0));
    CHECK(u1[1] == 0.0);
    CHECK(u1[2] == 0.0);

    const Input u2 = min_norm_qp({2.0, {1.0, 1.0, 0.0}});
    CHECK(u2[0] == doctest::Approx(-1.0));
    CHECK(u2[1] == doctest::Approx(-1.0));
    CHECK(u2[2] == 0.0);
}

TEST_CASE("min-norm QP rejects the degenerate infeasible constraint") {
    try {
        (void)min_norm_qp({1.0, {0.0, 0.0}});
        FAIL("expected infeasible-constraint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleConstraint);
    }
    // q = 0 with p <= 0 is satisfied by u = 0.
    CHECK(min_norm_qp({-1.0, {0.0, 0.0}}) == Input{0.0, 0.0});
}

TEST_CASE("min-norm QP output is always feasible") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_constraint(rng, 1 + i % 3);
        const Input u = min_norm_qp(c);
        CHECK(c.p + dot(c.q, u) <= 1e-12);
    }
}

TEST_CASE("min-norm QP beats every feasible grid point (grid-search oracle)") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + trial % 3;
        const auto c = random_constraint(rng, m);
        const Input u_star = min_norm_qp(c);
        const double norm_star = std::sqrt(dot(u_star, u_star));

        const int pts = m == 3 ? 25 : 81;
        const double lo = -2.0;
        const double step = 4.0 / (pts - 1);
        std::vector<int> idx(m, 0);
        while (true) {
            Input u(m);
            for (std::size_t d = 0; d < m; ++d) u[d] = lo + idx[d] * step;
            if (c.p + dot(c.q, u) <= 0.0) {
                CHECK(std::sqrt(dot(u, u)) >= norm_star - 1e-6);
            }
            std::size_t d = 0;
            while (d < m && ++idx[d] == pts) {
                idx[d] = 0;
                ++d;
            }
            if (d == m) break;
        }
    }
}

TEST_CASE("min-norm QP complementary slackness") {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_constraint(rng, 3);
        const Input u = min_norm_qp(c);
        const bool at_zero = dot(u, u) == 0.0;
        const bool active = std::abs(c.p + dot(c.q, u)) <= 1e-12;
        CHECK((at_zero || active));
    }
}

TEST_CASE("min-norm QP is Lipschitz away from q = 0") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> pd(-2.0, 2.0);
    std::uniform_real_distribution<double> qd(0.5, 1.5);
    const double delta = 1e-6;
    for (int i = 0; i < 100; ++i) {
        AffineConstraint c;
        c.p = pd(rng);
        c.q = {qd(rng), qd(rng), qd(rng)};
        const Input u = min_norm_qp(c);
        AffineConstraint c2 = c;
        c2.p += delta;
        c2.q[0] += delta;
        const Input u2 = min_norm_qp(c2);
        double diff = 0.0;
        for (std::size_t d = 0; d < 3; ++d) diff += (u2[d] - u[d]) * (u2[d] - u[d]);
        CHECK(std::sqrt(diff) <= 100.0 * delta);
    }
}

TEST_CASE("held input freezes the controller output at the sample") {
    const Controller k = [](const State& x, double) { return Input{-x[0]}; };
    const HeldInput held = held_input(k, State{1.0}, 0.0);
    CHECK(held.u == Input{-1.0});
    CHECK(held.x_sample == State{1.0});
    CHECK(held.t_sample == 0.0);

    // k(0) = 0 for the shipped scalar controllers.
    CHECK(held_input(k, State{0.0}, 3.0).u == Input{0.0});
    const Controller k2 = [](const State& x, double) { return Input{-2.0 * x[0]}; };
    CHECK(held_input(k2, State{0.0}, 3.0).u == Input{0.0});
}

TEST_SUITE_END();
