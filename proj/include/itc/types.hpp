#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace itc {

/// State and input vectors. All shipped scenarios have dimension <= 6.
using State = std::vector<double>;
using Input = std::vector<double>;

/// Controlled vector field xdot = f(x, u, t).
using ControlledField = std::function<State(const State&, const Input&, double)>;

/// State-feedback law u = k(x, t).
using Controller = std::function<Input(const State&, double)>;

/// Scalar function of (state, time), used for certificate values and residuals.
using StateTimeFn = std::function<double(const State&, double)>;

[[nodiscard]] inline double dot(const State& a, const State& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

[[nodiscard]] inline double norm(const State& a) { return std::sqrt(dot(a, a)); }

[[nodiscard]] inline bool all_finite(const State& a) {
    for (double v : a) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

[[nodiscard]] inline Input zero_input(std::size_t dim) { return Input(dim, 0.0); }

}  // namespace itc
