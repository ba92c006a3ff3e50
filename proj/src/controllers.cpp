#include "itc/controllers.hpp"

#include "itc/errors.hpp"

namespace itc {

Input min_norm_qp(const AffineConstraint& c) {
    if (c.p <= 0.0) return zero_input(c.q.size());
    const double qq = dot(c.q, c.q);
    if (qq == 0.0) {
        throw Error(ErrorCode::InfeasibleConstraint,
                    "min_norm_qp: constraint has zero input direction but positive offset");
    }
    Input u(c.q.size());
    const double scale = -c.p / qq;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = scale * c.q[i];
    return u;
}

HeldInput held_input(const Controller& controller, const State& x_sample, double t_sample) {
    return HeldInput{.u = controller(x_sample, t_sample), .x_sample = x_sample, .t_sample = t_sample};
}

}  // namespace itc
