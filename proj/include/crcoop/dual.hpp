#pragma once

#include <cmath>

#include "crcoop/complex_vec.hpp"
#include "crcoop/errors.hpp"
#include "crcoop/model.hpp"

namespace crcoop {

// Two-user downlink: maximize user-2 SINR subject to a user-1 SINR target
// gamma1 and the sum-power budget P_C.
struct DualProblem {
    cvec h1;        // constrained user's channel
    cvec h2;        // maximized user's channel
    double sigma2 = 1.0;
    double gamma1 = 0.0;
    double P_C = 1.0;

    void validate() const {
        if (h1.size() != h2.size() || h1.empty()) throw input_error("DualProblem: bad channel sizes");
        if (norm2(h1) <= 0.0 || norm2(h2) <= 0.0) throw input_error("DualProblem: zero channel");
        if (gamma1 < 0.0) throw input_error("DualProblem: gamma1 < 0");
        if (!(P_C > 0.0)) throw input_error("DualProblem: P_C <= 0");
        if (!(sigma2 > 0.0)) throw input_error("DualProblem: sigma2 <= 0");
    }
};

struct DualSolution {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gamma2 = 0.0;
    cvec w1;
    cvec w2;
    double p1 = 0.0;
    double p2 = 0.0;
};

// All power on user 1 must meet gamma1; necessary and sufficient.
inline bool dual_feasible(const DualProblem& prob) {
    return prob.P_C * norm2(prob.h1) / prob.sigma2 >= prob.gamma1;
}

// (sigma2*I + lambda*h*h†)^{-1} x via the rank-one update identity.
inline cvec rank_one_solve(double sigma2, double lambda, const cvec& h, const cvec& x) {
    if (!(sigma2 > 0.0)) throw input_error("rank_one_solve: sigma2 <= 0");
    if (lambda < 0.0) throw input_error("rank_one_solve: lambda < 0");
    const cplx coef = lambda * vdot(h, x) / (sigma2 + lambda * norm2(h));
    cvec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - coef * h[i]) / sigma2;
    return out;
}

namespace detail {

struct DualScalars {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gamma2 = 0.0;
};

// Solves the dual equation set on the scalars (||h1||^2, ||h2||^2, zeta^2).
// lambda1(lambda2) + lambda2 is strictly increasing, so bisection on
// lambda2 in [0, P_C] cannot fail once the endpoint signs are checked.
inline DualScalars solve_dual_scalars(double n1, double n2, double zeta2, double sigma2,
                                      double gamma1, double P_C, double bisect_tol) {
    DualScalars out;
    if (gamma1 <= 0.0) {  // unconstrained beam to user 2
        out.lambda1 = 0.0;
        out.lambda2 = P_C;
        out.gamma2 = P_C * n2 / sigma2;
        return out;
    }
    auto lambda1_of = [&](double l2) {
        return gamma1 * sigma2 * (sigma2 + l2 * n2) / (n1 * (sigma2 + l2 * n2 * (1.0 - zeta2)));
    };
    auto residual = [&](double l2) { return lambda1_of(l2) + l2 - P_C; };

    const double r0 = residual(0.0);
    if (r0 > bisect_tol) throw feasibility_error("solve_dual: gamma1 target exceeds the power budget");
    if (r0 >= -bisect_tol) {
        out.lambda1 = P_C;
        out.lambda2 = 0.0;
        out.gamma2 = 0.0;
        return out;
    }
    double lo = 0.0, hi = P_C;
    if (residual(hi) < 0.0) throw internal_error("solve_dual: bisection bracket failure");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 600; ++it) {
        mid = 0.5 * (lo + hi);
        const double r = residual(mid);
        if (std::fabs(r) <= bisect_tol) break;
        (r > 0.0) ? hi = mid : lo = mid;
        if (hi - lo <= 1e-300) break;
    }
    out.lambda2 = mid;
    out.lambda1 = P_C - mid;  // third equation enforced exactly
    const double l1n1 = out.lambda1 * n1;
    out.gamma2 = out.lambda2 * n2 * (sigma2 + l1n1 * (1.0 - zeta2)) / (sigma2 * (sigma2 + l1n1));
    return out;
}

}  // namespace detail

// Optimal user-2 SINR only; used by the outer 1-D/2-D parameter searches.
inline double dual_gamma2(const DualProblem& prob, const SolverSettings& st) {
    if (!dual_feasible(prob)) throw feasibility_error("dual_gamma2: infeasible problem");
    const double n1 = norm2(prob.h1), n2 = norm2(prob.h2);
    const double z2 = std::norm(vdot(prob.h1, prob.h2)) / (n1 * n2);
    return detail::solve_dual_scalars(n1, n2, z2, prob.sigma2, prob.gamma1, prob.P_C, st.bisect_tol)
        .gamma2;
}

// Full solve: dual variables by bisection, beamformer directions from the
// rank-one inverses, downlink powers from the 2x2 system that meets both
// SINR targets with equality.
inline DualSolution solve_dual(const DualProblem& prob, const SolverSettings& st) {
    prob.validate();
    if (!dual_feasible(prob)) throw feasibility_error("solve_dual: infeasible problem");
    const double n1 = norm2(prob.h1), n2 = norm2(prob.h2);
    const double z2 = std::norm(vdot(prob.h1, prob.h2)) / (n1 * n2);
    const auto sc =
        detail::solve_dual_scalars(n1, n2, z2, prob.sigma2, prob.gamma1, prob.P_C, st.bisect_tol);

    DualSolution sol;
    sol.lambda1 = sc.lambda1;
    sol.lambda2 = sc.lambda2;
    sol.gamma2 = sc.gamma2;

    const cvec u1 = unit(rank_one_solve(prob.sigma2, sol.lambda2, prob.h2, prob.h1));
    const cvec u2 = unit(rank_one_solve(prob.sigma2, sol.lambda1, prob.h1, prob.h2));
    const double a11 = std::norm(vdot(prob.h1, u1));
    const double a12 = std::norm(vdot(prob.h1, u2));
    const double a21 = std::norm(vdot(prob.h2, u1));
    const double a22 = std::norm(vdot(prob.h2, u2));

    const double det = a11 * a22 - prob.gamma1 * sol.gamma2 * a12 * a21;
    const double det_scale = a11 * a22 + prob.gamma1 * sol.gamma2 * a12 * a21;
    if (!(det > 1e-13 * det_scale))
        throw degenerate_geometry_error("solve_dual: singular downlink power system");
    sol.p1 = prob.gamma1 * prob.sigma2 * (a22 + sol.gamma2 * a12) / det;
    sol.p2 = sol.gamma2 * prob.sigma2 * (a11 + prob.gamma1 * a21) / det;
    if (sol.p1 < 0.0 || sol.p2 < 0.0)
        throw degenerate_geometry_error("solve_dual: negative downlink power");

    sol.w1 = (sol.p1 > 0.0) ? scaled(u1, cplx{std::sqrt(sol.p1), 0.0}) : cvec(prob.h1.size());
    sol.w2 = (sol.p2 > 0.0) ? scaled(u2, cplx{std::sqrt(sol.p2), 0.0}) : cvec(prob.h2.size());
    return sol;
}

}  // namespace crcoop
