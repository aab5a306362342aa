#pragma once

// Three-phase time-splitting cooperation: a dedicated energy slot of
// duration alpha at PT power P_p1, then equal listen/forward halves at PT
// power P_p2. Solvers run a 2-D search over (alpha, P_p1) with an inner
// dual solve (optimal) or closed form (ZF).

#include <cmath>

#include "crcoop/complex_vec.hpp"
#include "crcoop/dual.hpp"
#include "crcoop/errors.hpp"
#include "crcoop/model.hpp"
#include "crcoop/search.hpp"

namespace crcoop {

// Energy-conserving Phase-II power, capped by the peak constraint.
inline double ts_phase2_power(const SystemConfig& cfg, double alpha, double P_p1) {
    cfg.validate();
    if (!(alpha >= 0.0 && alpha < 1.0)) throw input_error("ts_phase2_power: alpha outside [0,1)");
    if (!(P_p1 > 0.0 && P_p1 <= cfg.P_max * (1.0 + 1e-12)))
        throw input_error("ts_phase2_power: P_p1 outside (0, P_max]");
    if (alpha * P_p1 > cfg.P_p * (1.0 + 1e-12))
        throw input_error("ts_phase2_power: Phase-I energy exceeds the PT budget");
    return std::min(cfg.P_max, 2.0 * (cfg.P_p - alpha * P_p1) / (1.0 - alpha));
}

inline double ts_harvested_energy(const SystemConfig& cfg, const ChannelSet& ch, double alpha,
                                  double P_p1) {
    return alpha * cfg.eta * (P_p1 * norm2(ch.g) + cfg.N0);
}

// Compact-form ST budget for the forwarding half.
inline double ts_budget(const SystemConfig& cfg, const ChannelSet& ch, double alpha, double P_p1) {
    return 2.0 * (ts_harvested_energy(cfg, ch, alpha, P_p1) + cfg.P_s0) / (1.0 - alpha);
}

// Residual PU SINR target after crediting the Phase-I direct rate.
// Nonpositive means phases I-II alone already support r_p.
inline double ts_gamma_p_prime(const SystemConfig& cfg, const ChannelSet& ch, double alpha,
                               double P_p1, double r_p) {
    const double n_t = cfg.n_tilde0();
    const double hp2 = std::norm(ch.h_p);
    const double r1 = alpha * std::log2(1.0 + P_p1 * hp2 / n_t);
    const double P_p2 = ts_phase2_power(cfg, alpha, P_p1);
    if (P_p2 <= 0.0)
        return (r1 >= r_p) ? -hp2 / n_t : std::numeric_limits<double>::infinity();
    return (std::exp2(2.0 * (r_p - r1) / (1.0 - alpha)) - 1.0) / P_p2 - hp2 / n_t;
}

namespace detail {

constexpr double kTsAlphaMax = 1.0 - 1e-3;  // keeps the (1-alpha)^-1 terms finite

inline double ts_rate_pu(const SystemConfig& cfg, const ChannelSet& ch, double alpha, double P_p1,
                         double P_p2, const cvec& w_s, const cvec& w_p) {
    const double n_t = cfg.n_tilde0();
    const double g2 = norm2(ch.g);
    const double hp2 = std::norm(ch.h_p);
    double extra = 0.0;
    if (!w_p.empty()) {
        const double sig = std::norm(vdot(ch.h_sp, w_p));
        const double interf = w_s.empty() ? 0.0 : std::norm(vdot(ch.h_sp, w_s));
        extra = P_p2 * sig * g2 * g2 / (interf + sig * g2 * n_t + n_t);
    }
    return alpha * std::log2(1.0 + P_p1 * hp2 / n_t) +
           0.5 * (1.0 - alpha) * std::log2(1.0 + P_p2 * hp2 / n_t + extra);
}

// Value of the optimal inner problem at a fixed (alpha, P_p1); -inf when
// infeasible there.
inline double ts_value_optimal(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                               double alpha, double P_p1, const SolverSettings& st) {
    if (alpha * P_p1 > cfg.P_p) return kNegInf;
    const double n_t = cfg.n_tilde0();
    const double g2 = norm2(ch.g);
    const double gpp = ts_gamma_p_prime(cfg, ch, alpha, P_p1, r_p);
    const double P_C = ts_budget(cfg, ch, alpha, P_p1);
    if (gpp <= 0.0)
        return 0.5 * (1.0 - alpha) * std::log2(1.0 + P_C * norm2(ch.h_s) / n_t);
    if (!std::isfinite(gpp)) return kNegInf;
    if (!(g2 - gpp * n_t > 0.0)) return kNegInf;
    const double P_p2 = ts_phase2_power(cfg, alpha, P_p1);
    const double g1 = (P_p2 * g2 + n_t) * gpp / (g2 - gpp * n_t);
    DualProblem dp{ch.h_sp, ch.h_s, n_t, g1, P_C};
    if (!dual_feasible(dp)) return kNegInf;
    return 0.5 * (1.0 - alpha) * std::log2(1.0 + dual_gamma2(dp, st));
}

inline double ts_value_zf(const SystemConfig& cfg, const ChannelSet& ch, double r_p, double alpha,
                          double P_p1, double delta2) {
    if (alpha * P_p1 > cfg.P_p) return kNegInf;
    const double n_t = cfg.n_tilde0();
    const double g2 = norm2(ch.g);
    const double zf_gain = 1.0 - delta2;
    const double gpp = ts_gamma_p_prime(cfg, ch, alpha, P_p1, r_p);
    const double P_C = ts_budget(cfg, ch, alpha, P_p1);
    if (gpp <= 0.0)
        return 0.5 * (1.0 - alpha) * std::log2(1.0 + P_C * norm2(ch.h_s) * zf_gain / n_t);
    if (!std::isfinite(gpp)) return kNegInf;
    if (!(g2 - gpp * n_t > 0.0)) return kNegInf;
    const double P_p2 = ts_phase2_power(cfg, alpha, P_p1);
    const double q_p =
        n_t * (P_p2 * g2 + n_t) * gpp / (norm2(ch.h_sp) * zf_gain * (g2 - gpp * n_t));
    const double q_s = P_C - q_p;
    if (q_s < 0.0) return kNegInf;
    return 0.5 * (1.0 - alpha) * std::log2(1.0 + q_s * norm2(ch.h_s) * zf_gain / n_t);
}

inline double ts_p1_cap(const SystemConfig& cfg, double alpha) {
    return (alpha > 0.0) ? std::min(cfg.P_max, cfg.P_p / alpha) : cfg.P_max;
}

}  // namespace detail

// Full reconstruction of the optimal inner solution at fixed (alpha, P_p1);
// used by the solver's final step and by the alpha parameter curve.
inline SchemeSolution ts_eval_optimal_at(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                         double alpha, double P_p1, const SolverSettings& st) {
    SchemeSolution sol;
    sol.scheme = Scheme::TimeSplit;
    sol.split.alpha = alpha;
    sol.split.P_p1 = P_p1;
    if (alpha * P_p1 > cfg.P_p) return sol;
    const double n_t = cfg.n_tilde0();
    const double g2 = norm2(ch.g);
    const double P_p2 = ts_phase2_power(cfg, alpha, P_p1);
    sol.split.P_p2 = P_p2;
    const double gpp = ts_gamma_p_prime(cfg, ch, alpha, P_p1, r_p);
    const double P_C = ts_budget(cfg, ch, alpha, P_p1);

    if (gpp <= 0.0) {
        sol.feasible = true;
        sol.w_p = cvec(ch.h_s.size());
        sol.w_s = (P_C > 0.0) ? scaled(unit(ch.h_s), cplx{std::sqrt(P_C), 0.0})
                              : cvec(ch.h_s.size());
        sol.rate_su = 0.5 * (1.0 - alpha) * std::log2(1.0 + P_C * norm2(ch.h_s) / n_t);
        sol.rate_pu = detail::ts_rate_pu(cfg, ch, alpha, P_p1, P_p2, sol.w_s, {});
        return sol;
    }
    if (!std::isfinite(gpp) || !(g2 - gpp * n_t > 0.0)) return sol;
    const double g1 = (P_p2 * g2 + n_t) * gpp / (g2 - gpp * n_t);
    DualProblem dp{ch.h_sp, ch.h_s, n_t, g1, P_C};
    if (!dual_feasible(dp)) return sol;
    const DualSolution ds = solve_dual(dp, st);

    sol.feasible = true;
    sol.w_s = ds.w2;
    const double scale = std::sqrt(P_p2 * g2 * g2 + g2 * n_t);
    sol.w_p = scaled(ds.w1, cplx{1.0 / scale, 0.0});
    sol.rate_su = 0.5 * (1.0 - alpha) * std::log2(1.0 + ds.gamma2);
    sol.rate_pu = detail::ts_rate_pu(cfg, ch, alpha, P_p1, P_p2, sol.w_s, sol.w_p);
    return sol;
}

inline SchemeSolution ts_eval_zf_at(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                    double alpha, double P_p1) {
    SchemeSolution sol;
    sol.scheme = Scheme::TimeSplitZf;
    sol.split.alpha = alpha;
    sol.split.P_p1 = P_p1;
    if (alpha * P_p1 > cfg.P_p) return sol;
    const double n_t = cfg.n_tilde0();
    const double g2 = norm2(ch.g);
    const double delta2 = alignment_cos2(ch.h_sp, ch.h_s);
    const double zf_gain = 1.0 - delta2;
    const double P_p2 = ts_phase2_power(cfg, alpha, P_p1);
    sol.split.P_p2 = P_p2;
    const double gpp = ts_gamma_p_prime(cfg, ch, alpha, P_p1, r_p);
    const double P_C = ts_budget(cfg, ch, alpha, P_p1);
    const auto pp_s = project_pair(ch.h_sp, ch.h_s);
    const auto pp_p = project_pair(ch.h_s, ch.h_sp);

    double q_p = 0.0, q_s;
    if (gpp <= 0.0) {
        q_s = P_C;
    } else {
        if (!std::isfinite(gpp) || !(g2 - gpp * n_t > 0.0)) return sol;
        q_p = n_t * (P_p2 * g2 + n_t) * gpp / (norm2(ch.h_sp) * zf_gain * (g2 - gpp * n_t));
        q_s = P_C - q_p;
        if (q_s < 0.0) return sol;
    }
    sol.feasible = true;
    sol.split.q_p = q_p;
    sol.split.q_s = q_s;
    sol.w_s = (q_s > 0.0) ? scaled(unit(pp_s.orthogonal), cplx{std::sqrt(q_s), 0.0})
                          : cvec(ch.h_s.size());
    const double scale = std::sqrt(P_p2 * g2 * g2 + g2 * n_t);
    sol.w_p = (q_p > 0.0) ? scaled(unit(pp_p.orthogonal), cplx{std::sqrt(q_p) / scale, 0.0})
                          : cvec(ch.h_s.size());
    sol.rate_su = 0.5 * (1.0 - alpha) * std::log2(1.0 + q_s * norm2(ch.h_s) * zf_gain / n_t);
    sol.rate_pu = detail::ts_rate_pu(cfg, ch, alpha, P_p1, P_p2, sol.w_s, sol.w_p);
    return sol;
}

// 2-D grid-plus-refinement over (alpha, P_p1); P_p1 is parametrized as a
// fraction of its alpha-dependent cap so the search rectangle is regular.
inline SchemeSolution ts_solve_optimal(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                       const SolverSettings& st) {
    cfg.validate();
    ch.validate();
    st.validate();
    auto obj = [&](double alpha, double tau) {
        const double p1 = std::max(tau, 1e-6) * detail::ts_p1_cap(cfg, alpha);
        return detail::ts_value_optimal(cfg, ch, r_p, alpha, p1, st);
    };
    const Opt2D best = maximize_2d(obj, 0.0, detail::kTsAlphaMax, 1e-6, 1.0, st.grid_coarse,
                                   st.refine_rounds, st.rel_tol);
    if (!std::isfinite(best.value)) {
        SchemeSolution sol;
        sol.scheme = Scheme::TimeSplit;
        return sol;
    }
    const double p1 = std::max(best.y, 1e-6) * detail::ts_p1_cap(cfg, best.x);
    return ts_eval_optimal_at(cfg, ch, r_p, best.x, p1, st);
}

inline SchemeSolution ts_solve_zf(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                  const SolverSettings& st) {
    cfg.validate();
    ch.validate();
    st.validate();
    if (ch.n() < 2)
        throw unsupported_config_error("ts_solve_zf: needs N >= 2 for a nontrivial null space");
    const double delta2 = alignment_cos2(ch.h_sp, ch.h_s);
    auto obj = [&](double alpha, double tau) {
        const double p1 = std::max(tau, 1e-6) * detail::ts_p1_cap(cfg, alpha);
        return detail::ts_value_zf(cfg, ch, r_p, alpha, p1, delta2);
    };
    const Opt2D best = maximize_2d(obj, 0.0, detail::kTsAlphaMax, 1e-6, 1.0, st.grid_coarse,
                                   st.refine_rounds, st.rel_tol);
    if (!std::isfinite(best.value)) {
        SchemeSolution sol;
        sol.scheme = Scheme::TimeSplitZf;
        return sol;
    }
    const double p1 = std::max(best.y, 1e-6) * detail::ts_p1_cap(cfg, best.x);
    return ts_eval_zf_at(cfg, ch, r_p, best.x, p1);
}

// Largest supportable r_p over the search rectangle with the whole ST budget
// relaying; used for region sweeps.
inline double ts_max_pu_rate(const SystemConfig& cfg, const ChannelSet& ch,
                             const SolverSettings& st) {
    cfg.validate();
    ch.validate();
    const double n_t = cfg.n_tilde0();
    const double g2 = norm2(ch.g);
    const double hsp2 = norm2(ch.h_sp);
    const double hp2 = std::norm(ch.h_p);
    auto obj = [&](double alpha, double tau) {
        const double P_p1 = std::max(tau, 1e-6) * detail::ts_p1_cap(cfg, alpha);
        if (alpha * P_p1 > cfg.P_p) return kNegInf;
        const double P_p2 = ts_phase2_power(cfg, alpha, P_p1);
        const double Q = ts_budget(cfg, ch, alpha, P_p1) * hsp2 / n_t;
        const double gpp_max = (g2 > 0.0 && P_p2 > 0.0)
                                   ? Q * g2 / (P_p2 * g2 + n_t + Q * n_t)
                                   : 0.0;
        return alpha * std::log2(1.0 + P_p1 * hp2 / n_t) +
               0.5 * (1.0 - alpha) *
                   std::log2(1.0 + P_p2 * hp2 / n_t + P_p2 * gpp_max);
    };
    const Opt2D best = maximize_2d(obj, 0.0, detail::kTsAlphaMax, 1e-6, 1.0, st.grid_coarse,
                                   st.refine_rounds, st.rel_tol);
    return std::isfinite(best.value) ? best.value : 0.0;
}

}  // namespace crcoop
