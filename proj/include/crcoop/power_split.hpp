#pragma once

// Two-phase power-splitting cooperation. Phase I: the PT bursts at 2*P_p,
// the ST routes a fraction rho of received power to the AF path and
// harvests the rest. Phase II: the ST forwards and serves its SU. Rates
// carry the 1/2 pre-log; harvested energy doubles into Phase-II power.

#include <cmath>
#include <vector>

#include "crcoop/complex_vec.hpp"
#include "crcoop/dual.hpp"
#include "crcoop/errors.hpp"
#include "crcoop/model.hpp"
#include "crcoop/search.hpp"

namespace crcoop {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// (2^{2 r_p} - 1) / (2 P_p) - |h_p|^2 / N~0; nonpositive when the direct
// link alone already supports r_p.
inline double ps_gamma_p_prime(const SystemConfig& cfg, const ChannelSet& ch, double r_p) {
    cfg.validate();
    return (std::exp2(2.0 * r_p) - 1.0) / (2.0 * cfg.P_p) - std::norm(ch.h_p) / cfg.n_tilde0();
}

inline double ps_harvested_power(const SystemConfig& cfg, const ChannelSet& ch, double rho) {
    return cfg.eta * (1.0 - rho) * (2.0 * cfg.P_p * norm2(ch.g) + cfg.N0) / 2.0;
}

// Phase-II ST budget 2*(P_s0 + P_EH).
inline double ps_budget(const SystemConfig& cfg, const ChannelSet& ch, double rho) {
    return 2.0 * cfg.P_s0 + cfg.eta * (1.0 - rho) * (2.0 * cfg.P_p * norm2(ch.g) + cfg.N0);
}

namespace detail {

struct PsConsts {
    double g2, hsp2, hs2, hp2, n_t;
    double gpp;        // gamma_p'
    double a_over_eta; // 2 P_p ||g||^2 + N0
    double a;          // eta * a_over_eta
    double b;          // ||g||^2 - gamma_p' N0
    double c;          // gamma_p' N~0 / ||h_sp||^2
};

inline PsConsts ps_consts(const SystemConfig& cfg, const ChannelSet& ch, double r_p) {
    PsConsts k;
    k.g2 = norm2(ch.g);
    k.hsp2 = norm2(ch.h_sp);
    k.hs2 = norm2(ch.h_s);
    k.hp2 = std::norm(ch.h_p);
    k.n_t = cfg.n_tilde0();
    k.gpp = (std::exp2(2.0 * r_p) - 1.0) / (2.0 * cfg.P_p) - k.hp2 / k.n_t;
    k.a_over_eta = 2.0 * cfg.P_p * k.g2 + cfg.N0;
    k.a = cfg.eta * k.a_over_eta;
    k.b = k.g2 - k.gpp * cfg.N0;
    k.c = k.gpp * k.n_t / k.hsp2;
    return k;
}

// Compact-form PU SINR target at a given rho; requires denom(rho) > 0.
inline double ps_gamma_p_dprime(const SystemConfig& cfg, const PsConsts& k, double rho) {
    const double den = k.b * rho - k.gpp * cfg.NC;
    if (!(den > 0.0)) throw feasibility_error("ps_gamma_p_dprime: relay SINR unreachable at this rho");
    return k.gpp * (rho * k.a_over_eta + cfg.NC) / den;
}

// Scale of the compact-variable substitution: ||w_p_compact||^2 =
// scale2 * ||w_p_physical||^2.
inline double ps_compact_scale2(const SystemConfig& cfg, const PsConsts& k, double rho) {
    return k.g2 * (rho * k.a_over_eta + cfg.NC);
}

// Solution set of A rho^2 + B rho + C <= 0, intersected with
// (rho_den, 1]. Returns lo > hi when empty. A = a*b is nonnegative here
// (b > 0 was checked by the caller).
inline Interval ps_quadratic_interval(double A, double B, double C, double rho_den) {
    Interval none{1.0, 0.0};
    double lo, hi;
    if (std::fabs(A) <= 1e-14 * (std::fabs(B) + std::fabs(C))) {
        if (B >= 0.0) {
            // f is nondecreasing and positive just right of rho_den except in
            // the exactly-flat NC = 0 corner.
            if (B == 0.0 && C <= 0.0) return {rho_den, 1.0};
            return none;
        }
        lo = -C / B;
        hi = 1.0;
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) return none;
        const double sq = std::sqrt(disc);
        lo = (-B - sq) / (2.0 * A);
        hi = (-B + sq) / (2.0 * A);
    }
    lo = std::max(lo, rho_den);
    hi = std::min(hi, 1.0);
    if (!(lo <= hi)) return none;
    return {lo, hi};
}

// Achieved PU rate for physical beamformers under the two-slot MRC model.
inline double ps_rate_pu(const SystemConfig& cfg, const ChannelSet& ch, double rho,
                         const cvec& w_s, const cvec& w_p) {
    const double g2 = norm2(ch.g);
    const double n_t = cfg.n_tilde0();
    double extra = 0.0;
    if (!w_p.empty()) {
        const double sig = std::norm(vdot(ch.h_sp, w_p));
        const double interf = w_s.empty() ? 0.0 : std::norm(vdot(ch.h_sp, w_s));
        extra = 2.0 * cfg.P_p * rho * g2 * g2 * sig /
                (interf + (rho * g2 * cfg.N0 + g2 * cfg.NC) * sig + n_t);
    }
    return 0.5 * std::log2(1.0 + 2.0 * cfg.P_p * std::norm(ch.h_p) / n_t + extra);
}

}  // namespace detail

// Max PU rate over rho with the whole budget relaying (w_s = 0). The
// stationary point of the scan objective is the root of a quadratic whose
// discriminant is provably positive.
inline std::pair<double, double> ps_max_pu_rate(const SystemConfig& cfg, const ChannelSet& ch) {
    cfg.validate();
    ch.validate();
    const double g2 = norm2(ch.g);
    const double a1 = 2.0 * cfg.P_p * g2 + cfg.N0;
    const double b1 = 2.0 * cfg.P_s0;
    const double c1 = norm2(ch.h_sp);
    const double n_t = cfg.n_tilde0();

    double rho_star;
    if (cfg.NC > 0.0) {
        const double A1 = a1 * a1 * cfg.eta * (n_t / cfg.NC - cfg.eta * c1);
        const double B1 = 2.0 * a1 * cfg.eta * (n_t + c1 * (b1 + a1 * cfg.eta));
        const double C1 = (b1 + a1 * cfg.eta) * (n_t + c1 * (b1 + a1 * cfg.eta));
        if (std::fabs(A1) <= 1e-12 * a1 * a1 * cfg.eta * std::max(n_t / cfg.NC, cfg.eta * c1)) {
            // covers eta == 0 (A1 = B1 = 0), where harvesting buys nothing
            rho_star = (B1 > 0.0) ? std::min(C1 / B1, 1.0) : 1.0;
        } else {
            const double disc = B1 * B1 + 4.0 * A1 * C1;
            if (!(disc > 0.0)) throw internal_error("ps_max_pu_rate: nonpositive discriminant");
            rho_star = std::min((-B1 + std::sqrt(disc)) / (2.0 * A1), 1.0);
        }
    } else {
        rho_star = 0.0;  // noiseless conversion: any sliver of rho relays at full fidelity
    }
    rho_star = std::clamp(rho_star, 0.0, 1.0);

    // Evaluate the relay SINR bonus at rho*.
    auto bonus = [&](double rho) {
        const double budget = ps_budget(cfg, ch, rho);
        if (budget <= 0.0 || g2 <= 0.0) return 0.0;
        const double nc_over_rho = (rho > 0.0) ? cfg.NC / rho : (cfg.NC == 0.0 ? 0.0 : 1e300);
        const double f1 = n_t * (a1 + nc_over_rho) / (c1 * budget) + (cfg.N0 + nc_over_rho);
        return 2.0 * cfg.P_p * g2 / f1;
    };
    const double r_max = 0.5 * std::log2(1.0 + 2.0 * cfg.P_p * std::norm(ch.h_p) / n_t + bonus(rho_star));
    return {r_max, rho_star};
}

// Set of rho in [0,1] that admit any solution meeting the PU target:
// quadratic condition f_PS(rho) <= 0 intersected with the half-line where
// the AF relay can reach the residual SINR at all. At most one interval.
inline std::vector<Interval> ps_feasible_rho_range(const SystemConfig& cfg, const ChannelSet& ch,
                                                   double r_p) {
    cfg.validate();
    ch.validate();
    const auto k = detail::ps_consts(cfg, ch, r_p);
    if (k.gpp <= 0.0) return {{0.0, 1.0}};  // direct link already meets r_p
    if (!(k.b > 0.0)) return {};            // denominator never positive on [0,1]
    const double rho_den = k.gpp * cfg.NC / k.b;
    if (rho_den >= 1.0) return {};

    const double A = k.a * k.b;
    const double B = -k.a * k.gpp * cfg.NC - k.b * (2.0 * cfg.P_s0 + k.a) + k.c * k.a_over_eta;
    const double C = cfg.NC * (k.gpp * (2.0 * cfg.P_s0 + k.a) + k.c);

    const auto interval = detail::ps_quadratic_interval(A, B, C, rho_den);
    if (!(interval.hi >= interval.lo)) return {};
    // the rho_den boundary itself never supports the target; an interval
    // collapsed onto it (possible only when NC = 0) is empty
    if (interval.hi <= rho_den) return {};
    return {interval};
}

namespace detail {

// Inner solve at fixed rho. Returns the full solution in physical
// coordinates; infeasible -> feasible == false.
inline SchemeSolution ps_eval_at_rho(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                     double rho, const SolverSettings& st, Scheme tag,
                                     bool forbid_harvest = false) {
    SchemeSolution sol;
    sol.scheme = tag;
    sol.split.rho = rho;
    const auto k = ps_consts(cfg, ch, r_p);
    const double budget = forbid_harvest ? 2.0 * cfg.P_s0 : ps_budget(cfg, ch, rho);

    if (k.gpp <= 0.0) {
        // PU constraint vacuous: no relaying, everything on a matched beam.
        if (budget <= 0.0) {
            sol.feasible = true;
            sol.w_s = cvec(ch.h_s.size());
            sol.w_p = cvec(ch.h_s.size());
            sol.rate_pu = ps_rate_pu(cfg, ch, rho, sol.w_s, {});
            sol.rate_su = 0.0;
            return sol;
        }
        sol.feasible = true;
        sol.w_s = scaled(unit(ch.h_s), cplx{std::sqrt(budget), 0.0});
        sol.w_p = cvec(ch.h_s.size());
        sol.rate_pu = ps_rate_pu(cfg, ch, rho, sol.w_s, {});
        sol.rate_su = 0.5 * std::log2(1.0 + budget * k.hs2 / k.n_t);
        return sol;
    }

    const double den = k.b * rho - k.gpp * cfg.NC;
    if (!(den > 0.0) || budget <= 0.0) return sol;
    DualProblem dp{ch.h_sp, ch.h_s, k.n_t, ps_gamma_p_dprime(cfg, k, rho), budget};
    if (!dual_feasible(dp)) return sol;
    const DualSolution ds = solve_dual(dp, st);

    sol.feasible = true;
    sol.w_s = ds.w2;
    const double scale = std::sqrt(ps_compact_scale2(cfg, k, rho));
    sol.w_p = scaled(ds.w1, cplx{1.0 / scale, 0.0});
    sol.rate_su = 0.5 * std::log2(1.0 + ds.gamma2);
    sol.rate_pu = ps_rate_pu(cfg, ch, rho, sol.w_s, sol.w_p);
    return sol;
}

inline double ps_gamma2_at_rho(const SystemConfig& cfg, const ChannelSet& ch, const PsConsts& k,
                               double rho, const SolverSettings& st) {
    const double den = k.b * rho - k.gpp * cfg.NC;
    if (!(den > 0.0)) return kNegInf;
    const double budget = ps_budget(cfg, ch, rho);
    if (budget <= 0.0) return kNegInf;
    const double g1 = k.gpp * (rho * k.a_over_eta + cfg.NC) / den;
    DualProblem dp{ch.h_sp, ch.h_s, k.n_t, g1, budget};
    if (!dual_feasible(dp)) return kNegInf;
    return dual_gamma2(dp, st);
}

}  // namespace detail

// 1-D search over the feasible rho interval with an inner dual solve.
inline SchemeSolution ps_solve_optimal(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                       const SolverSettings& st) {
    cfg.validate();
    ch.validate();
    st.validate();
    const auto k = detail::ps_consts(cfg, ch, r_p);
    if (k.gpp <= 0.0) return detail::ps_eval_at_rho(cfg, ch, r_p, 0.0, st, Scheme::PowerSplit);

    const auto range = ps_feasible_rho_range(cfg, ch, r_p);
    SchemeSolution sol;
    sol.scheme = Scheme::PowerSplit;
    if (range.empty()) return sol;

    auto obj = [&](double rho) { return detail::ps_gamma2_at_rho(cfg, ch, k, rho, st); };
    const Opt1D best = maximize_1d(obj, range[0].lo, range[0].hi, st.grid_coarse, st.refine_rounds);
    if (!std::isfinite(best.value)) {
        // interval is a sliver; evaluate its midpoint directly
        const double mid = 0.5 * (range[0].lo + range[0].hi);
        return detail::ps_eval_at_rho(cfg, ch, r_p, mid, st, Scheme::PowerSplit);
    }
    return detail::ps_eval_at_rho(cfg, ch, r_p, best.x, st, Scheme::PowerSplit);
}

// Feasible rho set for the zero-forcing scheme: the same quadratic as
// ps_feasible_rho_range with c replaced by c_zf = c / (1 - delta^2) in both
// the linear and constant coefficients, so it matches q_s(rho) >= 0 exactly.
// Always a subset of the optimal scheme's interval since c_zf > c.
inline std::vector<Interval> ps_zf_feasible_rho_range(const SystemConfig& cfg,
                                                      const ChannelSet& ch, double r_p) {
    cfg.validate();
    ch.validate();
    if (ch.n() < 2)
        throw unsupported_config_error("ps_zf_feasible_rho_range: needs N >= 2");
    const auto k = detail::ps_consts(cfg, ch, r_p);
    if (k.gpp <= 0.0) return {{0.0, 1.0}};
    if (!(k.b > 0.0)) return {};
    const double rho_den = k.gpp * cfg.NC / k.b;
    if (rho_den >= 1.0) return {};
    const double zf_gain = 1.0 - alignment_cos2(ch.h_sp, ch.h_s);
    if (zf_gain <= 0.0) return {};
    const double c_zf = k.c / zf_gain;
    const double A = k.a * k.b;
    const double B = -k.a * k.gpp * cfg.NC - k.b * (2.0 * cfg.P_s0 + k.a) + c_zf * k.a_over_eta;
    const double C = cfg.NC * (k.gpp * (2.0 * cfg.P_s0 + k.a) + c_zf);
    const auto interval = detail::ps_quadratic_interval(A, B, C, rho_den);
    if (!(interval.hi >= interval.lo)) return {};
    if (interval.hi <= rho_den) return {};  // collapsed onto the open boundary
    return {interval};
}

// Stationary point of the ZF budget expression, clamped into [0, 1]. The
// gamma_0' subscript in the published closed form is read as gamma_p'.
inline double ps_rho_zf_closed_form(const SystemConfig& cfg, const ChannelSet& ch, double r_p) {
    cfg.validate();
    ch.validate();
    if (ch.n() < 2) throw unsupported_config_error("ps_rho_zf_closed_form: needs N >= 2");
    const auto k = detail::ps_consts(cfg, ch, r_p);
    if (k.gpp <= 0.0) return 0.0;  // clamp boundary: pure harvesting
    const double zf_gain = 1.0 - alignment_cos2(ch.h_sp, ch.h_s);
    if (zf_gain <= 0.0) throw degenerate_geometry_error("ps_rho_zf_closed_form: h_s parallel to h_sp");
    if (k.a <= 0.0) return 1.0;  // eta == 0: budget fixed, push the denominator up
    if (!(k.b > 0.0)) return 1.0;
    const double c_zf = k.c / zf_gain;
    const double root = std::sqrt(cfg.NC * c_zf) * std::sqrt(k.gpp + k.b / k.a);
    return std::clamp((root + k.gpp * cfg.NC) / k.b, 0.0, 1.0);
}

// Closed-form zero-forcing solution: mutually nulling directions, rho from
// the clamped stationary point, powers from constraint equality.
inline SchemeSolution ps_solve_zf(const SystemConfig& cfg, const ChannelSet& ch, double r_p) {
    cfg.validate();
    ch.validate();
    if (ch.n() < 2)
        throw unsupported_config_error("ps_solve_zf: needs N >= 2 for a nontrivial null space");
    SchemeSolution sol;
    sol.scheme = Scheme::PowerSplitZf;
    const auto k = detail::ps_consts(cfg, ch, r_p);
    const double delta2 = alignment_cos2(ch.h_sp, ch.h_s);
    const double zf_gain = 1.0 - delta2;
    if (zf_gain <= 0.0) throw degenerate_geometry_error("ps_solve_zf: h_s parallel to h_sp");

    if (k.gpp <= 0.0) {
        // Clamp boundary: pure harvesting, no relaying needed.
        sol.split.rho = 0.0;
        const double q_s = ps_budget(cfg, ch, 0.0);
        sol.feasible = true;
        const auto pp = project_pair(ch.h_sp, ch.h_s);
        sol.w_s = scaled(unit(pp.orthogonal), cplx{std::sqrt(q_s), 0.0});
        sol.w_p = cvec(ch.h_s.size());
        sol.rate_su = 0.5 * std::log2(1.0 + q_s * k.hs2 * zf_gain / k.n_t);
        sol.rate_pu = detail::ps_rate_pu(cfg, ch, 0.0, {}, {});
        sol.split.q_s = q_s;
        return sol;
    }

    const double c_zf = k.gpp * k.n_t / (k.hsp2 * zf_gain);
    const auto range = ps_zf_feasible_rho_range(cfg, ch, r_p);
    if (range.empty()) return sol;

    double rho = ps_rho_zf_closed_form(cfg, ch, r_p);
    rho = std::clamp(rho, range[0].lo, range[0].hi);
    if (!(k.b * rho - k.gpp * cfg.NC > 0.0)) {
        // NC = 0 knife edge: the interval closure touches rho = 0 where the
        // relay has nothing to amplify; step just inside.
        const double edge = k.gpp * cfg.NC / k.b;
        rho = std::min(range[0].hi, edge + 1e-9 * std::max(1e-12, range[0].hi - edge));
        if (!(k.b * rho - k.gpp * cfg.NC > 0.0)) return sol;
    }
    const double den = k.b * rho - k.gpp * cfg.NC;
    const double q_p = c_zf * (rho * k.a_over_eta + cfg.NC) / den;
    const double q_s = std::max(0.0, ps_budget(cfg, ch, rho) - q_p);

    sol.feasible = true;
    sol.split.rho = rho;
    sol.split.q_p = q_p;
    sol.split.q_s = q_s;
    const auto pp_s = project_pair(ch.h_sp, ch.h_s);
    const auto pp_p = project_pair(ch.h_s, ch.h_sp);
    sol.w_s = scaled(unit(pp_s.orthogonal), cplx{std::sqrt(q_s), 0.0});
    const double scale = std::sqrt(detail::ps_compact_scale2(cfg, k, rho));
    sol.w_p = scaled(unit(pp_p.orthogonal), cplx{std::sqrt(q_p) / scale, 0.0});
    sol.rate_su = 0.5 * std::log2(1.0 + q_s * k.hs2 * zf_gain / k.n_t);
    sol.rate_pu = detail::ps_rate_pu(cfg, ch, rho, sol.w_s, sol.w_p);
    return sol;
}

// "No energy cooperation" benchmark: same two-phase AF model with rho fixed
// to 1 and the ST limited to its own budget. Output carries no eta
// dependence by construction.
inline SchemeSolution ps_baseline_no_energy(const SystemConfig& cfg, const ChannelSet& ch,
                                            double r_p, const SolverSettings& st) {
    cfg.validate();
    ch.validate();
    st.validate();
    return detail::ps_eval_at_rho(cfg, ch, r_p, 1.0, st, Scheme::BaselineNoEnergy, true);
}

}  // namespace crcoop
