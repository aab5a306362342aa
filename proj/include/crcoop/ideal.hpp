#pragma once

// Ideal cooperation: the primary message is non-causally shared and energy
// moves over a lossless backhaul scaled by eta. One full-length phase, DPC
// at the ST, so the SU sees no primary interference.

#include <cmath>

#include "crcoop/complex_vec.hpp"
#include "crcoop/errors.hpp"
#include "crcoop/model.hpp"
#include "crcoop/search.hpp"

namespace crcoop {

struct IdealMaxRate {
    double r_p_max = 0.0;
    double beta_star = 0.0;
    bool degenerate = false;  // no signal path to the PU at all
};

// Max PU rate: all ST power relays, beta at the clamped critical point of
// f(beta) = sqrt((1-beta)P_p)|h_p| + sqrt(P_s0 + beta eta P_p)||h_sp||.
// f is concave, so the clamp is exact.
inline IdealMaxRate ideal_max_pu_rate(const SystemConfig& cfg, const ChannelSet& ch) {
    cfg.validate();
    ch.validate();
    const double hp = std::abs(ch.h_p);
    const double c2 = norm2(ch.h_sp);
    const double denom = cfg.P_p * cfg.eta * cfg.eta * c2 + cfg.eta * cfg.P_p * hp * hp;
    IdealMaxRate out;
    if (denom > 0.0) {
        const double crit = (cfg.P_p * cfg.eta * cfg.eta * c2 - cfg.P_s0 * hp * hp) / denom;
        out.beta_star = std::clamp(crit, 0.0, 1.0);
    } else {
        out.beta_star = 0.0;  // eta == 0: transferring energy buys nothing
    }
    const double f = std::sqrt((1.0 - out.beta_star) * cfg.P_p) * hp +
                     std::sqrt(cfg.P_s0 + out.beta_star * cfg.eta * cfg.P_p) * std::sqrt(c2);
    out.r_p_max = std::log2(1.0 + f * f / cfg.n_tilde0());
    out.degenerate = (f * f <= 0.0);
    return out;
}

namespace detail {

struct IdealGeometry {
    double hp, c, c2, npar, nperp, lambda_mf;
    cvec upar, uperp;  // unit vectors; uperp empty when N == 1 or h_s || h_sp
};

inline IdealGeometry ideal_geometry(const ChannelSet& ch) {
    IdealGeometry g;
    g.hp = std::abs(ch.h_p);
    g.c2 = norm2(ch.h_sp);
    g.c = std::sqrt(g.c2);
    const auto pp = project_pair(ch.h_sp, ch.h_s);
    g.npar = vnorm(pp.parallel);
    g.nperp = vnorm(pp.orthogonal);
    const double hs2 = g.npar * g.npar + g.nperp * g.nperp;
    g.lambda_mf = (hs2 > 0.0) ? g.npar * g.npar / hs2 : 0.0;
    if (g.npar > 0.0) g.upar = unit(pp.parallel);
    if (g.nperp > 1e-14 * std::sqrt(hs2)) g.uperp = unit(pp.orthogonal);
    return g;
}

// Best |h_s†w_s| attainable at a fixed (beta, q_p); -inf when infeasible.
// lambda is capped at the matched-filter mix when the PU constraint has
// slack, which keeps the objective exact on the whole rectangle (including
// r_p = 0, where the constraint is vacuous).
inline double ideal_point_objective(const SystemConfig& cfg, const IdealGeometry& g, double gamma,
                                    double beta, double q_p, double* lambda_out = nullptr) {
    const double budget = cfg.P_s0 + beta * cfg.eta * cfg.P_p;
    const double q_s = budget - q_p;
    if (q_s < 0.0) return kNegInf;
    const double amp = std::sqrt((1.0 - beta) * cfg.P_p) * g.hp + std::sqrt(q_p) * g.c;
    const double base = amp * amp;
    double lambda = g.lambda_mf;
    if (gamma > 0.0) {
        if (q_s <= 0.0) {
            if (base < gamma * cfg.n_tilde0()) return kNegInf;
            if (lambda_out) *lambda_out = 0.0;
            return 0.0;
        }
        const double lf = (base / gamma - cfg.n_tilde0()) / (q_s * g.c2);
        if (lf < 0.0) return kNegInf;
        lambda = std::min(lf, g.lambda_mf);
    }
    if (lambda_out) *lambda_out = lambda;
    return std::sqrt(lambda * q_s) * g.npar + std::sqrt((1.0 - lambda) * q_s) * g.nperp;
}

}  // namespace detail

// Two-variable search over (beta, q_p); w_s recovered from the
// parallel/orthogonal parametrization and w_p phase-aligned with the direct
// path so amplitudes add coherently.
inline SchemeSolution ideal_solve_optimal(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                                          const SolverSettings& st) {
    cfg.validate();
    ch.validate();
    st.validate();
    SchemeSolution sol;
    sol.scheme = Scheme::Ideal;
    const auto mr = ideal_max_pu_rate(cfg, ch);
    if (r_p > mr.r_p_max) return sol;  // infeasible, not an error

    const double gamma = std::exp2(r_p) - 1.0;
    const auto g = detail::ideal_geometry(ch);
    const double budget_max = cfg.P_s0 + cfg.eta * cfg.P_p;

    auto obj = [&](double beta, double q_p) {
        return detail::ideal_point_objective(cfg, g, gamma, beta, q_p);
    };
    Opt2D best = maximize_2d(obj, 0.0, 1.0, 0.0, budget_max, st.grid_coarse, st.refine_rounds,
                             st.rel_tol);
    // All-relay fallback: feasible with zero SU rate whenever r_p <= R_p,max.
    {
        const double q_full = cfg.P_s0 + mr.beta_star * cfg.eta * cfg.P_p;
        const double v = obj(mr.beta_star, q_full);
        if (v > best.value) best = {mr.beta_star, q_full, v};
    }
    if (!std::isfinite(best.value)) return sol;

    double lambda = 0.0;
    const double value = detail::ideal_point_objective(cfg, g, gamma, best.x, best.y, &lambda);
    const double q_s = cfg.P_s0 + best.x * cfg.eta * cfg.P_p - best.y;

    sol.feasible = true;
    sol.split.beta = best.x;
    sol.split.q_p = best.y;
    sol.split.q_s = q_s;
    sol.split.lambda = lambda;
    sol.w_s = cvec(ch.h_s.size());
    if (!g.upar.empty()) {
        const double apar = std::sqrt(lambda * q_s);
        for (std::size_t i = 0; i < sol.w_s.size(); ++i) sol.w_s[i] += apar * g.upar[i];
    }
    if (!g.uperp.empty()) {
        const double aperp = std::sqrt((1.0 - lambda) * q_s);
        for (std::size_t i = 0; i < sol.w_s.size(); ++i) sol.w_s[i] += aperp * g.uperp[i];
    }
    const cplx phase = (g.hp > 0.0) ? ch.h_p / g.hp : cplx{1.0, 0.0};
    sol.w_p = scaled(unit(ch.h_sp), phase * std::sqrt(best.y));

    const double amp = std::sqrt((1.0 - best.x) * cfg.P_p) * g.hp + std::sqrt(best.y) * g.c;
    sol.rate_pu =
        std::log2(1.0 + amp * amp / (std::norm(vdot(ch.h_sp, sol.w_s)) + cfg.n_tilde0()));
    sol.rate_su = std::log2(1.0 + value * value / cfg.n_tilde0());
    return sol;
}

// Closed-form zero-forcing variant: w_s nulls the ST->PU leak, beta from the
// stationary point of the budget expression, q_p from PU-constraint equality
// (zero when the direct path alone meets the target).
inline SchemeSolution ideal_solve_zf(const SystemConfig& cfg, const ChannelSet& ch, double r_p) {
    cfg.validate();
    ch.validate();
    if (ch.n() < 2)
        throw unsupported_config_error("ideal_solve_zf: needs N >= 2 for a nontrivial null space");
    SchemeSolution sol;
    sol.scheme = Scheme::IdealZf;

    const double gamma = std::exp2(r_p) - 1.0;
    const double n_t = cfg.n_tilde0();
    const double hp = std::abs(ch.h_p);
    const double c2 = norm2(ch.h_sp);
    const double c = std::sqrt(c2);
    const double delta2 = alignment_cos2(ch.h_sp, ch.h_s);

    double beta;
    if (hp > 0.0) {
        const double lever = hp + cfg.eta * c2 / hp;
        beta = std::clamp(1.0 - gamma * n_t / (cfg.P_p * lever * lever), 0.0, 1.0);
    } else {
        beta = (cfg.eta * c2 > 0.0) ? 1.0 : 0.0;  // PU relies entirely on the ST
    }
    const double direct = std::sqrt((1.0 - beta) * cfg.P_p) * hp;
    const double need = std::max(0.0, std::sqrt(gamma * n_t) - direct);
    const double q_p = need * need / c2;
    const double q_s = cfg.P_s0 + beta * cfg.eta * cfg.P_p - q_p;
    if (q_s < 0.0) return sol;  // infeasible

    sol.feasible = true;
    sol.split.beta = beta;
    sol.split.q_p = q_p;
    sol.split.q_s = q_s;
    const auto pp = project_pair(ch.h_sp, ch.h_s);
    sol.w_s = scaled(unit(pp.orthogonal), cplx{std::sqrt(q_s), 0.0});
    const cplx phase = (hp > 0.0) ? ch.h_p / hp : cplx{1.0, 0.0};
    sol.w_p = scaled(unit(ch.h_sp), phase * std::sqrt(q_p));
    const double amp = direct + std::sqrt(q_p) * c;
    sol.rate_pu = std::log2(1.0 + amp * amp / n_t);
    sol.rate_su = std::log2(1.0 + q_s * norm2(ch.h_s) * (1.0 - delta2) / n_t);
    return sol;
}

// Sweeps r_p over [0, R_p,max] and records the max SU rate at each target.
inline RateRegionCurve ideal_rate_region(const SystemConfig& cfg, const ChannelSet& ch,
                                         int n_points, const SolverSettings& st) {
    if (n_points < 2) throw input_error("ideal_rate_region: n_points must be >= 2");
    const auto mr = ideal_max_pu_rate(cfg, ch);
    RateRegionCurve curve;
    curve.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double r = mr.r_p_max * static_cast<double>(i) / (n_points - 1);
        const auto s = ideal_solve_optimal(cfg, ch, r, st);
        curve.push_back({r, s.feasible ? s.rate_su : 0.0});
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].r_s > curve[i - 1].r_s + st.rel_tol * std::max(1.0, curve[i - 1].r_s))
            throw internal_error("ideal_rate_region: SU rate not non-increasing");
    }
    return curve;
}

}  // namespace crcoop
