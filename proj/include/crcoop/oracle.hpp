#pragma once

// Brute-force verifiers used by tests. They search finite candidate sets of
// feasible points only, so every returned value is a certified lower bound
// on the true optimum, and never consult the production solvers.
//
// Math note, span restriction: in the two-user problem every inner product
// involves only h1 and h2, so any beamformer component in the orthogonal
// complement of span{h1,h2} changes no SINR while consuming power. The
// optimum therefore lies in the span, and with one free global phase per
// beamformer the search space reduces to two mixing angles, two relative
// phases and the power split -- five real parameters once the sum power is
// pinned to P_C (adding span-orthogonal power can only help the objective,
// so the budget is active whenever the span is two-dimensional).

#include <cmath>
#include <limits>
#include <vector>

#include "crcoop/complex_vec.hpp"
#include "crcoop/dual.hpp"
#include "crcoop/errors.hpp"
#include "crcoop/model.hpp"

namespace crcoop {

struct SpanGrid {
    int n_mag = 64;
    int n_phase = 64;

    void validate() const {
        if (n_mag < 16 || n_phase < 16) throw input_error("SpanGrid: axes must have >= 16 points");
    }
};

// Exhaustive feasible-point search for the two-user problem. The grid over
// the two phase axes factors out exactly (the constraint is phase-free in
// the Gram-Schmidt basis), so the scan is O(n_mag^2 * (n_mag + n_phase)).
// For each direction pair the power split that makes the SINR constraint
// tight is added as an extra candidate; it is a plain algebraic consequence
// of the constraint itself and keeps the candidate set nested as the grid
// densifies.
inline double oracle_best_su_rate(const DualProblem& prob, const SpanGrid& grid) {
    prob.validate();
    grid.validate();
    if (!dual_feasible(prob)) throw feasibility_error("oracle_best_su_rate: infeasible problem");

    const double n1 = norm2(prob.h1), n2 = norm2(prob.h2);
    const double sigma2 = prob.sigma2, gamma1 = prob.gamma1, P_C = prob.P_C;
    const double zeta2 = std::norm(vdot(prob.h1, prob.h2)) / (n1 * n2);

    const int nm = grid.n_mag, np = grid.n_phase;
    double best = 0.0;

    if (1.0 - zeta2 < 1e-12) {
        // Collinear channels: the span is one-dimensional, only the power
        // split matters.
        for (int k = 0; k <= nm; ++k) {
            const double t = static_cast<double>(k) / nm;
            const double p1 = t * P_C, p2 = (1.0 - t) * P_C;
            if (p1 * n1 + 1e-12 < gamma1 * (sigma2 + p2 * n1)) continue;
            best = std::max(best, p2 * n2 / (sigma2 + p1 * n2));
        }
        // constraint-tight split
        const double den = n1 + gamma1 * n1;
        const double t = gamma1 * (sigma2 + P_C * n1) / (P_C * den);
        if (t >= 0.0 && t <= 1.0) {
            const double p1 = t * P_C, p2 = (1.0 - t) * P_C;
            best = std::max(best, p2 * n2 / (sigma2 + p1 * n2));
        }
        return best;
    }

    // Gram-Schmidt basis of span{h1, h2}: e1 along h1, e2 the h2 remainder.
    const cvec e1 = unit(prob.h1);
    const auto pp = project_pair(prob.h1, prob.h2);
    const double r = vnorm(pp.orthogonal);
    const cplx d = vdot(e1, prob.h2);  // e1†h2; h2†(cos e1 + sin e^{jphi} e2) uses its conjugate

    // Per mixing angle psi: |h1† w|^2 = cos^2 * n1 (phase-free), and the h2
    // gain |conj(d) cos + r sin e^{jphi}|^2 scanned over the phase grid.
    // The two phases that exactly align / oppose the terms are appended to
    // the scan; they are plain algebra on |A + B e^{jphi}| and keep the
    // candidate set nested as the grid densifies. For each direction pair
    // the power split that makes the constraint tight is also a candidate.
    const double phi_align = std::arg(std::conj(d));
    auto phase_extremes = [&](double psi, double& qmax, double& qmin) {
        const double cs = std::cos(psi), sn = std::sin(psi);
        qmax = 0.0;
        qmin = std::numeric_limits<double>::infinity();
        auto scan = [&](double phi) {
            const cplx gain =
                std::conj(d) * cs + cplx{r * sn * std::cos(phi), r * sn * std::sin(phi)};
            const double q = std::norm(gain);
            qmax = std::max(qmax, q);
            qmin = std::min(qmin, q);
        };
        for (int k = 0; k < np; ++k) scan(2.0 * M_PI * static_cast<double>(k) / np);
        scan(phi_align);
        scan(phi_align + M_PI);
    };

    struct BoxBest {
        double value = 0.0;
        double psi1 = 0.0, psi2 = 0.0, t = 0.0;
    };
    auto scan_box = [&](double p1_lo, double p1_hi, double p2_lo, double p2_hi, double t_lo,
                        double t_hi) {
        BoxBest bb;
        std::vector<double> cos2_1(nm + 1), cos2_2(nm + 1), num2(nm + 1), i21(nm + 1);
        std::vector<double> psi1s(nm + 1), psi2s(nm + 1);
        for (int j = 0; j <= nm; ++j) {
            psi1s[j] = p1_lo + (p1_hi - p1_lo) * static_cast<double>(j) / nm;
            psi2s[j] = p2_lo + (p2_hi - p2_lo) * static_cast<double>(j) / nm;
            double qmax, qmin;
            phase_extremes(psi1s[j], qmax, qmin);
            cos2_1[j] = std::cos(psi1s[j]) * std::cos(psi1s[j]);
            i21[j] = qmin;  // minimizing phase for the w1 interference
            phase_extremes(psi2s[j], qmax, qmin);
            cos2_2[j] = std::cos(psi2s[j]) * std::cos(psi2s[j]);
            num2[j] = qmax;  // maximizing phase for the w2 signal gain
        }
        for (int j1 = 0; j1 <= nm; ++j1) {
            const double s1u = cos2_1[j1] * n1;
            for (int j2 = 0; j2 <= nm; ++j2) {
                const double i12u = cos2_2[j2] * n1;
                auto consider = [&](double t) {
                    if (!(t >= 0.0 && t <= 1.0)) return;
                    const double p1 = t * P_C, p2 = (1.0 - t) * P_C;
                    const double lhs = p1 * s1u;
                    const double rhs = gamma1 * (sigma2 + p2 * i12u);
                    if (lhs + 1e-9 * (1.0 + rhs) < rhs) return;
                    const double val = p2 * num2[j2] / (sigma2 + p1 * i21[j1]);
                    if (val > bb.value) bb = {val, psi1s[j1], psi2s[j2], t};
                };
                for (int k = 0; k <= nm; ++k)
                    consider(t_lo + (t_hi - t_lo) * static_cast<double>(k) / nm);
                const double den = P_C * (s1u + gamma1 * i12u);
                if (den > 0.0) consider(gamma1 * (sigma2 + P_C * i12u) / den);
            }
        }
        return bb;
    };

    const BoxBest coarse = scan_box(0.0, 0.5 * M_PI, 0.0, 0.5 * M_PI, 0.0, 1.0);
    best = std::max(best, coarse.value);
    if (coarse.value > 0.0) {
        // one deterministic zoom around the incumbent: two cells each way
        const double dpsi = 2.0 * (0.5 * M_PI) / nm;
        const double dt = 2.0 / nm;
        const BoxBest fine = scan_box(
            std::max(0.0, coarse.psi1 - dpsi), std::min(0.5 * M_PI, coarse.psi1 + dpsi),
            std::max(0.0, coarse.psi2 - dpsi), std::min(0.5 * M_PI, coarse.psi2 + dpsi),
            std::max(0.0, coarse.t - dt), std::min(1.0, coarse.t + dt));
        best = std::max(best, fine.value);
    }
    return best;
}

// Exhaustive grid for the ideal scheme over (beta, q_p, lambda), using the
// two-direction parametrization of w_s inside span{h_s projected on h_sp and
// its complement}. Feasibility is checked against the raw PU constraint at
// every candidate. Returns the best |h_s† w_s| found.
inline double oracle_ideal(const SystemConfig& cfg, const ChannelSet& ch, double r_p,
                           const SpanGrid& grid) {
    cfg.validate();
    ch.validate();
    grid.validate();
    const double gamma = std::exp2(r_p) - 1.0;
    const double n_t = cfg.n_tilde0();
    const double hp = std::abs(ch.h_p);
    const double c2 = norm2(ch.h_sp);
    const double c = std::sqrt(c2);
    const auto pp = project_pair(ch.h_sp, ch.h_s);
    const double npar = vnorm(pp.parallel);
    const double nperp = vnorm(pp.orthogonal);

    const int nm = grid.n_mag;
    double best = -1.0;
    for (int ib = 0; ib <= nm; ++ib) {
        const double beta = static_cast<double>(ib) / nm;
        const double budget = cfg.P_s0 + beta * cfg.eta * cfg.P_p;
        const double direct = std::sqrt((1.0 - beta) * cfg.P_p) * hp;
        for (int iq = 0; iq <= nm; ++iq) {
            const double q_p = budget * static_cast<double>(iq) / nm;
            const double q_s = budget - q_p;
            const double base = (direct + std::sqrt(q_p) * c) * (direct + std::sqrt(q_p) * c);
            auto consider = [&](double lam) {
                if (!(lam >= 0.0 && lam <= 1.0)) return;
                const double interf = lam * q_s * c2;
                if (base + 1e-9 * (1.0 + gamma * (interf + n_t)) < gamma * (interf + n_t)) return;
                const double val =
                    std::sqrt(lam * q_s) * npar + std::sqrt((1.0 - lam) * q_s) * nperp;
                best = std::max(best, val);
            };
            for (int il = 0; il <= nm; ++il) consider(static_cast<double>(il) / nm);
            if (gamma > 0.0 && q_s > 0.0)
                consider((base / gamma - n_t) / (q_s * c2));  // constraint-tight lambda
        }
    }
    if (best < 0.0) throw feasibility_error("oracle_ideal: no feasible grid point");
    return best;
}

}  // namespace crcoop
