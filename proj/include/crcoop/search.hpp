#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace crcoop {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Opt1D {
    double x = 0.0;
    double value = kNegInf;  // -inf means no feasible point found
};

// Grid scan (endpoints included) followed by a golden-section pass inside the
// bracket around the incumbent. Objectives may return -inf for infeasible
// points. Each refine round shrinks the bracket by at least 4x.
template <class F>
Opt1D maximize_1d(F&& f, double lo, double hi, int n_grid, int refine_rounds) {
    Opt1D best;
    if (!(hi >= lo)) return best;
    if (hi == lo || n_grid < 2) {
        best.x = lo;
        best.value = f(lo);
        return best;
    }
    const int n = std::max(2, n_grid);
    int best_i = -1;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double v = f(x);
        if (v > best.value) {
            best = {x, v};
            best_i = i;
        }
    }
    if (best_i < 0 || !std::isfinite(best.value)) return best;

    double a = lo + (hi - lo) * static_cast<double>(std::max(0, best_i - 1)) / (n - 1);
    double b = lo + (hi - lo) * static_cast<double>(std::min(n - 1, best_i + 1)) / (n - 1);
    // 0.618^k <= 4^-rounds  =>  k ~= 2.88 * rounds
    const int iters = 3 * refine_rounds + 2;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    if (fc > best.value) best = {c, fc};
    if (fd > best.value) best = {d, fd};
    for (int it = 0; it < iters; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if (fc > best.value) best = {c, fc};
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if (fd > best.value) best = {d, fd};
        }
    }
    return best;
}

struct Opt2D {
    double x = 0.0;
    double y = 0.0;
    double value = kNegInf;
};

// Coarse grid over the rectangle, then refine_rounds rounds re-gridding a
// window shrunk 4x around the incumbent. Stops early once a round improves
// the objective by less than rel_tol relatively.
template <class F>
Opt2D maximize_2d(F&& f, double xlo, double xhi, double ylo, double yhi, int n_grid,
                  int refine_rounds, double rel_tol) {
    Opt2D best;
    const int n = std::max(2, n_grid);
    double wx_lo = xlo, wx_hi = xhi, wy_lo = ylo, wy_hi = yhi;
    for (int round = 0; round <= refine_rounds; ++round) {
        const double prev = best.value;
        for (int i = 0; i < n; ++i) {
            const double x = (n == 1) ? wx_lo : wx_lo + (wx_hi - wx_lo) * i / double(n - 1);
            for (int j = 0; j < n; ++j) {
                const double y = (n == 1) ? wy_lo : wy_lo + (wy_hi - wy_lo) * j / double(n - 1);
                const double v = f(x, y);
                if (v > best.value) best = {x, y, v};
            }
        }
        if (!std::isfinite(best.value)) break;  // nothing feasible anywhere
        if (round > 0 && std::isfinite(prev) &&
            best.value - prev <= rel_tol * std::max(1.0, std::fabs(prev)))
            break;
        const double hx = (wx_hi - wx_lo) / 8.0, hy = (wy_hi - wy_lo) / 8.0;
        wx_lo = std::max(xlo, best.x - hx);
        wx_hi = std::min(xhi, best.x + hx);
        wy_lo = std::max(ylo, best.y - hy);
        wy_hi = std::min(yhi, best.y + hy);
    }
    return best;
}

}  // namespace crcoop
