#pragma once

// Shared generators for the test suites. Everything is seeded explicitly so
// runs are reproducible.

#include <random>

#include "crcoop/dual.hpp"
#include "crcoop/model.hpp"

namespace testutil {

using namespace crcoop;

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

inline cplx random_cplx(std::mt19937_64& eng, double scale = 1.0) {
    // Box-Muller keeps this independent of libstdc++'s distribution details.
    const double u1 = std::max(uniform01(eng), 1e-300);
    const double u2 = uniform01(eng);
    const double r = scale * std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

inline cvec random_cvec(std::mt19937_64& eng, int n, double scale = 1.0) {
    cvec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = random_cplx(eng, scale);
    return v;
}

// Complex-Gaussian channels; broader than the fixed-magnitude model so the
// solvers see varied norms and alignments.
inline ChannelSet random_channel(std::mt19937_64& eng, int n, double hp_scale = 0.3) {
    ChannelSet ch;
    ch.h_p = random_cplx(eng, hp_scale);
    ch.g = random_cvec(eng, n);
    ch.h_s = random_cvec(eng, n);
    ch.h_sp = random_cvec(eng, n);
    return ch;
}

// Simulation-default channel: unit ST distances, 2 m primary link,
// path-loss exponent 3.5.
inline ChannelSet sim_channel(std::uint64_t seed, int n = 4) {
    return make_channel_set(n, 1.0, 2.0, 3.5, seed);
}

inline DualProblem random_dual_problem(std::mt19937_64& eng) {
    const int n = 2 + static_cast<int>(eng() % 3);  // N in {2,3,4}
    DualProblem p;
    p.h1 = random_cvec(eng, n);
    p.h2 = random_cvec(eng, n);
    p.sigma2 = uniform(eng, 0.5, 2.0);
    p.P_C = uniform(eng, 2.0, 50.0);
    const double cap = p.P_C * norm2(p.h1) / p.sigma2;
    p.gamma1 = uniform(eng, 0.0, 0.8) * cap;
    return p;
}

inline SystemConfig sim_defaults() {
    SystemConfig cfg;
    cfg.P_p = 100.0;   // 20 dB
    cfg.P_s0 = 10.0;   // 10 dB
    cfg.eta = 0.5;
    cfg.N0 = 1.0;
    cfg.NC = 1.0;
    cfg.r_p = 3.0;
    cfg.P_max = 1000.0;  // 30 dB
    cfg.N = 4;
    return cfg;
}

}  // namespace testutil
