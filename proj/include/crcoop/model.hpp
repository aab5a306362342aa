#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "crcoop/complex_vec.hpp"
#include "crcoop/errors.hpp"

namespace crcoop {

// One realization of all four links. h_p is the direct PT->PU gain; g, h_s
// and h_sp are the PT->ST, ST->SU and ST->PU vectors seen by the ST's N
// antennas.
struct ChannelSet {
    cplx h_p{0.0, 0.0};
    cvec g;
    cvec h_s;
    cvec h_sp;

    int n() const { return static_cast<int>(h_s.size()); }

    void validate() const {
        if (h_s.empty()) throw input_error("ChannelSet: empty h_s");
        if (g.size() != h_s.size() || h_s.size() != h_sp.size())
            throw input_error("ChannelSet: antenna count mismatch");
        if (!all_finite(g) || !all_finite(h_s) || !all_finite(h_sp) ||
            !std::isfinite(h_p.real()) || !std::isfinite(h_p.imag()))
            throw input_error("ChannelSet: non-finite entry");
        if (norm2(h_s) <= 0.0 || norm2(h_sp) <= 0.0)
            throw input_error("ChannelSet: degenerate h_s or h_sp");
    }
};

struct SystemConfig {
    double P_p = 100.0;    // PT average power, linear watts
    double P_s0 = 10.0;    // ST initial power, linear watts
    double eta = 0.5;      // energy-transfer efficiency in [0, 1]
    double N0 = 1.0;       // thermal noise variance
    double NC = 1.0;       // RF-to-baseband conversion noise variance
    double r_p = 3.0;      // PU rate demand, bits/s/Hz
    double P_max = 1000.0; // PT peak power, linear watts
    int N = 4;             // ST antenna count

    double n_tilde0() const { return N0 + NC; }

    void validate() const {
        if (!(P_p > 0.0)) throw input_error("SystemConfig: P_p must be positive");
        if (P_s0 < 0.0) throw input_error("SystemConfig: P_s0 must be nonnegative");
        if (eta < 0.0 || eta > 1.0) throw input_error("SystemConfig: eta outside [0,1]");
        if (!(N0 > 0.0)) throw input_error("SystemConfig: N0 must be positive");
        if (NC < 0.0) throw input_error("SystemConfig: NC must be nonnegative");
        if (P_max < P_p) throw input_error("SystemConfig: P_max below P_p");
        if (N < 1) throw input_error("SystemConfig: N must be >= 1");
    }
};

struct SolverSettings {
    int grid_coarse = 48;     // points per search dimension
    int refine_rounds = 4;    // 4x window shrink per round
    double rel_tol = 1e-6;    // relative objective tolerance
    double bisect_tol = 1e-10;// absolute dual-variable bisection tolerance

    bool operator==(const SolverSettings&) const = default;

    void validate() const {
        if (grid_coarse < 8) throw input_error("SolverSettings: grid_coarse < 8");
        if (refine_rounds < 0) throw input_error("SolverSettings: refine_rounds < 0");
        if (!(rel_tol > 0.0)) throw input_error("SolverSettings: rel_tol <= 0");
        if (!(bisect_tol > 0.0)) throw input_error("SolverSettings: bisect_tol <= 0");
    }
};

enum class Scheme {
    Ideal,
    IdealZf,
    PowerSplit,
    PowerSplitZf,
    TimeSplit,
    TimeSplitZf,
    BaselineNoEnergy,
};

inline std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Ideal: return "ideal";
        case Scheme::IdealZf: return "ideal-zf";
        case Scheme::PowerSplit: return "power-split";
        case Scheme::PowerSplitZf: return "power-split-zf";
        case Scheme::TimeSplit: return "time-split";
        case Scheme::TimeSplitZf: return "time-split-zf";
        case Scheme::BaselineNoEnergy: return "no-energy";
    }
    throw internal_error("scheme_name: bad enum");
}

// Scheme variables; only the fields of the owning scheme are meaningful.
struct SchemeSplit {
    double beta = 0.0;    // ideal: fraction of PT energy transferred
    double q_p = 0.0;     // ideal: relay power ||w_p||^2
    double q_s = 0.0;     // ideal: secondary power ||w_s||^2
    double lambda = 0.0;  // ideal: beamformer mixing weight
    double rho = 0.0;     // power split
    double alpha = 0.0;   // time split: EH slot duration
    double P_p1 = 0.0;    // time split: Phase-I PT power
    double P_p2 = 0.0;    // time split: Phase-II PT power
};

struct SchemeSolution {
    Scheme scheme = Scheme::Ideal;
    bool feasible = false;
    SchemeSplit split;
    cvec w_s;
    cvec w_p;
    double rate_pu = 0.0;
    double rate_su = 0.0;
};

struct RateRegionPoint {
    double r_p = 0.0;  // PU rate target
    double r_s = 0.0;  // max SU rate at that target
};
using RateRegionCurve = std::vector<RateRegionPoint>;

// ---------------------------------------------------------------------------
// Randomness and channel generation
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the raw engine; avoids the
// implementation-defined std::uniform_real_distribution so output is
// reproducible across standard libraries.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Entries have deterministic magnitude distance^(-exponent/2) and i.i.d.
// uniform phases. The engine is taken by value: same seed, same vector.
inline cvec generate_channel(double distance_m, double exponent, int n, std::mt19937_64 rng) {
    if (!(distance_m > 0.0)) throw input_error("generate_channel: distance must be positive");
    if (n < 1) throw input_error("generate_channel: n must be >= 1");
    const double mag = std::pow(distance_m, -exponent / 2.0);
    cvec out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double omega = 2.0 * M_PI * uniform01(rng);
        out[static_cast<std::size_t>(i)] = cplx{mag * std::cos(omega), mag * std::sin(omega)};
    }
    return out;
}

// Derives one independent substream per link so a ChannelSet is a pure
// function of (geometry, seed).
inline ChannelSet make_channel_set(int n, double st_to_all_m, double pt_to_pu_m, double exponent,
                                   std::uint64_t seed) {
    ChannelSet ch;
    std::mt19937_64 e_p(splitmix64(seed ^ 0x68705F70ULL));
    std::mt19937_64 e_g(splitmix64(seed ^ 0x67ULL));
    std::mt19937_64 e_s(splitmix64(seed ^ 0x68735F73ULL));
    std::mt19937_64 e_sp(splitmix64(seed ^ 0x68735F7370ULL));
    ch.h_p = generate_channel(pt_to_pu_m, exponent, 1, e_p)[0];
    ch.g = generate_channel(st_to_all_m, exponent, n, e_g);
    ch.h_s = generate_channel(st_to_all_m, exponent, n, e_s);
    ch.h_sp = generate_channel(st_to_all_m, exponent, n, e_sp);
    return ch;
}

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return splitmix64(master_seed ^ splitmix64(trial_index + 1));
}

}  // namespace crcoop
