#pragma once

// Experiment harness: configuration parsing, Monte Carlo driving, CSV
// output. Per-trial work is parallelized over a worker pool; results are
// stored by trial index and reduced after a barrier, so output bytes do not
// depend on the worker count.

#include <atomic>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "crcoop/errors.hpp"
#include "crcoop/ideal.hpp"
#include "crcoop/model.hpp"
#include "crcoop/power_split.hpp"
#include "crcoop/presets.hpp"
#include "crcoop/time_split.hpp"

namespace crcoop {

enum class Experiment { RateRegion, SuSweep, Outage, RhoCurve, AlphaCurve, Feasibility };

// Scheme set understood by the harness; Direct is the no-cooperation
// primary link used as the outage reference.
enum class RunScheme {
    Direct,
    Ideal,
    IdealZf,
    PowerSplit,
    PowerSplitZf,
    TimeSplit,
    TimeSplitZf,
    BaselineNoEnergy,
};

inline std::string run_scheme_name(RunScheme s) {
    if (s == RunScheme::Direct) return "direct";
    return scheme_name(static_cast<Scheme>(static_cast<int>(s) - 1));
}

inline RunScheme run_scheme_from_name(const std::string& name) {
    static const char* names[] = {"direct",     "ideal",         "ideal-zf",      "power-split",
                                  "power-split-zf", "time-split", "time-split-zf", "no-energy"};
    for (int i = 0; i < 8; ++i)
        if (name == names[i]) return static_cast<RunScheme>(i);
    throw config_error("unknown scheme '" + name + "'");
}

inline std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::RateRegion: return "rate-region";
        case Experiment::SuSweep: return "su-sweep";
        case Experiment::Outage: return "outage";
        case Experiment::RhoCurve: return "rho-curve";
        case Experiment::AlphaCurve: return "alpha-curve";
        case Experiment::Feasibility: return "feasibility";
    }
    throw internal_error("experiment_name: bad enum");
}

inline Experiment experiment_from_name(const std::string& name) {
    static const char* names[] = {"rate-region", "su-sweep",    "outage",
                                  "rho-curve",   "alpha-curve", "feasibility"};
    for (int i = 0; i < 6; ++i)
        if (name == names[i]) return static_cast<Experiment>(i);
    throw config_error("unknown experiment '" + name + "'");
}

struct SweepSpec {
    std::string variable = "p_s0_db";
    double start = 0.0;
    double stop = 20.0;
    int points = 3;

    bool operator==(const SweepSpec&) const = default;
};

struct Distances {
    double st_to_all_m = 1.0;
    double pt_to_pu_m = 2.0;

    bool operator==(const Distances&) const = default;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::RateRegion;
    std::vector<RunScheme> schemes;  // empty -> per-experiment default
    int trials = 1000;
    std::uint64_t seed = 1;
    Distances distances;
    double exponent = 3.5;
    SweepSpec sweep;
    double r_p = 3.0;
    double r_s = 4.0;  // outage only
    std::vector<double> eta_list = {0.5};
    std::string output_path = "out.csv";
    int n_antennas = 4;
    double p_p_db = 20.0;
    double p_s0_db = 10.0;
    double p_max_db = 30.0;
    double n0 = 1.0;
    double nc = 1.0;
    std::string preset;  // empty, or fig2 / fig5 / fig6
    int region_points = 12;
    int param_points = 41;
    int threads = 0;  // 0 = hardware concurrency
    SolverSettings solver;

    bool operator==(const ExperimentConfig&) const = default;

    void validate() const {
        if (trials < 1) throw config_error("trials must be >= 1");
        if (sweep.points < 2) throw config_error("sweep_points must be >= 2");
        if (region_points < 2) throw config_error("region_points must be >= 2");
        if (param_points < 2) throw config_error("param_points must be >= 2");
        if (eta_list.empty()) throw config_error("eta list must not be empty");
        for (double e : eta_list)
            if (e < 0.0 || e > 1.0) throw config_error("eta values must lie in [0,1]");
        if (n_antennas < 1) throw config_error("n_antennas must be >= 1");
        if (threads < 0) throw config_error("threads must be >= 0");
        if (!preset.empty() && preset != "fig2" && preset != "fig5" && preset != "fig6")
            throw config_error("unknown preset '" + preset + "'");
        try {
            system_config(eta_list.front()).validate();
        } catch (const input_error& e) {
            throw config_error(e.what());
        }
    }

    SystemConfig system_config(double eta) const {
        if (!preset.empty()) {
            SystemConfig c = make_preset(preset).cfg;
            return c;
        }
        SystemConfig c;
        c.P_p = db_to_linear(p_p_db);
        c.P_s0 = db_to_linear(p_s0_db);
        c.eta = eta;
        c.N0 = n0;
        c.NC = nc;
        c.r_p = r_p;
        c.P_max = db_to_linear(p_max_db);
        c.N = n_antennas;
        return c;
    }

    ChannelSet fixed_channel() const {
        if (!preset.empty()) return make_preset(preset).ch;
        return make_channel_set(n_antennas, distances.st_to_all_m, distances.pt_to_pu_m, exponent,
                                trial_seed(seed, 0));
    }
};

// ---------------------------------------------------------------------------
// Config file: flat key=value text, '#' comments, strict keys.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

inline double parse_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw config_error("");
        return x;
    } catch (...) {
        throw config_error(where + ": malformed number '" + v + "'");
    }
}

inline long long parse_int(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw config_error("");
        return x;
    } catch (...) {
        throw config_error(where + ": malformed integer '" + v + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw config_error("");
        return x;
    } catch (...) {
        throw config_error(where + ": malformed unsigned integer '" + v + "'");
    }
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw config_error(where + ": expected key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_error(where + ": empty key");

        if (key == "experiment") cfg.experiment = experiment_from_name(val);
        else if (key == "schemes") {
            cfg.schemes.clear();
            for (const auto& s : detail::split_list(val)) cfg.schemes.push_back(run_scheme_from_name(s));
        } else if (key == "trials") cfg.trials = static_cast<int>(detail::parse_int(val, where));
        else if (key == "seed") cfg.seed = detail::parse_u64(val, where);
        else if (key == "st_to_all_m") cfg.distances.st_to_all_m = detail::parse_double(val, where);
        else if (key == "pt_to_pu_m") cfg.distances.pt_to_pu_m = detail::parse_double(val, where);
        else if (key == "exponent") cfg.exponent = detail::parse_double(val, where);
        else if (key == "sweep_variable") cfg.sweep.variable = val;
        else if (key == "sweep_start") cfg.sweep.start = detail::parse_double(val, where);
        else if (key == "sweep_stop") cfg.sweep.stop = detail::parse_double(val, where);
        else if (key == "sweep_points") cfg.sweep.points = static_cast<int>(detail::parse_int(val, where));
        else if (key == "r_p") cfg.r_p = detail::parse_double(val, where);
        else if (key == "r_s") cfg.r_s = detail::parse_double(val, where);
        else if (key == "eta") {
            cfg.eta_list.clear();
            for (const auto& s : detail::split_list(val))
                cfg.eta_list.push_back(detail::parse_double(s, where));
        } else if (key == "out") cfg.output_path = val;
        else if (key == "n_antennas") cfg.n_antennas = static_cast<int>(detail::parse_int(val, where));
        else if (key == "p_p_db") cfg.p_p_db = detail::parse_double(val, where);
        else if (key == "p_s0_db") cfg.p_s0_db = detail::parse_double(val, where);
        else if (key == "p_max_db") cfg.p_max_db = detail::parse_double(val, where);
        else if (key == "n0") cfg.n0 = detail::parse_double(val, where);
        else if (key == "nc") cfg.nc = detail::parse_double(val, where);
        else if (key == "preset") cfg.preset = val;
        else if (key == "region_points") cfg.region_points = static_cast<int>(detail::parse_int(val, where));
        else if (key == "param_points") cfg.param_points = static_cast<int>(detail::parse_int(val, where));
        else if (key == "threads") cfg.threads = static_cast<int>(detail::parse_int(val, where));
        else if (key == "grid_coarse") cfg.solver.grid_coarse = static_cast<int>(detail::parse_int(val, where));
        else if (key == "refine_rounds") cfg.solver.refine_rounds = static_cast<int>(detail::parse_int(val, where));
        else if (key == "rel_tol") cfg.solver.rel_tol = detail::parse_double(val, where);
        else if (key == "bisect_tol") cfg.solver.bisect_tol = detail::parse_double(val, where);
        else throw config_error(where + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

inline std::string format_sig9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "experiment=" << experiment_name(cfg.experiment) << "\n";
    if (!cfg.schemes.empty()) {
        out << "schemes=";
        for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
            out << (i ? "," : "") << run_scheme_name(cfg.schemes[i]);
        out << "\n";
    }
    out << "trials=" << cfg.trials << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "st_to_all_m=" << format_sig9(cfg.distances.st_to_all_m) << "\n";
    out << "pt_to_pu_m=" << format_sig9(cfg.distances.pt_to_pu_m) << "\n";
    out << "exponent=" << format_sig9(cfg.exponent) << "\n";
    out << "sweep_variable=" << cfg.sweep.variable << "\n";
    out << "sweep_start=" << format_sig9(cfg.sweep.start) << "\n";
    out << "sweep_stop=" << format_sig9(cfg.sweep.stop) << "\n";
    out << "sweep_points=" << cfg.sweep.points << "\n";
    out << "r_p=" << format_sig9(cfg.r_p) << "\n";
    out << "r_s=" << format_sig9(cfg.r_s) << "\n";
    out << "eta=";
    for (std::size_t i = 0; i < cfg.eta_list.size(); ++i)
        out << (i ? "," : "") << format_sig9(cfg.eta_list[i]);
    out << "\n";
    out << "out=" << cfg.output_path << "\n";
    out << "n_antennas=" << cfg.n_antennas << "\n";
    out << "p_p_db=" << format_sig9(cfg.p_p_db) << "\n";
    out << "p_s0_db=" << format_sig9(cfg.p_s0_db) << "\n";
    out << "p_max_db=" << format_sig9(cfg.p_max_db) << "\n";
    out << "n0=" << format_sig9(cfg.n0) << "\n";
    out << "nc=" << format_sig9(cfg.nc) << "\n";
    if (!cfg.preset.empty()) out << "preset=" << cfg.preset << "\n";
    out << "region_points=" << cfg.region_points << "\n";
    out << "param_points=" << cfg.param_points << "\n";
    out << "threads=" << cfg.threads << "\n";
    out << "grid_coarse=" << cfg.solver.grid_coarse << "\n";
    out << "refine_rounds=" << cfg.solver.refine_rounds << "\n";
    out << "rel_tol=" << format_sig9(cfg.solver.rel_tol) << "\n";
    out << "bisect_tol=" << format_sig9(cfg.solver.bisect_tol) << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

namespace detail {

template <class Fn>
void parallel_for_trials(int trials, int threads, Fn&& fn) {
    int n_workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    n_workers = std::min(n_workers, trials);
    if (n_workers == 1) {
        for (int t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scheme dispatch
// ---------------------------------------------------------------------------

inline SchemeSolution solve_scheme(Scheme s, const SystemConfig& cfg, const ChannelSet& ch,
                                   double r_p, const SolverSettings& st) {
    switch (s) {
        case Scheme::Ideal: return ideal_solve_optimal(cfg, ch, r_p, st);
        case Scheme::IdealZf: return ideal_solve_zf(cfg, ch, r_p);
        case Scheme::PowerSplit: return ps_solve_optimal(cfg, ch, r_p, st);
        case Scheme::PowerSplitZf: return ps_solve_zf(cfg, ch, r_p);
        case Scheme::TimeSplit: return ts_solve_optimal(cfg, ch, r_p, st);
        case Scheme::TimeSplitZf: return ts_solve_zf(cfg, ch, r_p, st);
        case Scheme::BaselineNoEnergy: return ps_baseline_no_energy(cfg, ch, r_p, st);
    }
    throw internal_error("solve_scheme: bad enum");
}

// Plain one-phase primary link without any cooperation.
inline double direct_link_rate(const SystemConfig& cfg, const ChannelSet& ch) {
    return std::log2(1.0 + cfg.P_p * std::norm(ch.h_p) / cfg.n_tilde0());
}

// Largest r_p the scheme can support on this channel. Closed forms where
// they exist, bisection against the solver for the ZF variants.
inline double scheme_max_pu_rate(Scheme s, const SystemConfig& cfg, const ChannelSet& ch,
                                 const SolverSettings& st) {
    switch (s) {
        case Scheme::Ideal: return ideal_max_pu_rate(cfg, ch).r_p_max;
        case Scheme::PowerSplit: return ps_max_pu_rate(cfg, ch).first;
        case Scheme::TimeSplit: return ts_max_pu_rate(cfg, ch, st);
        case Scheme::BaselineNoEnergy: {
            // rho pinned to 1, budget 2 P_s0 regardless of eta
            const double g2 = norm2(ch.g);
            const double n_t = cfg.n_tilde0();
            const double a1 = 2.0 * cfg.P_p * g2 + cfg.N0;
            const double nc1 = cfg.NC;
            double bonus = 0.0;
            if (2.0 * cfg.P_s0 > 0.0 && g2 > 0.0) {
                const double f1 = n_t * (a1 + nc1) / (norm2(ch.h_sp) * 2.0 * cfg.P_s0) +
                                  (cfg.N0 + nc1);
                bonus = 2.0 * cfg.P_p * g2 / f1;
            }
            return 0.5 * std::log2(1.0 + 2.0 * cfg.P_p * std::norm(ch.h_p) / n_t + bonus);
        }
        default: break;
    }
    // ZF variants: feasibility is monotone in r_p; bisect on the solver.
    double lo = 0.0, hi;
    switch (s) {
        case Scheme::IdealZf: hi = ideal_max_pu_rate(cfg, ch).r_p_max; break;
        case Scheme::PowerSplitZf: hi = ps_max_pu_rate(cfg, ch).first; break;
        default: hi = ts_max_pu_rate(cfg, ch, st); break;
    }
    auto feasible = [&](double r) { return solve_scheme(s, cfg, ch, r, st).feasible; };
    if (!feasible(lo)) return 0.0;
    if (feasible(hi)) return hi;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << "\n";
        }
        return out.str();
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
        if (!out) throw config_error("cannot open output file '" + path + "'");
        out << to_string();
    }
};

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

inline std::vector<RunScheme> default_schemes(Experiment e) {
    switch (e) {
        case Experiment::Outage:
            return {RunScheme::Direct, RunScheme::BaselineNoEnergy, RunScheme::PowerSplit,
                    RunScheme::TimeSplit};
        case Experiment::SuSweep:
            return {RunScheme::BaselineNoEnergy, RunScheme::PowerSplit, RunScheme::TimeSplit};
        case Experiment::RhoCurve:
        case Experiment::AlphaCurve:
            return {};  // chosen by the runner from the curve kind
        default:
            return {RunScheme::Ideal,      RunScheme::IdealZf,     RunScheme::PowerSplit,
                    RunScheme::PowerSplitZf, RunScheme::TimeSplit, RunScheme::TimeSplitZf,
                    RunScheme::BaselineNoEnergy};
    }
}

// Per-scheme rate-region sweep on one fixed channel.
inline CsvTable run_rate_region(const ExperimentConfig& ecfg) {
    ecfg.validate();
    const ChannelSet ch = ecfg.fixed_channel();
    const double eta = ecfg.eta_list.front();
    const SystemConfig cfg = ecfg.system_config(eta);
    auto schemes = ecfg.schemes.empty() ? default_schemes(Experiment::RateRegion) : ecfg.schemes;

    CsvTable table;
    table.header = {"scheme", "r_p", "r_s_max"};
    bool any_feasible = false;
    for (RunScheme rs : schemes) {
        if (rs == RunScheme::Direct) throw config_error("rate-region: scheme 'direct' has no SU");
        const Scheme s = static_cast<Scheme>(static_cast<int>(rs) - 1);
        const double r_max = scheme_max_pu_rate(s, cfg, ch, ecfg.solver);
        RateRegionCurve curve;
        for (int i = 0; i < ecfg.region_points; ++i) {
            const double r = r_max * i / double(ecfg.region_points - 1);
            const auto sol = solve_scheme(s, cfg, ch, r, ecfg.solver);
            curve.push_back({r, sol.feasible ? sol.rate_su : 0.0});
            any_feasible = any_feasible || sol.feasible;
        }
        for (std::size_t i = 1; i < curve.size(); ++i)
            if (curve[i].r_s >
                curve[i - 1].r_s + std::max(1e-6, ecfg.solver.rel_tol) * std::max(1.0, curve[i - 1].r_s))
                throw internal_error("rate region not non-increasing for " + scheme_name(s));
        for (const auto& pt : curve)
            table.rows.push_back({scheme_name(s), format_sig9(pt.r_p), format_sig9(pt.r_s)});
    }
    if (!any_feasible) throw feasibility_error("rate-region: no scheme feasible anywhere");
    return table;
}

// Mean SU rate against P_s0 for each eta and scheme; infeasible trials
// count as zero rate. Trials are paired across the whole grid.
inline CsvTable run_su_sweep(const ExperimentConfig& ecfg) {
    ecfg.validate();
    auto schemes = ecfg.schemes.empty() ? default_schemes(Experiment::SuSweep) : ecfg.schemes;
    for (RunScheme rs : schemes)
        if (rs == RunScheme::Direct) throw config_error("su-sweep: scheme 'direct' has no SU");

    std::vector<double> p_grid(static_cast<std::size_t>(ecfg.sweep.points));
    for (int i = 0; i < ecfg.sweep.points; ++i)
        p_grid[i] = ecfg.sweep.start +
                    (ecfg.sweep.stop - ecfg.sweep.start) * i / double(ecfg.sweep.points - 1);

    const std::size_t cells = p_grid.size() * ecfg.eta_list.size() * schemes.size();
    std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(ecfg.trials),
                                               std::vector<double>(cells, 0.0));

    detail::parallel_for_trials(ecfg.trials, ecfg.threads, [&](int t) {
        const ChannelSet ch =
            make_channel_set(ecfg.n_antennas, ecfg.distances.st_to_all_m, ecfg.distances.pt_to_pu_m,
                             ecfg.exponent, trial_seed(ecfg.seed, static_cast<std::uint64_t>(t)));
        std::size_t cell = 0;
        for (double p_db : p_grid) {
            for (double eta : ecfg.eta_list) {
                SystemConfig cfg = ecfg.system_config(eta);
                cfg.P_s0 = db_to_linear(p_db);
                cfg.eta = eta;
                for (RunScheme rs : schemes) {
                    const Scheme s = static_cast<Scheme>(static_cast<int>(rs) - 1);
                    const auto sol = solve_scheme(s, cfg, ch, ecfg.r_p, ecfg.solver);
                    per_trial[static_cast<std::size_t>(t)][cell++] =
                        sol.feasible ? sol.rate_su : 0.0;
                }
            }
        }
    });

    CsvTable table;
    table.header = {"p_s0_db", "eta", "scheme", "mean_rate_su"};
    std::size_t cell = 0;
    for (double p_db : p_grid) {
        for (double eta : ecfg.eta_list) {
            for (RunScheme rs : schemes) {
                double sum = 0.0;
                for (int t = 0; t < ecfg.trials; ++t)
                    sum += per_trial[static_cast<std::size_t>(t)][cell];
                ++cell;
                table.rows.push_back({format_sig9(p_db), format_sig9(eta), run_scheme_name(rs),
                                      format_sig9(sum / ecfg.trials)});
            }
        }
    }
    return table;
}

// Outage probability against P_s0. Outage = PU target unsupported, or the
// achieved SU rate below r_s (schemes with an SU only).
inline CsvTable run_outage(const ExperimentConfig& ecfg) {
    ecfg.validate();
    auto schemes = ecfg.schemes.empty() ? default_schemes(Experiment::Outage) : ecfg.schemes;
    const double eta = ecfg.eta_list.front();

    std::vector<double> p_grid(static_cast<std::size_t>(ecfg.sweep.points));
    for (int i = 0; i < ecfg.sweep.points; ++i)
        p_grid[i] = ecfg.sweep.start +
                    (ecfg.sweep.stop - ecfg.sweep.start) * i / double(ecfg.sweep.points - 1);

    const std::size_t cells = p_grid.size() * schemes.size();
    std::vector<std::vector<std::uint8_t>> outage(static_cast<std::size_t>(ecfg.trials),
                                                  std::vector<std::uint8_t>(cells, 0));

    detail::parallel_for_trials(ecfg.trials, ecfg.threads, [&](int t) {
        const ChannelSet ch =
            make_channel_set(ecfg.n_antennas, ecfg.distances.st_to_all_m, ecfg.distances.pt_to_pu_m,
                             ecfg.exponent, trial_seed(ecfg.seed, static_cast<std::uint64_t>(t)));
        std::size_t cell = 0;
        for (double p_db : p_grid) {
            SystemConfig cfg = ecfg.system_config(eta);
            cfg.P_s0 = db_to_linear(p_db);
            cfg.eta = eta;
            for (RunScheme rs : schemes) {
                bool event;
                if (rs == RunScheme::Direct) {
                    event = direct_link_rate(cfg, ch) < ecfg.r_p;
                } else {
                    const Scheme s = static_cast<Scheme>(static_cast<int>(rs) - 1);
                    const auto sol = solve_scheme(s, cfg, ch, ecfg.r_p, ecfg.solver);
                    event = !sol.feasible || sol.rate_su < ecfg.r_s - 1e-12;
                }
                outage[static_cast<std::size_t>(t)][cell++] = event ? 1 : 0;
            }
        }
    });

    CsvTable table;
    table.header = {"p_s0_db", "scheme", "outage_prob"};
    std::size_t cell = 0;
    for (double p_db : p_grid) {
        for (RunScheme rs : schemes) {
            long count = 0;
            for (int t = 0; t < ecfg.trials; ++t) count += outage[static_cast<std::size_t>(t)][cell];
            ++cell;
            table.rows.push_back({format_sig9(p_db), run_scheme_name(rs),
                                  format_sig9(static_cast<double>(count) / ecfg.trials)});
        }
    }
    return table;
}

// SU rate against the scheme's splitting parameter on one fixed channel:
// rho for power splitting, alpha for time splitting. Optimal and ZF inner
// solutions are evaluated at each fixed parameter value.
inline CsvTable run_param_curve(const ExperimentConfig& ecfg) {
    ecfg.validate();
    const ChannelSet ch = ecfg.fixed_channel();
    const double eta = ecfg.eta_list.front();
    const SystemConfig cfg = ecfg.system_config(eta);
    const bool alpha_curve = ecfg.experiment == Experiment::AlphaCurve;

    CsvTable table;
    table.header = {"param_value", "scheme", "rate_su", "feasible"};
    bool any = false;
    for (int i = 0; i < ecfg.param_points; ++i) {
        const double hi = alpha_curve ? detail::kTsAlphaMax : 1.0;
        const double v = hi * i / double(ecfg.param_points - 1);
        SchemeSolution opt, zf;
        if (alpha_curve) {
            auto inner = [&](bool use_zf) {
                auto obj = [&](double tau) {
                    const double p1 = std::max(tau, 1e-6) * detail::ts_p1_cap(cfg, v);
                    return use_zf ? detail::ts_value_zf(cfg, ch, ecfg.r_p, v, p1,
                                                        alignment_cos2(ch.h_sp, ch.h_s))
                                  : detail::ts_value_optimal(cfg, ch, ecfg.r_p, v, p1, ecfg.solver);
                };
                return maximize_1d(obj, 1e-6, 1.0, ecfg.solver.grid_coarse,
                                   ecfg.solver.refine_rounds);
            };
            opt.scheme = Scheme::TimeSplit;
            zf.scheme = Scheme::TimeSplitZf;
            const Opt1D bo = inner(false);
            if (std::isfinite(bo.value))
                opt = ts_eval_optimal_at(cfg, ch, ecfg.r_p, v,
                                         std::max(bo.x, 1e-6) * detail::ts_p1_cap(cfg, v),
                                         ecfg.solver);
            const Opt1D bz = inner(true);
            if (std::isfinite(bz.value))
                zf = ts_eval_zf_at(cfg, ch, ecfg.r_p, v,
                                   std::max(bz.x, 1e-6) * detail::ts_p1_cap(cfg, v));
        } else {
            opt = detail::ps_eval_at_rho(cfg, ch, ecfg.r_p, v, ecfg.solver, Scheme::PowerSplit);
            // ZF at fixed rho: powers from constraint equality in the nulling
            // directions.
            zf.scheme = Scheme::PowerSplitZf;
            const auto k = detail::ps_consts(cfg, ch, ecfg.r_p);
            const double delta2 = alignment_cos2(ch.h_sp, ch.h_s);
            if (k.gpp <= 0.0) {
                const double q_s = ps_budget(cfg, ch, v);
                zf.feasible = true;
                zf.rate_su = 0.5 * std::log2(1.0 + q_s * k.hs2 * (1.0 - delta2) / k.n_t);
            } else {
                const double den = k.b * v - k.gpp * cfg.NC;
                if (den > 0.0) {
                    const double q_p =
                        k.gpp * k.n_t / (k.hsp2 * (1.0 - delta2)) * (v * k.a_over_eta + cfg.NC) / den;
                    const double q_s = ps_budget(cfg, ch, v) - q_p;
                    if (q_s >= 0.0) {
                        zf.feasible = true;
                        zf.rate_su = 0.5 * std::log2(1.0 + q_s * k.hs2 * (1.0 - delta2) / k.n_t);
                    }
                }
            }
        }
        const std::string pname = format_sig9(v);
        table.rows.push_back({pname, scheme_name(alpha_curve ? Scheme::TimeSplit : Scheme::PowerSplit),
                              format_sig9(opt.feasible ? opt.rate_su : 0.0),
                              opt.feasible ? "1" : "0"});
        table.rows.push_back(
            {pname, scheme_name(alpha_curve ? Scheme::TimeSplitZf : Scheme::PowerSplitZf),
             format_sig9(zf.feasible ? zf.rate_su : 0.0), zf.feasible ? "1" : "0"});
        any = any || opt.feasible || zf.feasible;
    }
    if (!any) throw feasibility_error("param-curve: no feasible point for any parameter value");
    return table;
}

// Feasibility summary per scheme: max supportable PU rate, the optimizing
// split variable, and (power split only) the feasible rho interval at r_p.
inline CsvTable run_feasibility(const ExperimentConfig& ecfg) {
    ecfg.validate();
    const ChannelSet ch = ecfg.fixed_channel();
    const double eta = ecfg.eta_list.front();
    const SystemConfig cfg = ecfg.system_config(eta);
    auto schemes = ecfg.schemes.empty() ? default_schemes(Experiment::Feasibility) : ecfg.schemes;

    CsvTable table;
    table.header = {"scheme", "r_p_max", "split_star", "feas_lo", "feas_hi"};
    for (RunScheme rs : schemes) {
        if (rs == RunScheme::Direct) {
            table.rows.push_back({"direct", format_sig9(direct_link_rate(cfg, ch)), "nan", "nan",
                                  "nan"});
            continue;
        }
        const Scheme s = static_cast<Scheme>(static_cast<int>(rs) - 1);
        const double r_max = scheme_max_pu_rate(s, cfg, ch, ecfg.solver);
        std::string split = "nan", lo = "nan", hi = "nan";
        if (s == Scheme::Ideal) split = format_sig9(ideal_max_pu_rate(cfg, ch).beta_star);
        if (s == Scheme::PowerSplit) {
            split = format_sig9(ps_max_pu_rate(cfg, ch).second);
            const auto range = ps_feasible_rho_range(cfg, ch, ecfg.r_p);
            if (!range.empty()) {
                lo = format_sig9(range[0].lo);
                hi = format_sig9(range[0].hi);
            }
        }
        table.rows.push_back({scheme_name(s), format_sig9(r_max), split, lo, hi});
    }
    return table;
}

inline CsvTable run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::RateRegion: return run_rate_region(cfg);
        case Experiment::SuSweep: return run_su_sweep(cfg);
        case Experiment::Outage: return run_outage(cfg);
        case Experiment::RhoCurve:
        case Experiment::AlphaCurve: return run_param_curve(cfg);
        case Experiment::Feasibility: return run_feasibility(cfg);
    }
    throw internal_error("run_experiment: bad enum");
}

}  // namespace crcoop
