// Command-line experiment runner. Subcommands map to the experiments in
// crcoop/experiments.hpp; flags override values loaded from --config.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible everywhere,
// 4 internal invariant violation.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crcoop/experiments.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::vector<std::string> schemes;
    std::vector<double> etas;
    std::string out;
    std::string preset;
    std::string sweep_variable;
    std::uint64_t seed = 0;
    int trials = -1;
    int threads = -1;
    int points = -1;
    double r_p = -1.0;
    double r_s = -1.0;
    double sweep_start = 0.0, sweep_stop = 0.0;
    bool has_seed = false, has_r_p = false, has_r_s = false, has_sweep = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "key=value config file");
    cmd->add_option("--seed", ov.seed, "master seed")->each([&](const std::string&) { ov.has_seed = true; });
    cmd->add_option("--trials", ov.trials, "Monte Carlo trial count");
    cmd->add_option("--out", ov.out, "output CSV path");
    cmd->add_option("--scheme", ov.schemes, "scheme name (repeatable)");
    cmd->add_option("--eta", ov.etas, "energy-transfer efficiency (repeatable)");
    cmd->add_option("--preset", ov.preset, "built-in channel preset")
        ->check(CLI::IsMember({"fig2", "fig5", "fig6"}));
    cmd->add_option("--threads", ov.threads, "worker threads (0 = hardware)");
    cmd->add_option("--r-p", ov.r_p, "PU rate demand, bps/Hz")->each([&](const std::string&) { ov.has_r_p = true; });
    cmd->add_option("--r-s", ov.r_s, "SU rate demand for outage, bps/Hz")
        ->each([&](const std::string&) { ov.has_r_s = true; });
    cmd->add_option("--sweep-start", ov.sweep_start, "sweep start (dB)")
        ->each([&](const std::string&) { ov.has_sweep = true; });
    cmd->add_option("--sweep-stop", ov.sweep_stop, "sweep stop (dB)")
        ->each([&](const std::string&) { ov.has_sweep = true; });
    cmd->add_option("--points", ov.points, "sweep / curve point count");
}

crcoop::ExperimentConfig build_config(const CliOverrides& ov, crcoop::Experiment exp) {
    crcoop::ExperimentConfig cfg;
    if (!ov.config_path.empty()) cfg = crcoop::parse_config(ov.config_path);
    cfg.experiment = exp;
    if (!ov.schemes.empty()) {
        cfg.schemes.clear();
        for (const auto& s : ov.schemes) cfg.schemes.push_back(crcoop::run_scheme_from_name(s));
    }
    if (!ov.etas.empty()) cfg.eta_list = ov.etas;
    if (!ov.out.empty()) cfg.output_path = ov.out;
    if (!ov.preset.empty()) cfg.preset = ov.preset;
    if (ov.has_seed) cfg.seed = ov.seed;
    if (ov.trials >= 0) cfg.trials = ov.trials;
    if (ov.threads >= 0) cfg.threads = ov.threads;
    if (ov.has_r_p) cfg.r_p = ov.r_p;
    if (ov.has_r_s) cfg.r_s = ov.r_s;
    if (ov.has_sweep) {
        cfg.sweep.start = ov.sweep_start;
        cfg.sweep.stop = ov.sweep_stop;
    }
    if (ov.points >= 2) {
        cfg.sweep.points = ov.points;
        cfg.region_points = ov.points;
        cfg.param_points = ov.points;
    }
    if (!ov.preset.empty() || !cfg.preset.empty()) {
        // Presets pin the physical parameters; keep r_p configurable.
        const auto p = crcoop::make_preset(cfg.preset);
        if (!ov.has_r_p) cfg.r_p = p.cfg.r_p;
        cfg.n_antennas = p.cfg.N;
    }
    cfg.validate();
    return cfg;
}

int run(const CliOverrides& ov, crcoop::Experiment exp) {
    const auto cfg = build_config(ov, exp);
    const auto table = crcoop::run_experiment(cfg);
    table.write(cfg.output_path);
    std::cout << crcoop::experiment_name(cfg.experiment) << ": wrote " << table.rows.size()
              << " rows to " << cfg.output_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate and outage experiments for cognitive-radio information and energy cooperation"};
    app.require_subcommand(1);

    CliOverrides ov;
    struct Sub {
        const char* name;
        const char* desc;
        crcoop::Experiment exp;
    };
    const Sub subs[] = {
        {"rate-region", "PU/SU rate-region sweep on a fixed channel", crcoop::Experiment::RateRegion},
        {"su-sweep", "mean SU rate vs ST power over Monte Carlo trials", crcoop::Experiment::SuSweep},
        {"outage", "PU/SU outage probability vs ST power", crcoop::Experiment::Outage},
        {"param-curve", "SU rate vs splitting parameter (rho or alpha)", crcoop::Experiment::RhoCurve},
        {"feasibility", "max supportable PU rate per scheme", crcoop::Experiment::Feasibility},
    };
    for (const auto& s : subs) add_common_options(app.add_subcommand(s.name, s.desc), ov);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& s : subs) {
            if (app.get_subcommand(s.name)->parsed()) {
                crcoop::Experiment exp = s.exp;
                if (exp == crcoop::Experiment::RhoCurve) {
                    // param-curve: pick the curve kind from the requested schemes.
                    for (const auto& name : ov.schemes)
                        if (name == "time-split" || name == "time-split-zf")
                            exp = crcoop::Experiment::AlphaCurve;
                }
                return run(ov, exp);
            }
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const crcoop::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const crcoop::input_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const crcoop::unsupported_config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const crcoop::feasibility_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
