#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crcoop/experiments.hpp"
#include "test_util.hpp"

using namespace crcoop;

namespace {

ExperimentConfig small_cfg() {
    ExperimentConfig c;
    c.trials = 3;
    c.sweep = {"p_s0_db", 0.0, 10.0, 2};
    c.eta_list = {0.5};
    c.schemes = {RunScheme::PowerSplit, RunScheme::BaselineNoEnergy};
    c.solver.grid_coarse = 16;
    c.solver.refine_rounds = 2;
    c.r_p = 2.0;
    return c;
}

}  // namespace

TEST_CASE("parse_config: empty text yields all defaults") {
    const auto cfg = parse_config_text("", "test");
    CHECK(cfg == ExperimentConfig{});
    CHECK(cfg.n_antennas == 4);
    CHECK(cfg.exponent == 3.5);
    CHECK(cfg.p_p_db == 20.0);
    CHECK(cfg.p_max_db == 30.0);
    CHECK(cfg.r_p == 3.0);
    CHECK(cfg.trials == 1000);
    CHECK(cfg.n0 == 1.0);
    CHECK(cfg.nc == 1.0);
}

TEST_CASE("parse_config: comments, whitespace, and values") {
    const char* text =
        "# comment line\n"
        "trials = 25   # trailing comment\n"
        "\n"
        "seed=7\n"
        "eta=0.1, 0.5 ,1.0\n"
        "schemes=power-split,no-energy\n"
        "r_p=2.25\n";
    const auto cfg = parse_config_text(text, "test");
    CHECK(cfg.trials == 25);
    CHECK(cfg.seed == 7);
    REQUIRE(cfg.eta_list.size() == 3);
    CHECK(cfg.eta_list[1] == 0.5);
    REQUIRE(cfg.schemes.size() == 2);
    CHECK(cfg.schemes[0] == RunScheme::PowerSplit);
    CHECK(cfg.r_p == 2.25);
}

TEST_CASE("parse_config: rejections carry line diagnostics") {
    CHECK_THROWS_AS(parse_config_text("trials=0\n", "t"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text("bogus_key=1\n", "t"),
                         doctest::Contains("t:1"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text("trials=ten\n", "t"),
                         doctest::Contains("malformed"), config_error);
    CHECK_THROWS_AS(parse_config_text("eta=1.5\n", "t"), config_error);
    CHECK_THROWS_AS(parse_config_text("just a line\n", "t"), config_error);
    CHECK_THROWS_AS(parse_config("/nonexistent/path.cfg"), config_error);
}

TEST_CASE("parse_config: serialize and reparse round-trips") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::Outage;
    cfg.seed = 424242;
    cfg.r_s = 3.5;
    cfg.preset = "fig6";
    cfg.threads = 2;
    const auto again = parse_config_text(serialize_config(cfg), "round-trip");
    CHECK(again == cfg);
}

TEST_CASE("su-sweep is deterministic across runs and worker counts") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::SuSweep;

    cfg.threads = 1;
    const std::string a = run_su_sweep(cfg).to_string();
    const std::string b = run_su_sweep(cfg).to_string();
    CHECK(a == b);
    cfg.threads = 4;
    const std::string c = run_su_sweep(cfg).to_string();
    CHECK(a == c);

    // header and LF-only line endings
    CHECK(a.rfind("p_s0_db,eta,scheme,mean_rate_su\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
}

TEST_CASE("su-sweep pairing: higher eta never hurts") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::SuSweep;
    cfg.trials = 5;
    cfg.eta_list = {0.1, 1.0};
    cfg.schemes = {RunScheme::PowerSplit};
    const auto table = run_su_sweep(cfg);
    REQUIRE(table.rows.size() == 4);  // 2 p_s0 x 2 eta x 1 scheme
    for (std::size_t i = 0; i < table.rows.size(); i += 2) {
        const double low = std::stod(table.rows[i][3]);
        const double high = std::stod(table.rows[i + 1][3]);
        CHECK(high >= low - 1e-6);
    }
}

TEST_CASE("outage: zero demands mean zero outage") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::Outage;
    cfg.r_p = 0.0;
    cfg.r_s = 0.0;
    cfg.schemes = {RunScheme::Direct, RunScheme::PowerSplit, RunScheme::TimeSplit,
                   RunScheme::BaselineNoEnergy};
    const auto table = run_outage(cfg);
    for (const auto& row : table.rows) CHECK(std::stod(row[2]) == 0.0);
}

TEST_CASE("outage: direct link at simulation defaults is always out") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::Outage;
    cfg.trials = 4;
    cfg.r_p = 3.0;
    cfg.schemes = {RunScheme::Direct};
    const auto table = run_outage(cfg);
    for (const auto& row : table.rows) CHECK(std::stod(row[2]) == 1.0);
}

TEST_CASE("rate-region on the ideal scheme has the right endpoints") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::RateRegion;
    cfg.schemes = {RunScheme::Ideal};
    cfg.region_points = 5;
    cfg.seed = 31337;
    const auto table = run_rate_region(cfg);
    REQUIRE(table.rows.size() == 5);
    CHECK(std::stod(table.rows[0][1]) == 0.0);
    CHECK(std::stod(table.rows[0][2]) > 0.0);
    CHECK(std::stod(table.rows[4][2]) <= 1e-6);
    // r_p strictly increasing
    for (int i = 1; i < 5; ++i)
        CHECK(std::stod(table.rows[i][1]) > std::stod(table.rows[i - 1][1]));
    // direct has no SU rate
    cfg.schemes = {RunScheme::Direct};
    CHECK_THROWS_AS(run_rate_region(cfg), config_error);
}

TEST_CASE("param-curve: rho = 1 point of the optimal scheme is the baseline") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::RhoCurve;
    cfg.param_points = 5;
    cfg.seed = 99;
    cfg.r_p = 1.5;
    const auto table = run_param_curve(cfg);
    REQUIRE(table.rows.size() == 10);  // 5 points x {optimal, zf}
    const auto& last_opt = table.rows[8];
    REQUIRE(last_opt[0] == "1");
    REQUIRE(last_opt[1] == "power-split");

    const SystemConfig sys = cfg.system_config(cfg.eta_list.front());
    const ChannelSet ch = cfg.fixed_channel();
    const auto base = ps_baseline_no_energy(sys, ch, cfg.r_p, cfg.solver);
    const double opt_rate = std::stod(last_opt[2]);
    if (base.feasible) {
        CHECK(last_opt[3] == "1");
        CHECK(opt_rate == doctest::Approx(base.rate_su).epsilon(1e-9));
    } else {
        CHECK(last_opt[3] == "0");
    }
}

TEST_CASE("feasibility table lists every requested scheme") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::Feasibility;
    cfg.schemes = {RunScheme::Direct, RunScheme::Ideal, RunScheme::PowerSplit,
                   RunScheme::TimeSplit};
    cfg.seed = 5;
    const auto table = run_feasibility(cfg);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.rows[0][0] == "direct");
    CHECK(table.rows[1][0] == "ideal");
    // ideal bound dominates the practical schemes on the same channel
    const double ideal_max = std::stod(table.rows[1][1]);
    CHECK(std::stod(table.rows[2][1]) <= ideal_max);
    CHECK(std::stod(table.rows[3][1]) <= ideal_max + 1e-6);
}

TEST_CASE("fig6 preset: scheme orderings hold pointwise across the region") {
    const Preset p = make_preset("fig6");
    SolverSettings st;
    const auto [ps_max, rho_star] = ps_max_pu_rate(p.cfg, p.ch);
    auto rate = [&](Scheme s, double r) {
        const auto sol = solve_scheme(s, p.cfg, p.ch, r, st);
        return sol.feasible ? sol.rate_su : 0.0;
    };
    for (int i = 0; i <= 8; ++i) {
        const double r = 0.999 * ps_max * i / 8.0;
        const double ideal = rate(Scheme::Ideal, r);
        const double ps = rate(Scheme::PowerSplit, r);
        const double ts = rate(Scheme::TimeSplit, r);
        const double base = rate(Scheme::BaselineNoEnergy, r);
        const double slack = 1e-3 * std::max(1.0, ideal);
        // energy cooperation enlarges the region, the ideal scheme bounds it
        CHECK(ps <= ideal + slack);
        CHECK(base <= ps + slack);
        // power splitting dominates time splitting on this channel at eta 0.5
        CHECK(ts <= ps + slack);
        CHECK(rate(Scheme::PowerSplitZf, r) <= ps + slack);
        CHECK(rate(Scheme::TimeSplitZf, r) <= ts + slack);
    }
}

TEST_CASE("fig5 preset at supportable targets: interval nesting and ZF collapse") {
    const Preset p = make_preset("fig5");
    SolverSettings st;
    const auto [r_max, rho_star] = ps_max_pu_rate(p.cfg, p.ch);

    // strict nesting of the ZF-feasible rho interval inside the optimal one
    const double r_mid = 0.9 * r_max;
    const auto opt_range = ps_feasible_rho_range(p.cfg, p.ch, r_mid);
    const auto zf_range = ps_zf_feasible_rho_range(p.cfg, p.ch, r_mid);
    REQUIRE_FALSE(opt_range.empty());
    REQUIRE_FALSE(zf_range.empty());
    CHECK(zf_range[0].lo > opt_range[0].lo);
    CHECK(zf_range[0].hi < opt_range[0].hi);

    // near the boundary the optimal solution more than doubles the ZF rate
    const double r_hi = 0.97 * r_max;
    const auto opt = ps_solve_optimal(p.cfg, p.ch, r_hi, st);
    const auto zf = ps_solve_zf(p.cfg, p.ch, r_hi);
    REQUIRE(opt.feasible);
    const double zf_rate = zf.feasible ? zf.rate_su : 0.0;
    CHECK(opt.rate_su > 2.0 * zf_rate);
}

TEST_CASE("csv files are written with LF endings") {
    ExperimentConfig cfg = small_cfg();
    cfg.experiment = Experiment::SuSweep;
    const auto table = run_su_sweep(cfg);
    const std::string path = "test_out_tmp.csv";
    table.write(path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == table.to_string());
    std::remove(path.c_str());
}
