#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crcoop/ideal.hpp"
#include "crcoop/oracle.hpp"
#include "crcoop/presets.hpp"
#include "test_util.hpp"

using namespace crcoop;

TEST_CASE("span oracle hits the decoupled closed form at zeta^2 = 0") {
    DualProblem p;
    p.h1 = {{1.0, 0.0}, {0.0, 0.0}};
    p.h2 = {{0.0, 0.0}, {1.0, 0.0}};
    p.sigma2 = 1.0;
    p.gamma1 = 4.0;
    p.P_C = 10.0;
    const double v = oracle_best_su_rate(p, SpanGrid{64, 64});
    CHECK(v <= 6.0 + 1e-9);
    CHECK(std::fabs(v - 6.0) / 6.0 <= 0.01);
}

TEST_CASE("span oracle with gamma1 = 0") {
    std::mt19937_64 eng(3);
    DualProblem p;
    p.h1 = testutil::random_cvec(eng, 3);
    p.h2 = testutil::random_cvec(eng, 3);
    p.sigma2 = 1.4;
    p.gamma1 = 0.0;
    p.P_C = 9.0;
    const double expect = p.P_C * norm2(p.h2) / p.sigma2;
    const double v = oracle_best_su_rate(p, SpanGrid{64, 64});
    CHECK(v <= expect * (1.0 + 1e-9));
    CHECK(std::fabs(v - expect) / expect <= 0.01);
}

TEST_CASE("span oracle agrees with solve_dual within 2 percent") {
    std::mt19937_64 eng(1618);
    SolverSettings st;
    const SpanGrid grid{64, 64};
    for (int trial = 0; trial < 30; ++trial) {
        const DualProblem p = testutil::random_dual_problem(eng);
        const double solver = dual_gamma2(p, st);
        const double oracle = oracle_best_su_rate(p, grid);
        if (solver <= 1e-9) {
            CHECK(oracle <= 1e-6);
            continue;
        }
        CHECK(std::fabs(solver - oracle) / solver <= 0.02);
        CHECK(oracle <= solver * (1.0 + 1e-6));  // oracle never exceeds the optimum
    }
}

TEST_CASE("span oracle value never decreases when the grid densifies") {
    std::mt19937_64 eng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const DualProblem p = testutil::random_dual_problem(eng);
        const double coarse = oracle_best_su_rate(p, SpanGrid{16, 16});
        const double dense = oracle_best_su_rate(p, SpanGrid{32, 32});
        CHECK(dense >= coarse - 1e-12);
    }
}

TEST_CASE("span oracle rejects infeasible problems") {
    DualProblem p;
    p.h1 = {{1.0, 0.0}, {0.0, 0.0}};
    p.h2 = {{0.0, 0.0}, {1.0, 0.0}};
    p.sigma2 = 1.0;
    p.gamma1 = 100.0;
    p.P_C = 1.0;
    CHECK_THROWS_AS(oracle_best_su_rate(p, SpanGrid{16, 16}), feasibility_error);
}

TEST_CASE("ideal oracle: r_p = 0 is the full-budget matched filter") {
    std::mt19937_64 eng(8);
    SystemConfig cfg = testutil::sim_defaults();
    const ChannelSet ch = testutil::sim_channel(17, 4);
    const double expect = std::sqrt(cfg.P_s0 + cfg.eta * cfg.P_p) * vnorm(ch.h_s);
    const double v = oracle_ideal(cfg, ch, 0.0, SpanGrid{64, 64});
    CHECK(v <= expect * (1.0 + 1e-9));
    CHECK(std::fabs(v - expect) / expect <= 0.01);
}

TEST_CASE("ideal oracle: r_p at the region boundary collapses to zero") {
    // Built so the closed-form maximizer is beta* = 0, which the grid
    // contains exactly: P_p eta^2 ||h_sp||^2 < P_s0 |h_p|^2.
    SystemConfig cfg;
    cfg.P_p = 4.0;
    cfg.P_s0 = 9.0;
    cfg.eta = 0.1;
    cfg.N0 = 1.0;
    cfg.NC = 0.0;
    cfg.P_max = 4.0;
    cfg.N = 2;
    ChannelSet ch;
    ch.h_p = {1.0, 0.0};
    ch.g = {{1.0, 0.0}, {0.0, 0.0}};
    ch.h_s = {{0.3, 0.1}, {0.8, -0.2}};
    ch.h_sp = {{1.0, 0.0}, {0.0, 0.0}};
    const auto mr = ideal_max_pu_rate(cfg, ch);
    CHECK(mr.beta_star == 0.0);
    const double v = oracle_ideal(cfg, ch, mr.r_p_max, SpanGrid{32, 32});
    CHECK(v <= 1e-4 * vnorm(ch.h_s) * std::sqrt(cfg.P_s0));
}

TEST_CASE("ideal oracle never exceeds the solver and tracks it closely") {
    std::mt19937_64 eng(271);
    SolverSettings st;
    SystemConfig cfg = testutil::sim_defaults();
    for (int trial = 0; trial < 8; ++trial) {
        const ChannelSet ch = testutil::random_channel(eng, 3);
        const auto mr = ideal_max_pu_rate(cfg, ch);
        const double r_p = 0.5 * mr.r_p_max;
        const auto sol = ideal_solve_optimal(cfg, ch, r_p, st);
        REQUIRE(sol.feasible);
        const double solver_gain = std::abs(vdot(ch.h_s, sol.w_s));
        const double oracle = oracle_ideal(cfg, ch, r_p, SpanGrid{64, 64});
        // both searches are grid-limited; the oracle may only exceed the
        // solver by the comparison tolerance
        CHECK(oracle <= solver_gain * 1.005 + 1e-12);
        if (solver_gain > 1e-9)
            CHECK(std::fabs(solver_gain - oracle) / solver_gain <= 0.02);
    }
}

TEST_CASE("ideal oracle infeasible target raises") {
    SystemConfig cfg = testutil::sim_defaults();
    const ChannelSet ch = testutil::sim_channel(3, 4);
    const auto mr = ideal_max_pu_rate(cfg, ch);
    CHECK_THROWS_AS(oracle_ideal(cfg, ch, mr.r_p_max * 1.2, SpanGrid{16, 16}),
                    feasibility_error);
}
