#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Randomized sweep over all solvers: whatever the configuration, a solver
// either reports infeasible (empty beamformers, zero SU rate) or returns a
// finite solution whose achieved PU rate carries the target. Exercises the
// NC = 0 and dead-channel corners alongside generic draws.

#include "crcoop/experiments.hpp"
#include "test_util.hpp"

using namespace crcoop;

namespace {

void check_solution(const SchemeSolution& s, double r_p, int it) {
    INFO("iteration ", it, " scheme ", scheme_name(s.scheme));
    if (!s.feasible) {
        CHECK(s.rate_su == 0.0);
        CHECK(s.w_s.empty());
        CHECK(s.w_p.empty());
        return;
    }
    CHECK(std::isfinite(s.rate_su));
    CHECK(std::isfinite(s.rate_pu));
    CHECK(s.rate_su >= 0.0);
    CHECK(s.rate_pu >= r_p - 1e-5 * std::max(1.0, r_p));
    for (const auto& x : s.w_s) CHECK(std::isfinite(std::abs(x)));
    for (const auto& x : s.w_p) CHECK(std::isfinite(std::abs(x)));
}

}  // namespace

TEST_CASE("all solvers stay finite and honor the PU target on random draws") {
    std::mt19937_64 eng(987654321);
    SolverSettings st;
    st.grid_coarse = 16;
    st.refine_rounds = 2;
    int feasible_count = 0;
    for (int it = 0; it < 2000; ++it) {
        SystemConfig cfg;
        cfg.P_p = testutil::uniform(eng, 0.5, 300.0);
        cfg.P_s0 = testutil::uniform(eng, 0.0, 50.0);
        cfg.eta = testutil::uniform(eng, 0.0, 1.0);
        cfg.N0 = testutil::uniform(eng, 0.1, 3.0);
        cfg.NC = (it % 17 == 0) ? 0.0 : testutil::uniform(eng, 0.1, 3.0);
        cfg.P_max = cfg.P_p * testutil::uniform(eng, 1.0, 20.0);
        const int n = 2 + static_cast<int>(eng() % 3);
        cfg.N = n;
        ChannelSet ch = (it % 3 == 0) ? testutil::random_channel(eng, n)
                                      : make_channel_set(n, testutil::uniform(eng, 0.5, 2.0),
                                                         testutil::uniform(eng, 1.0, 3.0),
                                                         testutil::uniform(eng, 2.0, 4.0), eng());
        if (it % 29 == 0) ch.h_p = {0.0, 0.0};
        if (it % 31 == 0) ch.g = cvec(static_cast<std::size_t>(n), cplx{0.0, 0.0});
        const double r_p = testutil::uniform(eng, 0.0, 6.0);

        for (Scheme s : {Scheme::Ideal, Scheme::IdealZf, Scheme::PowerSplit, Scheme::PowerSplitZf,
                         Scheme::TimeSplit, Scheme::TimeSplitZf, Scheme::BaselineNoEnergy}) {
            SchemeSolution sol;
            try {
                sol = solve_scheme(s, cfg, ch, r_p, st);
            } catch (const degenerate_geometry_error&) {
                continue;  // collinear-channel draws may legitimately refuse
            }
            check_solution(sol, r_p, it);
            if (sol.feasible) ++feasible_count;
        }
    }
    CHECK(feasible_count > 4000);
}
