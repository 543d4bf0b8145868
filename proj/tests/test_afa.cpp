#include <gtest/gtest.h>

#include <chrono>

#include "oracle.hpp"
#include "portopt/afa.hpp"
#include "portopt/synthetic.hpp"

using namespace portopt;

namespace {

Berth berth(std::string id) { return {id, "T", "G1", false, 1.3, 103.8}; }

Portcall call(std::string id, minutes arrival, std::string req, minutes service) {
    Portcall pc;
    pc.portcall_id = id;
    pc.vessel_id = "V" + id;
    pc.arrival_time = arrival;
    pc.requested_berth = req;
    pc.service_duration = service;
    return pc;
}

}  // namespace

TEST(SearchSpace, SingleEntryPool) {
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 60), call("P2", 0, "B1", 60)});
    auto prob = SearchProblem::whole(d, {0, 1});
    PairsPool pool;
    pool.insert(prob, d.baseline_plan(), 1.0);
    auto space = build_search_space(pool, prob.variables());
    ASSERT_EQ(space.dimensions(), 2u);
    for (const auto& c : space.candidates) EXPECT_EQ(c.size(), 1u);
    EXPECT_EQ(space.delta_b, 1);
}

TEST(SearchSpace, DistinctCountsAndFirstAppearanceOrder) {
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 10), call("P2", 0, "B1", 10)});
    auto prob = SearchProblem::whole(d, {0, 1});
    PairsPool pool;
    // P1 takes 3 distinct placements, P2 always the same.
    for (int k = 0; k < 3; ++k) {
        Plan p = d.baseline_plan();
        p[0] = {1, 100 * k};
        p[1] = {0, 500};
        pool.insert(prob, p, 0.5 + 0.1 * k);
    }
    auto space = build_search_space(pool, prob.variables());
    ASSERT_EQ(space.candidates[0].size(), 3u);
    EXPECT_EQ(space.candidates[0][0], (Placement{1, 0}));
    EXPECT_EQ(space.candidates[1].size(), 1u);
    EXPECT_EQ(space.delta_b, 3);
}

TEST(SearchSpace, RecombinationReachesSchedulesInNeitherEntry) {
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 10), call("P2", 0, "B1", 10)});
    auto prob = SearchProblem::whole(d, {0, 1});
    Plan a{{0, 0}, {1, 0}}, b{{1, 50}, {0, 50}};
    PairsPool pool;
    pool.insert(prob, a, 0.1);
    pool.insert(prob, b, 0.2);
    auto space = build_search_space(pool, prob.variables());
    // index (0, 1) = P1 from a, P2 from b
    Plan mixed = decode_firefly(prob, space, {0, 1});
    EXPECT_NE(mixed, a);
    EXPECT_NE(mixed, b);
    std::size_t combos = 1;
    for (const auto& c : space.candidates) combos *= c.size();
    EXPECT_GT(combos, pool.size());
}

TEST(SearchSpace, EmptyPoolIsError) {
    EXPECT_THROW(build_search_space(PairsPool{}, {}), usage_error);
}

TEST(MoveFirefly, PureAttractionLandsOnBrightest) {
    AfaHyper h;
    h.beta = 0;
    rng_engine rng(1);
    std::vector<int> xi{5, 0, 7}, xmax{9, 3, 2};
    auto out = move_firefly(xi, xmax, true, h, 100, rng);
    EXPECT_EQ(out, (std::vector<double>{9, 3, 2}));
}

TEST(MoveFirefly, NoiseScale) {
    // s = 0: multiplier 1 whatever delta_b; s = 1: multiplier delta_b.
    AfaHyper h;
    h.alpha = h.gamma = 1;
    std::vector<int> xi(4000, 0), xmax(4000, 0);
    auto spread = [&](int s, int db) {
        h.s = s;
        rng_engine rng(3);
        auto out = move_firefly(xi, xmax, false, h, db, rng);
        double ss = 0;
        for (double v : out) ss += v * v;
        return std::sqrt(ss / out.size());
    };
    EXPECT_NEAR(spread(0, 100), 1.0, 0.05);
    EXPECT_NEAR(spread(1, 100), 100.0, 5.0);
    // same draws, scaled exactly
    h.s = 1;
    rng_engine r1(9), r2(9);
    auto big = move_firefly(xi, xmax, false, h, 100, r1);
    h.s = 0;
    auto small = move_firefly(xi, xmax, false, h, 100, r2);
    for (std::size_t k = 0; k < big.size(); ++k) EXPECT_DOUBLE_EQ(big[k], 100.0 * small[k]);
}

TEST(MoveFirefly, SnapClampsToRange) {
    SearchSpace space;
    space.candidates = {{{0, 0}, {0, 1}, {0, 2}}, {{0, 0}}};
    EXPECT_EQ(snap_to_space(std::vector<double>{7.6, -3.0}, space), (FireflyPosition{2, 0}));
    EXPECT_EQ(snap_to_space(std::vector<double>{1.4, 0.4}, space), (FireflyPosition{1, 0}));
}

TEST(RunAfa, SingleCandidateReturnedUnchanged) {
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 60), call("P2", 0, "B1", 60)});
    auto prob = SearchProblem::whole(d, {0, 1});
    PairsPool pool;
    pool.insert(prob, d.baseline_plan(), 1.0);
    auto res = run_afa(pool, prob, {}, 1);
    EXPECT_EQ(res.plan, d.baseline_plan());
    EXPECT_EQ(res.objective, 1.0);
}

TEST(RunAfa, NothingToImproveWithoutContention) {
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 60), call("P2", 100, "B1", 60)});
    auto pool = run_epso(d, {}, {0, 1}, 2);
    auto res = run_afa(pool, d, {0, 1}, {}, 2);
    EXPECT_EQ(res.schedule, d.baseline());
    EXPECT_EQ(res.objective, 1.0);
}

TEST(RunAfa, MatchesExhaustiveOptimumOnTinyInstances) {
    int hits = 0, runs = 0;
    for (std::uint64_t inst = 0; inst < 10; ++inst) {
        auto in = oracle::tiny(500 + inst);
        Dataset d(in.berths, in.pcs);
        auto norm = normalization_from_baseline(d);
        auto opt = oracle::solve(in, 0, 1, norm.ref_wait, norm.ref_turn);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            auto pool = run_epso(d, {}, {0, 1}, seed);
            auto res = run_afa(pool, d, {0, 1}, {}, seed + 100);
            EXPECT_GE(res.objective, opt.j - 1e-12);
            EXPECT_LE(res.objective, pool.best().objective);
            hits += std::abs(res.objective - opt.j) < 1e-12;
            ++runs;
        }
    }
    EXPECT_GE(hits * 100, runs * 95);
}

TEST(RunAfa, FeasibleElitistAndDeterministic) {
    auto d = generate_synthetic({.n_vessels = 24, .horizon_days = 10}, 4).dataset;
    init_constraints(d, 0.2, 0.5, 6);
    auto pool = run_epso(d, {}, {0.5, 0.5}, 6);
    AfaHyper h;
    h.max_evals = 3000;
    auto a = run_afa(pool, d, {0.5, 0.5}, h, 7);
    auto b = run_afa(pool, d, {0.5, 0.5}, h, 7);
    EXPECT_EQ(a.schedule, b.schedule);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_TRUE(check_feasible(a.schedule, d).empty());
    EXPECT_LE(a.objective, pool.best().objective);
    for (std::size_t t = 1; t < a.best_trace.size(); ++t) EXPECT_LE(a.best_trace[t], a.best_trace[t - 1]);
    EXPECT_LE(a.evaluations, 3000u);
}

TEST(AfaHyper, Validation) {
    AfaHyper h;
    EXPECT_NO_THROW(h.validate());
    h.alpha = 0;
    EXPECT_THROW(h.validate(), parameter_error);
    h = {};
    h.s = 2;
    EXPECT_THROW(h.validate(), parameter_error);
    h = {};
    h.beta = 1.5;
    EXPECT_THROW(h.validate(), parameter_error);
}
