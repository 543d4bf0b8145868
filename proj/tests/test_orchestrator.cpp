#include <gtest/gtest.h>

#include "oracle.hpp"
#include "portopt/orchestrator.hpp"
#include "portopt/synthetic.hpp"

using namespace portopt;

namespace {

Berth berth(std::string id, bool buffer = false) { return {id, "T", "G1", buffer, 1.3, 103.8}; }

Portcall call(std::string id, minutes arrival, std::string req, minutes service) {
    Portcall pc;
    pc.portcall_id = id;
    pc.vessel_id = "V" + id;
    pc.arrival_time = arrival;
    pc.requested_berth = req;
    pc.service_duration = service;
    return pc;
}

Dataset small_synthetic(std::uint64_t seed = 1) {
    return generate_synthetic({.n_vessels = 24, .horizon_days = 10}, seed).dataset;
}

}  // namespace

TEST(Paradigm, ParseAndPrint) {
    EXPECT_EQ(parse_paradigm("batch"), Paradigm::batch);
    EXPECT_EQ(parse_paradigm("rolling"), Paradigm::rolling);
    EXPECT_EQ(to_string(Paradigm::rolling), "rolling");
    EXPECT_THROW(parse_paradigm("weekly"), usage_error);
}

TEST(ScenarioConfig, Validation) {
    ScenarioConfig sc;
    EXPECT_NO_THROW(sc.validate());
    sc.f = 1.2;
    EXPECT_THROW(sc.validate(), parameter_error);
    sc = {};
    sc.paradigm = Paradigm::rolling;
    sc.window_days = 0.5;
    EXPECT_THROW(sc.validate(), parameter_error);
}

TEST(RunBatch, EmptyDatasetIsError) {
    EXPECT_THROW(run_batch(Dataset{}, {}), usage_error);
    EXPECT_THROW(run_rolling(Dataset{}, {}), usage_error);
}

TEST(RunBatch, ZeroContentionGivesZeroReduction) {
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 60), call("P2", 600, "B1", 60)});
    auto res = run_batch(d, {});
    EXPECT_EQ(res.kpis.wait_reduction_pct, 0.0);
    EXPECT_EQ(res.kpis.turnaround_reduction_pct, 0.0);
    EXPECT_EQ(res.objective, 1.0);
    EXPECT_EQ(res.schedule, d.baseline());
}

TEST(RunBatch, TinyBufferScenarioMatchesOracle) {
    for (std::uint64_t inst = 0; inst < 5; ++inst) {
        auto in = oracle::tiny(900 + inst, 5);
        in.berths.push_back({"X1", "T9", "G1", true, 1.3, 103.8});
        Dataset d(in.berths, in.pcs);
        ScenarioConfig sc;
        sc.r = 0.9;
        sc.seed = inst + 1;
        auto constrained = detail::constrained_copy(d, sc);
        oracle::Instance flagged{constrained.berths(), constrained.portcalls()};
        auto norm = normalization_from_baseline(constrained);
        auto opt = oracle::solve(flagged, 0, 1, norm.ref_wait, norm.ref_turn);
        auto res = run_batch(d, sc);
        EXPECT_NEAR(res.objective, opt.j, 1e-12) << "instance " << inst;
        const double base_wait = norm.ref_wait;
        if (base_wait > 0) {
            EXPECT_NEAR(res.kpis.wait_reduction_pct,
                        100.0 * (base_wait - static_cast<double>(opt.total_wait) / d.size()) / base_wait, 1e-9);
        }
    }
}

TEST(RunRolling, SingleWindowIsBatch) {
    auto d = small_synthetic();
    for (std::uint64_t seed : {1u, 2u}) {
        ScenarioConfig sc;
        sc.r = 0.5;
        sc.seed = seed;
        sc.window_days = 9999;
        auto b = run_batch(d, sc);
        auto r = run_rolling(d, sc);
        EXPECT_EQ(r.windows, 1u);
        EXPECT_EQ(b.schedule, r.schedule);
        EXPECT_EQ(b.objective, r.objective);
    }
}

TEST(RunRolling, CommittedWindowCannotMakeRoomForLaterArrivals) {
    // A long call arrives just before the window boundary; three short calls
    // arrive right after it. Delaying the long call is optimal but rolling has
    // already committed it.
    std::vector<Berth> bs{berth("B1")};
    // Windows count from the first arrival, so an early call anchors them at 0.
    std::vector<Portcall> pcs{call("0", 0, "B1", 10), call("A", 1430, "B1", 1000), call("B", 1440, "B1", 10), call("C", 1440, "B1", 10),
                              call("D", 1440, "B1", 10)};
    Dataset d(bs, pcs);
    auto norm = normalization_from_baseline(d);
    oracle::Instance whole{bs, pcs};
    auto batch_opt = oracle::solve(whole, 0, 1, norm.ref_wait, norm.ref_turn);
    // rolling: window 1 holds only A, which starts on arrival; window 2 then
    // works around A as a fixed block.
    oracle::Instance committed = whole;
    committed.pcs[0].is_fixed = true;
    committed.pcs[1].is_fixed = true;
    auto rolling_opt = oracle::solve(committed, 0, 1, norm.ref_wait, norm.ref_turn);
    EXPECT_GT(rolling_opt.j, batch_opt.j);

    ScenarioConfig sc;
    sc.window_days = 1;
    auto b = run_batch(d, sc);
    auto r = run_rolling(d, sc);
    EXPECT_EQ(r.windows, 2u);
    EXPECT_NEAR(b.objective, batch_opt.j, 1e-12);
    EXPECT_NEAR(r.objective, rolling_opt.j, 1e-12);
    EXPECT_GE(r.objective, b.objective);
}

TEST(RunRolling, FeasibleAndNeverWorseThanBaseline) {
    auto d = small_synthetic(3);
    for (double f : {0.0, 0.5}) {
        for (double r : {0.0, 0.9}) {
            ScenarioConfig sc;
            sc.f = f;
            sc.r = r;
            sc.window_days = 3;
            auto res = run_rolling(d, sc);
            EXPECT_GT(res.windows, 1u);
            auto constrained = detail::constrained_copy(d, sc);
            EXPECT_TRUE(check_feasible(res.schedule, constrained).empty());
            EXPECT_LE(res.objective, 1.0);
            EXPECT_GT(res.pool_entries_checked, 0u);
        }
    }
}

TEST(RunBatch, FixedEverythingReproducesBaseline) {
    auto d = small_synthetic(4);
    ScenarioConfig sc;
    sc.f = 1.0;
    for (auto p : {Paradigm::batch, Paradigm::rolling}) {
        sc.paradigm = p;
        auto res = run_scenario(d, sc);
        EXPECT_EQ(res.schedule, d.baseline());
        EXPECT_EQ(res.kpis.wait_reduction_pct, 0.0);
        EXPECT_EQ(res.kpis.turnaround_reduction_pct, 0.0);
    }
}

TEST(Sweep, OneByOneEqualsSingleRun) {
    auto d = small_synthetic(5);
    const double f[] = {0.5}, r[] = {0.5};
    const std::uint64_t seeds[] = {3};
    auto sw = sweep_scenarios(d, f, r, Paradigm::batch, seeds);
    ScenarioConfig sc;
    sc.f = sc.r = 0.5;
    sc.seed = 3;
    auto single = run_batch(d, sc);
    ASSERT_EQ(sw.cells.size(), 1u);
    ASSERT_EQ(sw.cells[0].size(), 1u);
    EXPECT_EQ(sw.at(0, 0).median_objective, single.objective);
    EXPECT_EQ(sw.at(0, 0).median_wait_reduction, single.kpis.wait_reduction_pct);
}

TEST(Sweep, GridShapeAndMedians) {
    auto d = small_synthetic(6);
    const double f[] = {0, 0.5}, r[] = {0, 0.3, 0.9};
    const std::uint64_t seeds[] = {1, 2, 3};
    auto sw = sweep_scenarios(d, f, r, Paradigm::rolling, seeds);
    ASSERT_EQ(sw.cells.size(), 2u);
    for (const auto& row : sw.cells) {
        ASSERT_EQ(row.size(), 3u);
        for (const auto& c : row) {
            EXPECT_EQ(c.runs.size(), 3u);
            std::vector<double> j;
            for (const auto& run : c.runs) {
                j.push_back(run.objective);
                EXPECT_LE(run.objective, 1.0);
            }
            EXPECT_EQ(c.median_objective, median(j));
        }
    }
    EXPECT_THROW(sweep_scenarios(d, {}, r, Paradigm::batch, seeds), usage_error);
}

TEST(Median, OddAndEven) {
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_EQ(median({}), 0.0);
}

TEST(Benchmark, RowsRatiosAndSlope) {
    std::vector<Dataset> ds{generate_synthetic({.n_vessels = 12, .horizon_days = 7}, 1).dataset,
                            generate_synthetic({.n_vessels = 48, .horizon_days = 28}, 1).dataset};
    auto t = benchmark_runtime(ds, {});
    EXPECT_EQ(t.rows.size(), 4u);
    EXPECT_EQ(t.rolling_over_batch.size(), 2u);
    EXPECT_GT(t.rows[2].seconds, t.rows[0].seconds);  // larger batch runs longer
    EXPECT_GT(t.batch_loglog_slope, 0.0);
    EXPECT_THROW(benchmark_runtime(std::span<const Dataset>(ds.data(), 1), {}), usage_error);
}

TEST(LogLogSlope, RecoversPowerLaw) {
    std::vector<std::pair<double, double>> pts{{10, 3 * 100.0}, {20, 3 * 400.0}, {40, 3 * 1600.0}};
    EXPECT_NEAR(loglog_slope(pts), 2.0, 1e-12);
}
