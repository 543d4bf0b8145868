#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "portopt/port_model.hpp"

using namespace portopt;

namespace {

Berth berth(std::string id, std::string group = "G1", bool buffer = false) {
    return {id, "T-" + id, group, buffer, 1.3, 103.8};
}

Portcall call(std::string id, minutes arrival, std::string req, minutes service) {
    Portcall pc;
    pc.portcall_id = id;
    pc.vessel_id = "V" + id;
    pc.arrival_time = arrival;
    pc.requested_berth = req;
    pc.service_duration = service;
    return pc;
}

// arrivals {0,10,20}, services 60, one berth
Dataset fcfs_instance(bool second_berth = false) {
    std::vector<Berth> bs{berth("B1")};
    if (second_berth) bs.push_back(berth("B2"));
    return Dataset(bs, {call("P1", 0, "B1", 60), call("P2", 10, "B1", 60), call("P3", 20, "B1", 60)});
}

}  // namespace

TEST(ComputeWait, ImmediateBerthing) {
    EXPECT_EQ(compute_wait(call("P", 0, "B1", 10), {"P", "B1", 0}), 0);
}

TEST(ComputeWait, Arithmetic) {
    EXPECT_EQ(compute_wait(call("P", 100, "B1", 10), {"P", "B1", 160}), 60);
}

TEST(ComputeWait, MismatchedIdIsUsageError) {
    EXPECT_THROW(compute_wait(call("P", 0, "B1", 10), {"Q", "B1", 0}), usage_error);
}

TEST(ComputeWait, StartBeforeArrivalIsInvariantError) {
    EXPECT_THROW(compute_wait(call("P", 100, "B1", 10), {"P", "B1", 99}), invariant_error);
}

TEST(ComputeTurnaround, ZeroWait) {
    EXPECT_EQ(compute_turnaround(call("P", 0, "B1", 120), {"P", "B1", 0}), 120);
}

TEST(ComputeTurnaround, Arithmetic) {
    EXPECT_EQ(compute_turnaround(call("P", 100, "B1", 240), {"P", "B1", 160}), 300);
}

TEST(Fcfs, WaitsAndTurnaroundsMatchHandSimulation) {
    auto d = fcfs_instance();
    const auto& base = d.baseline();
    ASSERT_EQ(base.assignments.size(), 3u);
    std::vector<minutes> starts, waits, turns;
    for (std::size_t i = 0; i < 3; ++i) {
        starts.push_back(base.assignments[i].berth_start);
        waits.push_back(compute_wait(d.portcalls()[i], base.assignments[i]));
        turns.push_back(compute_turnaround(d.portcalls()[i], base.assignments[i]));
    }
    EXPECT_EQ(starts, (std::vector<minutes>{0, 60, 120}));
    EXPECT_EQ(waits, (std::vector<minutes>{0, 50, 100}));
    EXPECT_EQ(turns, (std::vector<minutes>{60, 110, 160}));
}

TEST(Fcfs, SinglePortcallStartsOnArrival) {
    Dataset d({berth("B1")}, {call("P1", 0, "B1", 30)});
    EXPECT_EQ(d.baseline().assignments.at(0).berth_start, 0);
    EXPECT_EQ(d.baseline().assignments.at(0).berth_id, "B1");
}

TEST(Fcfs, ArrivalTiesBreakByPortcallId) {
    std::vector<Portcall> pcs{call("P2", 0, "B1", 10), call("P1", 0, "B1", 10)};
    auto s = baseline_schedule(pcs, std::vector<Berth>{berth("B1")});
    ASSERT_EQ(s.assignments.size(), 2u);
    EXPECT_EQ(s.assignments[0].portcall_id, "P1");
    EXPECT_EQ(s.assignments[0].berth_start, 0);
    EXPECT_EQ(s.assignments[1].berth_start, 10);
}

TEST(Fcfs, AgreesWithIndependentOracle) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto in = oracle::tiny(seed);
        auto expect = oracle::fcfs_starts(in.pcs);
        auto s = baseline_schedule(in.pcs, in.berths);
        for (std::size_t i = 0; i < in.pcs.size(); ++i) {
            auto it = std::find_if(s.assignments.begin(), s.assignments.end(),
                                   [&](const Assignment& a) { return a.portcall_id == in.pcs[i].portcall_id; });
            ASSERT_NE(it, s.assignments.end());
            EXPECT_EQ(it->berth_start, expect[i]) << "seed " << seed;
        }
    }
}

TEST(Fcfs, EmptyInputRejected) {
    EXPECT_THROW(baseline_schedule({}, std::vector<Berth>{berth("B1")}), usage_error);
}

TEST(Objective, BaselineWithTurnWeightIsExactlyOne) {
    auto d = fcfs_instance();
    EXPECT_EQ(objective(d.baseline(), d, {0, 1}, normalization_from_baseline(d)), 1.0);
}

TEST(Objective, ZeroWaitsGiveZeroWithWaitWeight) {
    Dataset d3({berth("B1"), berth("B2"), berth("B3")},
               {call("P1", 0, "B1", 60), call("P2", 10, "B1", 60), call("P3", 20, "B1", 60)});
    Schedule s{{{"P1", "B1", 0}, {"P2", "B2", 10}, {"P3", "B3", 20}}};
    EXPECT_EQ(objective(s, d3, {1, 0}, normalization_from_baseline(d3)), 0.0);
}

TEST(Objective, HalvedTurnaroundGivesHalf) {
    // The 3-call FCFS instance cannot be halved (avg 110, service alone is 60),
    // so check the ratio on instances where the arithmetic is exact.
    Dataset d({berth("B1"), berth("B2")}, {call("P1", 0, "B1", 60), call("P2", 0, "B1", 60)});
    // baseline: 60 and 120 -> avg 90. Split: 60 and 60 -> avg 60. Ratio 2/3.
    Schedule split{{{"P1", "B1", 0}, {"P2", "B2", 0}}};
    EXPECT_DOUBLE_EQ(objective(split, d, {0, 1}, normalization_from_baseline(d)), 60.0 / 90.0);

    // Three equal calls arriving together, 30 min each: baseline turnarounds
    // 30,60,90 (avg 60); on three berths all 30 -> avg 30 -> J = 0.5.
    Dataset e({berth("B1"), berth("B2"), berth("B3")},
              {call("P1", 0, "B1", 30), call("P2", 0, "B1", 30), call("P3", 0, "B1", 30)});
    Schedule spread{{{"P1", "B1", 0}, {"P2", "B2", 0}, {"P3", "B3", 0}}};
    EXPECT_EQ(objective(spread, e, {0, 1}, normalization_from_baseline(e)), 0.5);
}

TEST(Objective, InfeasibleScheduleRejectedWithViolations) {
    auto d = fcfs_instance();
    Schedule s{{{"P1", "B1", 0}, {"P2", "B1", 10}, {"P3", "B1", 120}}};
    try {
        objective(s, d, {0, 1}, normalization_from_baseline(d));
        FAIL() << "expected infeasible_schedule";
    } catch (const infeasible_schedule& e) {
        ASSERT_FALSE(e.violations().empty());
        EXPECT_EQ(e.violations().front().kind, ViolationKind::per_berth_overlap);
    }
}

TEST(Objective, ZeroBaselineWaitGuardedOnlyWhenWeighted) {
    Dataset d({berth("B1")}, {call("P1", 0, "B1", 30)});
    auto norm = normalization_from_baseline(d);
    EXPECT_EQ(norm.ref_wait, 0.0);
    EXPECT_THROW(objective(d.baseline(), d, {1, 0}, norm), usage_error);
    EXPECT_EQ(objective(d.baseline(), d, {0, 1}, norm), 1.0);
}

TEST(Objective, PermutationInvariant) {
    auto d = fcfs_instance();
    auto s = d.baseline();
    std::reverse(s.assignments.begin(), s.assignments.end());
    EXPECT_EQ(objective(s, d, {0.5, 0.5}, normalization_from_baseline(d)), 1.0);
}

TEST(CheckFeasible, BaselineIsClean) {
    EXPECT_TRUE(check_feasible(fcfs_instance().baseline(), fcfs_instance()).empty());
}

TEST(CheckFeasible, OverlapReported) {
    auto d = fcfs_instance();
    Schedule s{{{"P1", "B1", 0}, {"P2", "B1", 30}, {"P3", "B1", 200}}};
    auto v = check_feasible(s, d);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ViolationKind::per_berth_overlap);
}

TEST(CheckFeasible, FixedPairMovedReported) {
    auto d = fcfs_instance(true);
    d.set_flags(0, true, false);
    Schedule s{{{"P1", "B2", 0}, {"P2", "B1", 60}, {"P3", "B1", 120}}};
    auto v = check_feasible(s, d);
    ASSERT_FALSE(v.empty());
    EXPECT_TRUE(std::any_of(v.begin(), v.end(),
                            [](const Violation& x) { return x.kind == ViolationKind::fixed_pair_changed; }));
}

TEST(CheckFeasible, MissingDuplicateUnknownAndEarlyStart) {
    auto d = fcfs_instance();
    Schedule s{{{"P1", "B1", 0}, {"P1", "B1", 300}, {"PX", "B1", 500}, {"P3", "B9", 20}}};
    auto v = check_feasible(s, d);
    auto has = [&](ViolationKind k) {
        return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
    };
    EXPECT_TRUE(has(ViolationKind::missing_assignment));
    EXPECT_TRUE(has(ViolationKind::duplicate_assignment));
    EXPECT_TRUE(has(ViolationKind::unknown_portcall));
    EXPECT_TRUE(has(ViolationKind::unknown_berth));

    Schedule early{{{"P1", "B1", 0}, {"P2", "B1", 5}, {"P3", "B1", 200}}};
    auto w = check_feasible(early, d);
    EXPECT_TRUE(std::any_of(w.begin(), w.end(),
                            [](const Violation& x) { return x.kind == ViolationKind::start_before_arrival; }));
}

TEST(CheckFeasible, CompatGroupAndBufferRules) {
    Dataset d({berth("B1", "G1"), berth("B2", "G2"), berth("BUF", "G1", true)},
              {call("P1", 0, "B1", 60), call("P2", 0, "B1", 60)});
    Schedule wrong_group{{{"P1", "B1", 0}, {"P2", "B2", 0}}};
    auto v = check_feasible(wrong_group, d);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].kind, ViolationKind::incompatible_berth);

    Schedule to_buffer{{{"P1", "B1", 0}, {"P2", "BUF", 0}}};
    EXPECT_EQ(check_feasible(to_buffer, d).size(), 1u);
    d.set_flags(1, false, true);
    EXPECT_TRUE(check_feasible(to_buffer, d).empty());
}

TEST(CheckFeasible, AcceptedSchedulesHaveDisjointIntervalsByBruteForce) {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto in = oracle::tiny(trial);
        Dataset d(in.berths, in.pcs);
        Schedule s;
        for (const auto& pc : d.portcalls()) {
            s.assignments.push_back({pc.portcall_id, d.berths()[g() % d.berths().size()].berth_id,
                                     pc.arrival_time + 15 * static_cast<minutes>(g() % 6)});
        }
        if (!check_feasible(s, d).empty()) continue;
        for (std::size_t i = 0; i < s.assignments.size(); ++i) {
            for (std::size_t j = i + 1; j < s.assignments.size(); ++j) {
                const auto& a = s.assignments[i];
                const auto& b = s.assignments[j];
                if (a.berth_id != b.berth_id) continue;
                const auto da = d.portcalls()[*d.find_portcall(a.portcall_id)].service_duration;
                const auto db = d.portcalls()[*d.find_portcall(b.portcall_id)].service_duration;
                EXPECT_TRUE(a.berth_start + da <= b.berth_start || b.berth_start + db <= a.berth_start);
            }
        }
    }
}

TEST(Dataset, RejectsBadInput) {
    EXPECT_THROW(Dataset({berth("B1"), berth("B1")}, {call("P1", 0, "B1", 1)}), data_error);
    EXPECT_THROW(Dataset({berth("B1")}, {call("P1", 0, "B9", 1)}), data_error);
    EXPECT_THROW(Dataset({berth("B1")}, {call("P1", 0, "B1", 0)}), data_error);
    EXPECT_THROW(Dataset({berth("B1"), berth("X", "G9", true)}, {call("P1", 0, "B1", 5)}), data_error);
    Portcall both = call("P1", 0, "B1", 5);
    both.is_fixed = both.is_buffer_eligible = true;
    EXPECT_THROW(Dataset({berth("B1")}, {both}), data_error);
}

TEST(Dataset, ObservedBaselineValidated) {
    std::vector<Berth> bs{berth("B1"), berth("B2")};
    std::vector<Portcall> pcs{call("P1", 0, "B1", 60), call("P2", 0, "B1", 60)};
    EXPECT_NO_THROW(Dataset(bs, pcs, Schedule{{{"P1", "B1", 0}, {"P2", "B1", 90}}}));
    EXPECT_THROW(Dataset(bs, pcs, Schedule{{{"P1", "B1", 0}, {"P2", "B2", 90}}}), data_error);
    EXPECT_THROW(Dataset(bs, pcs, Schedule{{{"P1", "B1", 0}, {"P2", "B1", 30}}}), data_error);
    EXPECT_THROW(Dataset(bs, pcs, Schedule{{{"P1", "B1", 0}}}), data_error);
}

TEST(Kpis, ReductionsExactlyZeroOnBaseline) {
    auto d = fcfs_instance();
    auto k = compute_kpis(d, d.baseline());
    EXPECT_EQ(k.wait_reduction_pct, 0.0);
    EXPECT_EQ(k.turnaround_reduction_pct, 0.0);
    EXPECT_EQ(k.avg_wait, 50.0);
    EXPECT_EQ(k.avg_turnaround, 110.0);
    EXPECT_GE(k.avg_turnaround, k.avg_wait);
}

TEST(Kpis, ReductionPercentages) {
    Dataset e({berth("B1"), berth("B2"), berth("B3")},
              {call("P1", 0, "B1", 30), call("P2", 0, "B1", 30), call("P3", 0, "B1", 30)});
    Schedule spread{{{"P1", "B1", 0}, {"P2", "B2", 0}, {"P3", "B3", 0}}};
    auto k = compute_kpis(e, spread);
    EXPECT_DOUBLE_EQ(k.wait_reduction_pct, 100.0);
    EXPECT_DOUBLE_EQ(k.turnaround_reduction_pct, 50.0);
}

TEST(Weights, Validation) {
    EXPECT_NO_THROW((ObjectiveWeights{0.3, 0.7}.validate()));
    EXPECT_THROW((ObjectiveWeights{0.5, 0.6}.validate()), parameter_error);
    EXPECT_THROW((ObjectiveWeights{-0.1, 1.1}.validate()), parameter_error);
}
