#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "portopt/afa.hpp"
#include "portopt/epso.hpp"
#include "portopt/port_model.hpp"
#include "portopt/rng.hpp"
#include "portopt/search_problem.hpp"

namespace portopt {

enum class Paradigm { batch, rolling };

inline std::string_view to_string(Paradigm p) { return p == Paradigm::batch ? "batch" : "rolling"; }

inline Paradigm parse_paradigm(std::string_view s) {
    if (s == "batch") return Paradigm::batch;
    if (s == "rolling") return Paradigm::rolling;
    throw usage_error("unknown paradigm '" + std::string(s) + "' (expected batch or rolling)");
}

struct ScenarioConfig {
    double f = 0.0;
    double r = 0.0;
    ObjectiveWeights weights{};
    Paradigm paradigm = Paradigm::batch;
    double window_days = 7.0;
    std::uint64_t seed = 1;
    EpsoHyper epso{};
    AfaHyper afa{};

    void validate() const {
        if (!(f >= 0.0 && f <= 1.0) || !(r >= 0.0 && r <= 1.0)) {
            throw parameter_error("scenario: f and r must lie in [0, 1]");
        }
        if (paradigm == Paradigm::rolling && !(window_days >= 1.0)) {
            throw parameter_error("scenario: window_days must be >= 1");
        }
        weights.validate();
        epso.validate();
        afa.validate();
    }
};

struct RunResult {
    Schedule schedule;
    Plan plan;
    KpiReport kpis;
    double objective = 0.0;
    std::size_t windows = 1;
    std::size_t evaluations = 0;
    // Every pool entry of every window passed the feasibility gate.
    std::size_t pool_entries_checked = 0;
};

namespace detail {

using clock = std::chrono::steady_clock;

// Mark the dataset copy with the scenario's fixed / buffer-eligible sets.
inline Dataset constrained_copy(const Dataset& data, const ScenarioConfig& sc) {
    Dataset copy = data;
    init_constraints(copy, sc.f, sc.r, derive_seed(sc.seed, seed_stream::constraints));
    return copy;
}

// Window 0 shares the batch seeds, so a single window reproduces batch exactly.
inline std::uint64_t window_seed(std::uint64_t seed, std::size_t window) {
    return window == 0 ? seed : derive_seed(seed, seed_stream::window, window);
}

struct WindowOutcome {
    Plan plan;
    std::size_t evaluations = 0;
    std::size_t pool_entries = 0;
};

inline void require_feasible_members(const SearchProblem& prob, const Plan& plan, std::string_view what) {
    if (!prob.admits(plan)) throw invariant_error(std::string(what) + " produced an infeasible placement");
}

inline WindowOutcome optimize_window(const SearchProblem& prob, const ScenarioConfig& sc, std::uint64_t seed) {
    const auto pool = run_epso(prob, sc.epso, derive_seed(seed, seed_stream::epso));
    for (const auto& c : pool.candidates) require_feasible_members(prob, c.plan, "ePSO pool");
    const auto best = run_afa(pool, prob, sc.afa, derive_seed(seed, seed_stream::afa));
    require_feasible_members(prob, best.plan, "AFA");
    return {best.plan, pool.evaluations + best.evaluations, pool.size()};
}

inline RunResult finish(const Dataset& constrained, const Plan& plan, const ScenarioConfig& sc,
                        clock::time_point started) {
    RunResult out;
    out.plan = plan;
    out.schedule = constrained.to_schedule(plan);
    auto violations = check_feasible(out.schedule, constrained);
    if (!violations.empty()) throw infeasible_schedule(std::move(violations));
    out.kpis = compute_kpis(constrained, plan);
    const auto norm = normalization_from_baseline(constrained);
    out.objective = objective_from_averages(out.kpis.avg_wait, out.kpis.avg_turnaround, sc.weights, norm);
    out.kpis.runtime_sec = std::chrono::duration<double>(clock::now() - started).count();
    return out;
}

// Window index per portcall, counted from the earliest arrival.
inline std::vector<std::size_t> window_of(const Dataset& data, double window_days) {
    const auto& pcs = data.portcalls();
    minutes t0 = pcs.front().arrival_time;
    for (const auto& pc : pcs) t0 = std::min(t0, pc.arrival_time);
    const double width = window_days * static_cast<double>(minutes_per_day);
    std::vector<std::size_t> w(pcs.size());
    for (std::size_t p = 0; p < pcs.size(); ++p) {
        w[p] = static_cast<std::size_t>(std::floor(static_cast<double>(pcs[p].arrival_time - t0) / width));
    }
    return w;
}

inline RunResult run_windows(const Dataset& data, const ScenarioConfig& sc, double window_days) {
    if (data.empty()) throw usage_error("cannot optimize an empty dataset");
    sc.validate();
    const auto started = clock::now();
    const Dataset constrained = constrained_copy(data, sc);
    const auto norm = normalization_from_baseline(constrained);

    std::vector<std::size_t> window(constrained.size(), 0);
    if (window_days > 0.0) window = window_of(constrained, window_days);
    const std::size_t n_windows = *std::max_element(window.begin(), window.end()) + 1;

    Plan plan = constrained.baseline_plan();
    std::vector<std::pair<std::size_t, Placement>> committed;
    RunResult tally;
    std::size_t used_windows = 0;
    for (std::size_t k = 0; k < n_windows; ++k) {
        std::vector<std::size_t> members;
        for (std::size_t p = 0; p < window.size(); ++p) {
            if (window[p] == k) members.push_back(p);
        }
        if (members.empty()) continue;
        ++used_windows;
        const SearchProblem prob(constrained, members, committed, sc.weights, norm);
        const auto outcome = optimize_window(prob, sc, window_seed(sc.seed, k));
        tally.evaluations += outcome.evaluations;
        tally.pool_entries_checked += outcome.pool_entries;
        for (std::size_t p : members) {
            plan[p] = outcome.plan[p];
            if (!constrained.portcalls()[p].is_fixed) committed.emplace_back(p, outcome.plan[p]);
        }
    }
    auto out = finish(constrained, plan, sc, started);
    out.windows = used_windows;
    out.evaluations = tally.evaluations;
    out.pool_entries_checked = tally.pool_entries_checked;
    return out;
}

}  // namespace detail

// ePSO over the whole dataset, then AFA over its pool.
inline RunResult run_batch(const Dataset& data, const ScenarioConfig& sc) {
    return detail::run_windows(data, sc, 0.0);
}

// Consecutive arrival windows optimized in order; each window's placements are
// committed and become occupied blocks for the windows after it.
inline RunResult run_rolling(const Dataset& data, const ScenarioConfig& sc) {
    return detail::run_windows(data, sc, sc.window_days);
}

inline RunResult run_scenario(const Dataset& data, const ScenarioConfig& sc) {
    return sc.paradigm == Paradigm::batch ? run_batch(data, sc) : run_rolling(data, sc);
}

// ---------------------------------------------------------------------------
// Scenario sweeps
// ---------------------------------------------------------------------------

struct SeedOutcome {
    std::uint64_t seed = 0;
    KpiReport kpis;
    double objective = 0.0;
};

struct SweepCell {
    double f = 0.0;
    double r = 0.0;
    std::vector<SeedOutcome> runs;
    double median_wait_reduction = 0.0;
    double median_turnaround_reduction = 0.0;
    double median_objective = 0.0;
    double median_runtime_sec = 0.0;
};

struct SweepResult {
    Paradigm paradigm = Paradigm::batch;
    std::vector<double> f_values;
    std::vector<double> r_values;
    std::vector<std::vector<SweepCell>> cells;  // [f index][r index]

    const SweepCell& at(std::size_t fi, std::size_t ri) const { return cells.at(fi).at(ri); }
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline SweepResult sweep_scenarios(const Dataset& data, std::span<const double> f_values,
                                   std::span<const double> r_values, Paradigm paradigm,
                                   std::span<const std::uint64_t> seeds, const ScenarioConfig& base = {}) {
    if (f_values.empty() || r_values.empty() || seeds.empty()) {
        throw usage_error("sweep needs non-empty f, r and seed lists");
    }
    SweepResult out;
    out.paradigm = paradigm;
    out.f_values.assign(f_values.begin(), f_values.end());
    out.r_values.assign(r_values.begin(), r_values.end());
    out.cells.resize(f_values.size());
    for (std::size_t fi = 0; fi < f_values.size(); ++fi) {
        for (std::size_t ri = 0; ri < r_values.size(); ++ri) {
            SweepCell cell;
            cell.f = f_values[fi];
            cell.r = r_values[ri];
            std::vector<double> wr, tr, j, rt;
            for (std::uint64_t seed : seeds) {
                ScenarioConfig sc = base;
                sc.f = cell.f;
                sc.r = cell.r;
                sc.paradigm = paradigm;
                sc.seed = seed;
                const auto res = run_scenario(data, sc);
                cell.runs.push_back({seed, res.kpis, res.objective});
                wr.push_back(res.kpis.wait_reduction_pct);
                tr.push_back(res.kpis.turnaround_reduction_pct);
                j.push_back(res.objective);
                rt.push_back(res.kpis.runtime_sec);
            }
            cell.median_wait_reduction = median(wr);
            cell.median_turnaround_reduction = median(tr);
            cell.median_objective = median(j);
            cell.median_runtime_sec = median(rt);
            out.cells[fi].push_back(std::move(cell));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Runtime benchmark
// ---------------------------------------------------------------------------

struct RuntimeRow {
    std::size_t size = 0;  // portcalls
    Paradigm paradigm = Paradigm::batch;
    double seconds = 0.0;
};

struct RuntimeTable {
    std::vector<RuntimeRow> rows;
    std::vector<std::pair<std::size_t, double>> rolling_over_batch;  // per size
    double batch_loglog_slope = 0.0;
    double rolling_loglog_slope = 0.0;
};

// Least-squares slope of log(seconds) against log(size).
inline double loglog_slope(std::span<const std::pair<double, double>> pts) {
    if (pts.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        const double lx = std::log(x), ly = std::log(std::max(y, 1e-9));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(pts.size());
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

// Each (size, paradigm) cell is timed `repeats` times and the median kept.
inline RuntimeTable benchmark_runtime(std::span<const Dataset> datasets, const ScenarioConfig& base, int repeats = 1) {
    if (datasets.size() < 2) throw usage_error("benchmark needs at least two dataset sizes");
    if (repeats < 1) throw usage_error("benchmark repeats must be >= 1");
    RuntimeTable table;
    std::vector<std::pair<double, double>> batch_pts, rolling_pts;
    for (const auto& data : datasets) {
        double secs[2] = {0.0, 0.0};
        for (Paradigm p : {Paradigm::batch, Paradigm::rolling}) {
            ScenarioConfig sc = base;
            sc.paradigm = p;
            std::vector<double> times;
            for (int k = 0; k < repeats; ++k) {
                const auto t0 = detail::clock::now();
                (void)run_scenario(data, sc);
                times.push_back(std::chrono::duration<double>(detail::clock::now() - t0).count());
            }
            const double s = median(times);
            secs[p == Paradigm::batch ? 0 : 1] = s;
            table.rows.push_back({data.size(), p, s});
        }
        batch_pts.emplace_back(static_cast<double>(data.size()), secs[0]);
        rolling_pts.emplace_back(static_cast<double>(data.size()), secs[1]);
        table.rolling_over_batch.emplace_back(data.size(), secs[0] > 0.0 ? secs[1] / secs[0] : 0.0);
    }
    table.batch_loglog_slope = loglog_slope(batch_pts);
    table.rolling_loglog_slope = loglog_slope(rolling_pts);
    return table;
}

}  // namespace portopt
