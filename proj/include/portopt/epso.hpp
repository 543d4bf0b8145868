#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "portopt/port_model.hpp"
#include "portopt/rng.hpp"
#include "portopt/search_problem.hpp"

namespace portopt {

// ---------------------------------------------------------------------------
// Fixed / buffer-eligible constraint structure
// ---------------------------------------------------------------------------

struct ConstraintSpec {
    std::set<std::string> fixed_set;
    std::set<std::string> buffer_eligible_set;
    double f = 0.0;  // fixed ratio
    double r = 0.0;  // randomness ratio: share of flexible pairs that may use buffer berths
};

// ceil(ratio * n) without letting 0.3 * 10 = 3.0000000000000004 round up.
inline std::size_t ratio_count(double ratio, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
}

// Samples ceil(f*N) fixed portcalls, then ceil(r*|flexible|) buffer-eligible ones
// from the remainder, and writes both marks onto the dataset's portcall flags.
// Ratios in [0, 0.9] are the intended range; 1.0 is accepted as a degenerate case.
inline ConstraintSpec init_constraints(Dataset& data, double f, double r, std::uint64_t seed) {
    if (!(f >= 0.0 && f <= 1.0) || !(r >= 0.0 && r <= 1.0)) {
        throw parameter_error("fixed ratio f and randomness ratio r must lie in [0, 1]");
    }
    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng_engine rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t n_fixed = std::min(n, ratio_count(f, n));
    const std::size_t n_eligible = std::min(n - n_fixed, ratio_count(r, n - n_fixed));

    ConstraintSpec con;
    con.f = f;
    con.r = r;
    data.clear_flags();
    for (std::size_t i = 0; i < n_fixed; ++i) {
        data.set_flags(order[i], true, false);
        con.fixed_set.insert(data.portcalls()[order[i]].portcall_id);
    }
    for (std::size_t i = n_fixed; i < n_fixed + n_eligible; ++i) {
        data.set_flags(order[i], false, true);
        con.buffer_eligible_set.insert(data.portcalls()[order[i]].portcall_id);
    }
    return con;
}

// ---------------------------------------------------------------------------
// Particle encoding
// ---------------------------------------------------------------------------

struct EpsoHyper {
    int max_iter = 100;            // iterations == pool capacity
    int swarm_size = 0;            // 0: number of distinct vessels in the problem
    double inertia = 0.72;
    double c_local = 1.49;
    double c_global = 1.49;
    minutes slot_minutes = 15;
    int max_slots = 14 * 96 + 1;   // start offsets up to arrival + 14 days
    int init_slot_span = 4;        // random particles start within the first hour
    bool seed_earliest_start = true;  // one particle starts from the greedy list schedule

    void validate() const {
        if (max_iter < 1) throw parameter_error("epso: max_iter must be >= 1");
        if (swarm_size != 0 && swarm_size < 2) throw parameter_error("epso: swarm_size must be >= 2");
        if (slot_minutes < 1) throw parameter_error("epso: slot_minutes must be >= 1");
        if (max_slots < 1) throw parameter_error("epso: max_slots must be >= 1");
        if (init_slot_span < 1) throw parameter_error("epso: init_slot_span must be >= 1");
    }
};

// Real-valued particle coordinates, one pair per variable portcall.
struct Position {
    std::vector<double> berth_choice;  // index into the portcall's allowed berths
    std::vector<double> start_slot;    // slots after arrival

    friend bool operator==(const Position&, const Position&) = default;
};

struct Particle {
    Position position;
    Position velocity;
    Position best_position;
    Plan best_plan;
    double best_objective = 0.0;
};

inline long snap_index(double x, long count) {
    const long i = std::lround(x);
    return std::clamp(i, 0L, count - 1);
}

inline std::vector<Placement> desired_from_position(const SearchProblem& prob, const Position& x,
                                                    const EpsoHyper& hyper) {
    const auto vars = prob.variables();
    if (x.berth_choice.size() != vars.size() || x.start_slot.size() != vars.size()) {
        throw usage_error("position dimensions do not match the flexible portcalls");
    }
    const auto& pcs = prob.data().portcalls();
    std::vector<Placement> desired(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const auto allowed = prob.data().allowed_berths(vars[k]);
        const long b = snap_index(x.berth_choice[k], static_cast<long>(allowed.size()));
        const long slot = snap_index(x.start_slot[k], hyper.max_slots);
        desired[k] = {allowed[b], pcs[vars[k]].arrival_time + slot * hyper.slot_minutes};
    }
    return desired;
}

// Inverse of decoding for a plan: berth by position in the allowed list, start
// rounded down to a slot.
inline Position encode(const SearchProblem& prob, const Plan& plan, const EpsoHyper& hyper) {
    const auto vars = prob.variables();
    const auto& pcs = prob.data().portcalls();
    Position x;
    x.berth_choice.resize(vars.size());
    x.start_slot.resize(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const auto allowed = prob.data().allowed_berths(vars[k]);
        auto it = std::find(allowed.begin(), allowed.end(), plan[vars[k]].berth);
        x.berth_choice[k] = it == allowed.end() ? 0.0 : static_cast<double>(it - allowed.begin());
        const minutes offset = std::max<minutes>(0, plan[vars[k]].start - pcs[vars[k]].arrival_time);
        x.start_slot[k] = static_cast<double>(
            std::min<minutes>(offset / hyper.slot_minutes, hyper.max_slots - 1));
    }
    return x;
}

inline Plan decode(const SearchProblem& prob, const Position& x, const EpsoHyper& hyper = {}) {
    return prob.realize(desired_from_position(prob, x, hyper));
}

// Whole-dataset forms. The dataset's flags must already hold the constraints.
inline Schedule decode(const Position& x, const Dataset& data, const EpsoHyper& hyper = {}) {
    const auto prob = SearchProblem::whole(data, {});
    return data.to_schedule(decode(prob, x, hyper));
}

inline Position encode(const Schedule& s, const Dataset& data, const EpsoHyper& hyper = {}) {
    const auto prob = SearchProblem::whole(data, {});
    return encode(prob, data.to_plan(s), hyper);
}

// Keeps fixed pairs, pushes colliding flexible pairs to the earliest free start
// on their chosen berth.
inline Schedule repair(const Schedule& raw, const Dataset& data) {
    const auto prob = SearchProblem::whole(data, {});
    const Plan plan = data.to_plan(raw);
    std::vector<Placement> desired;
    desired.reserve(prob.variables().size());
    for (std::size_t p : prob.variables()) desired.push_back(plan[p]);
    return data.to_schedule(prob.realize(desired));
}

// ---------------------------------------------------------------------------
// Pairs pool
// ---------------------------------------------------------------------------

struct PoolEntry {
    Plan plan;
    Schedule schedule;
    double objective = 0.0;
};

struct PairsPool {
    std::vector<PoolEntry> candidates;   // ascending objective, distinct content
    std::vector<double> gbest_trace;     // global best objective after each iteration
    std::size_t evaluations = 0;

    bool empty() const { return candidates.empty(); }
    std::size_t size() const { return candidates.size(); }
    const PoolEntry& best() const { return candidates.front(); }

    // Returns false for a duplicate. Ties keep insertion order.
    bool insert(const SearchProblem& prob, const Plan& plan, double objective) {
        for (const auto& c : candidates) {
            if (prob.same_variables(c.plan, plan)) return false;
        }
        auto pos = std::upper_bound(candidates.begin(), candidates.end(), objective,
                                    [](double j, const PoolEntry& e) { return j < e.objective; });
        candidates.insert(pos, PoolEntry{plan, prob.to_schedule(plan), objective});
        return true;
    }
};

// ---------------------------------------------------------------------------
// Enhanced PSO: samples a pool of feasible candidate schedules.
// ---------------------------------------------------------------------------

inline std::size_t resolve_swarm_size(const SearchProblem& prob, const EpsoHyper& hyper) {
    if (hyper.swarm_size > 0) return static_cast<std::size_t>(hyper.swarm_size);
    return std::max<std::size_t>(2, prob.distinct_vessels());
}

inline PairsPool run_epso(const SearchProblem& prob, const EpsoHyper& hyper, std::uint64_t seed) {
    hyper.validate();
    PairsPool pool;
    const auto vars = prob.variables();
    const std::size_t m = vars.size();

    // The baseline (or, inside a rolling window, its repaired image) is always a
    // candidate so the pool can never be worse than history.
    Plan seed_plan = prob.seed_plan();
    const Position seed_position = encode(prob, seed_plan, hyper);
    if (!prob.admits(seed_plan)) seed_plan = decode(prob, seed_position, hyper);
    const double seed_objective = prob.evaluate(seed_plan);
    ++pool.evaluations;

    if (m == 0) {
        pool.insert(prob, seed_plan, seed_objective);
        pool.gbest_trace.assign(static_cast<std::size_t>(hyper.max_iter), seed_objective);
        return pool;
    }

    std::vector<double> berth_range(m);
    for (std::size_t k = 0; k < m; ++k) {
        berth_range[k] = static_cast<double>(prob.data().allowed_berths(vars[k]).size() - 1);
    }
    const double slot_range = static_cast<double>(hyper.max_slots - 1);
    const double init_slot = static_cast<double>(std::min(hyper.init_slot_span, hyper.max_slots));

    rng_engine rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    const std::size_t n = resolve_swarm_size(prob, hyper);
    std::vector<Particle> swarm(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& pt = swarm[i];
        if (i == 0) {
            pt.position = seed_position;
        } else {
            pt.position.berth_choice.resize(m);
            pt.position.start_slot.resize(m);
            for (std::size_t k = 0; k < m; ++k) {
                pt.position.berth_choice[k] = unit(rng) * (berth_range[k] + 1.0) - 0.5;
                pt.position.start_slot[k] = unit(rng) * init_slot - 0.5;
            }
        }
        pt.velocity.berth_choice.resize(m);
        pt.velocity.start_slot.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            pt.velocity.berth_choice[k] = sym(rng) * std::min(1.0, berth_range[k]);
            pt.velocity.start_slot[k] = sym(rng) * std::min(1.0, slot_range);
        }
        pt.best_position = pt.position;
        pt.best_plan = decode(prob, pt.position, hyper);
        pt.best_objective = prob.evaluate(pt.best_plan);
        ++pool.evaluations;
        if (i == 0 && seed_objective < pt.best_objective) {
            pt.best_plan = seed_plan;
            pt.best_objective = seed_objective;
        }
        // Particle 1 starts from the greedy list schedule instead of at random.
        if (i == 1 && hyper.seed_earliest_start) {
            Plan es = prob.earliest_start_plan();
            pt.position = encode(prob, es, hyper);
            pt.best_position = pt.position;
            pt.best_plan = decode(prob, pt.position, hyper);
            pt.best_objective = prob.evaluate(pt.best_plan);
            const double j = prob.evaluate(es);
            pool.evaluations += 2;
            if (j < pt.best_objective) {
                pt.best_plan = std::move(es);
                pt.best_objective = j;
            }
        }
    }

    std::size_t g = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (swarm[i].best_objective < swarm[g].best_objective) g = i;
    }
    Position gbest_position = swarm[g].best_position;
    Plan gbest_plan = swarm[g].best_plan;
    double gbest_objective = swarm[g].best_objective;

    auto step = [&](double& x, double& v, double lbest, double gbest, double range) {
        v = hyper.inertia * v + hyper.c_local * unit(rng) * (lbest - x) +
            hyper.c_global * unit(rng) * (gbest - x);
        v = std::clamp(v, -(range + 1.0), range + 1.0);
        x = std::clamp(x + v, -0.5, range + 0.5);
    };

    for (int t = 0; t < hyper.max_iter; ++t) {
        for (auto& pt : swarm) {
            for (std::size_t k = 0; k < m; ++k) {
                step(pt.position.berth_choice[k], pt.velocity.berth_choice[k], pt.best_position.berth_choice[k],
                     gbest_position.berth_choice[k], berth_range[k]);
                step(pt.position.start_slot[k], pt.velocity.start_slot[k], pt.best_position.start_slot[k],
                     gbest_position.start_slot[k], slot_range);
            }
            Plan plan = decode(prob, pt.position, hyper);
            const double j = prob.evaluate(plan);
            ++pool.evaluations;
            if (j < pt.best_objective) {
                pt.best_objective = j;
                pt.best_position = pt.position;
                pt.best_plan = std::move(plan);
            }
        }
        // Single commit point per iteration.
        for (const auto& pt : swarm) {
            if (pt.best_objective < gbest_objective) {
                gbest_objective = pt.best_objective;
                gbest_position = pt.best_position;
                gbest_plan = pt.best_plan;
            }
        }
        pool.insert(prob, gbest_plan, gbest_objective);
        pool.gbest_trace.push_back(gbest_objective);
    }
    return pool;
}

// Whole-dataset form; the dataset's flags must already hold the constraints.
inline PairsPool run_epso(const Dataset& data, const EpsoHyper& hyper, const ObjectiveWeights& weights,
                          std::uint64_t seed) {
    return run_epso(SearchProblem::whole(data, weights), hyper, seed);
}

}  // namespace portopt
