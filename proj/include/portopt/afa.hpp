#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "portopt/epso.hpp"
#include "portopt/rng.hpp"
#include "portopt/search_problem.hpp"

namespace portopt {

struct AfaHyper {
    double alpha = 1.0;   // distance coefficient, (0, 1]
    double beta = 1.0;    // randomness coefficient, [0, 1]
    double gamma = 1.0;   // vortex coefficient, [0, 1]
    int s = 1;            // 0: small-region wandering, 1: large-region wandering
    int delta_b = 0;      // maximum boundary difference; 0 means pool size
    int population = 0;   // 0: number of distinct vessels in the problem
    int max_evals = 20000;
    int stall_limit = 50;  // iterations without improvement of the best

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw parameter_error("afa: alpha must lie in (0, 1]");
        if (!(beta >= 0.0 && beta <= 1.0)) throw parameter_error("afa: beta must lie in [0, 1]");
        if (!(gamma >= 0.0 && gamma <= 1.0)) throw parameter_error("afa: gamma must lie in [0, 1]");
        if (s != 0 && s != 1) throw parameter_error("afa: s must be 0 or 1");
        if (delta_b < 0) throw parameter_error("afa: delta_b must be >= 0");
        if (population != 0 && population < 1) throw parameter_error("afa: population must be >= 1");
        if (max_evals < 1) throw parameter_error("afa: max_evals must be >= 1");
        if (stall_limit < 1) throw parameter_error("afa: stall_limit must be >= 1");
    }
};

// One candidate list per variable portcall: the distinct placements it takes
// across the pool, in order of first appearance (the pool is sorted best-first,
// so index 0 of every dimension reproduces the best pool entry).
struct SearchSpace {
    std::vector<std::vector<Placement>> candidates;
    int delta_b = 1;

    std::size_t dimensions() const { return candidates.size(); }
};

inline SearchSpace build_search_space(const PairsPool& pool, std::span<const std::size_t> variables) {
    if (pool.empty()) throw usage_error("afa: the pairs pool is empty");
    SearchSpace space;
    space.delta_b = static_cast<int>(pool.size());
    space.candidates.resize(variables.size());
    for (std::size_t k = 0; k < variables.size(); ++k) {
        auto& list = space.candidates[k];
        for (const auto& entry : pool.candidates) {
            const Placement& pl = entry.plan[variables[k]];
            if (std::find(list.begin(), list.end(), pl) == list.end()) list.push_back(pl);
        }
    }
    return space;
}

using FireflyPosition = std::vector<int>;

// Continuous move before rounding. A dimmer firefly is pulled toward the
// brightest one and jittered; the brightest only wanders.
//   dimmer:    x + alpha*gamma*(x_max - x) + beta*[(dB - 1)*s + 1]*eps
//   brightest: x + beta*[(dB - 1)*s + 1]*eps
inline std::vector<double> move_firefly(std::span<const int> x_i, std::span<const int> x_max, bool dimmer,
                                        const AfaHyper& hyper, int delta_b, rng_engine& rng) {
    if (x_i.size() != x_max.size()) throw usage_error("afa: firefly dimensions differ");
    std::normal_distribution<double> eps(0.0, 1.0);
    const double noise = hyper.beta * ((delta_b - 1) * hyper.s + 1);
    std::vector<double> out(x_i.size());
    for (std::size_t k = 0; k < x_i.size(); ++k) {
        double x = static_cast<double>(x_i[k]);
        if (dimmer) x += hyper.alpha * hyper.gamma * static_cast<double>(x_max[k] - x_i[k]);
        out[k] = x + noise * eps(rng);
    }
    return out;
}

inline FireflyPosition snap_to_space(std::span<const double> raw, const SearchSpace& space) {
    FireflyPosition x(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const long hi = static_cast<long>(space.candidates[k].size()) - 1;
        x[k] = static_cast<int>(std::clamp(std::lround(raw[k]), 0L, hi));
    }
    return x;
}

inline Plan decode_firefly(const SearchProblem& prob, const SearchSpace& space, const FireflyPosition& x) {
    std::vector<Placement> desired(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) desired[k] = space.candidates[k][static_cast<std::size_t>(x[k])];
    return prob.realize(desired);
}

struct AfaResult {
    Plan plan;
    Schedule schedule;
    double objective = 0.0;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    std::vector<double> best_trace;  // best objective after each iteration
};

inline std::size_t resolve_population(const SearchProblem& prob, const AfaHyper& hyper) {
    if (hyper.population > 0) return static_cast<std::size_t>(hyper.population);
    return std::max<std::size_t>(2, prob.distinct_vessels());
}

// Global search over recombinations of the pool's per-portcall placements.
// The best schedule ever seen is kept outside the population.
inline AfaResult run_afa(const PairsPool& pool, const SearchProblem& prob, const AfaHyper& hyper,
                         std::uint64_t seed) {
    hyper.validate();
    const auto space = build_search_space(pool, prob.variables());
    const int delta_b = hyper.delta_b > 0 ? hyper.delta_b : space.delta_b;

    AfaResult best;
    best.plan = pool.best().plan;
    best.objective = pool.best().objective;

    const std::size_t m = space.dimensions();
    bool degenerate = true;
    for (const auto& c : space.candidates) degenerate = degenerate && c.size() == 1;
    if (m == 0 || degenerate) {
        best.schedule = prob.to_schedule(best.plan);
        return best;
    }

    rng_engine rng(seed);
    const std::size_t n = resolve_population(prob, hyper);
    std::vector<FireflyPosition> swarm(n, FireflyPosition(m, 0));
    std::vector<double> intensity(n);

    // Firefly 0 sits on the pool's best entry; the rest are uniform over the space.
    intensity[0] = -best.objective;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            std::uniform_int_distribution<int> pick(0, static_cast<int>(space.candidates[k].size()) - 1);
            swarm[i][k] = pick(rng);
        }
        Plan plan = decode_firefly(prob, space, swarm[i]);
        const double j = prob.evaluate(plan);
        ++best.evaluations;
        intensity[i] = -j;
        if (j < best.objective) {
            best.objective = j;
            best.plan = std::move(plan);
        }
    }

    const auto budget = static_cast<std::size_t>(hyper.max_evals);
    int stall = 0;
    while (best.evaluations < budget && stall < hyper.stall_limit) {
        const std::size_t brightest = static_cast<std::size_t>(
            std::max_element(intensity.begin(), intensity.end()) - intensity.begin());
        const FireflyPosition x_max = swarm[brightest];
        const double i_max = intensity[brightest];
        bool improved = false;

        for (std::size_t i = 0; i < n && best.evaluations < budget; ++i) {
            const bool dimmer = intensity[i] < i_max;
            const auto raw = move_firefly(swarm[i], x_max, dimmer, hyper, delta_b, rng);
            swarm[i] = snap_to_space(raw, space);
            Plan plan = decode_firefly(prob, space, swarm[i]);
            const double j = prob.evaluate(plan);
            ++best.evaluations;
            intensity[i] = -j;
            if (j < best.objective) {
                best.objective = j;
                best.plan = std::move(plan);
                improved = true;
            }
        }
        ++best.iterations;
        best.best_trace.push_back(best.objective);
        stall = improved ? 0 : stall + 1;
    }
    best.schedule = prob.to_schedule(best.plan);
    return best;
}

// Whole-dataset form; the dataset's flags must already hold the constraints.
inline AfaResult run_afa(const PairsPool& pool, const Dataset& data, const ObjectiveWeights& weights,
                         const AfaHyper& hyper, std::uint64_t seed) {
    return run_afa(pool, SearchProblem::whole(data, weights), hyper, seed);
}

}  // namespace portopt
