#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "portopt/port_model.hpp"

namespace portopt {

// An optimization instance over a subset of a dataset's portcalls.
//
// Members are the portcalls whose KPIs enter the objective. Variables are the
// non-fixed members; those are the only placements the search changes. Every
// fixed portcall of the dataset and every committed placement is an occupied
// block that variables must route around.
class SearchProblem {
public:
    SearchProblem(const Dataset& data, std::vector<std::size_t> members,
                  std::span<const std::pair<std::size_t, Placement>> committed, ObjectiveWeights weights,
                  NormalizationContext norm)
        : data_(&data), members_(std::move(members)), weights_(weights), norm_(norm) {
        weights_.validate();
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());

        const auto& pcs = data.portcalls();
        seed_plan_ = data.baseline_plan();
        blocks_.assign(data.berths().size(), {});

        std::vector<bool> is_member(pcs.size(), false);
        for (std::size_t p : members_) {
            if (p >= pcs.size()) throw usage_error("member index out of range");
            is_member[p] = true;
            if (!pcs[p].is_fixed) variables_.push_back(p);
        }
        for (std::size_t p = 0; p < pcs.size(); ++p) {
            if (pcs[p].is_fixed) add_block(p, data.baseline_plan()[p]);
        }
        for (const auto& [p, pl] : committed) {
            if (p >= pcs.size() || is_member[p]) throw usage_error("committed portcall overlaps the members");
            if (pcs[p].is_fixed) continue;
            seed_plan_[p] = pl;
            add_block(p, pl);
        }
        for (auto& b : blocks_) {
            std::sort(b.begin(), b.end(), [](const Interval& x, const Interval& y) { return x.begin < y.begin; });
        }
    }

    // Every portcall is a member; the blocks are the fixed pairs.
    static SearchProblem whole(const Dataset& data, ObjectiveWeights weights, NormalizationContext norm) {
        std::vector<std::size_t> all(data.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        return SearchProblem(data, std::move(all), {}, weights, norm);
    }

    static SearchProblem whole(const Dataset& data, ObjectiveWeights weights) {
        return whole(data, weights, normalization_from_baseline(data));
    }

    const Dataset& data() const { return *data_; }
    std::span<const std::size_t> members() const { return members_; }
    std::span<const std::size_t> variables() const { return variables_; }
    const Plan& seed_plan() const { return seed_plan_; }
    const ObjectiveWeights& weights() const { return weights_; }
    const NormalizationContext& normalization() const { return norm_; }

    std::size_t distinct_vessels() const {
        std::unordered_set<std::string> v;
        for (std::size_t p : members_) v.insert(data_->portcalls()[p].vessel_id);
        return v.size();
    }

    // Places every variable at its desired (berth, start), then restores per-berth
    // non-overlap: variables are taken in (berth, start, portcall) order and a
    // variable that collides with an already placed interval moves to the earliest
    // free start >= its arrival on the same berth.
    Plan realize(std::span<const Placement> desired) const {
        if (desired.size() != variables_.size()) throw usage_error("desired placements do not match variables");
        Plan plan = seed_plan_;
        std::vector<std::size_t> order(variables_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (desired[a].berth != desired[b].berth) return desired[a].berth < desired[b].berth;
            if (desired[a].start != desired[b].start) return desired[a].start < desired[b].start;
            return variables_[a] < variables_[b];
        });

        auto occupied = blocks_;
        const auto& pcs = data_->portcalls();
        for (std::size_t k : order) {
            const std::size_t p = variables_[k];
            const auto& pc = pcs[p];
            auto& lane = occupied[desired[k].berth];
            const minutes want = std::max(desired[k].start, pc.arrival_time);
            const minutes start = place(lane, want, pc.service_duration, pc.arrival_time);
            auto pos = std::upper_bound(lane.begin(), lane.end(), start,
                                        [](minutes t, const Interval& iv) { return t < iv.begin; });
            lane.insert(pos, Interval{start, start + pc.service_duration});
            plan[p] = {desired[k].berth, start};
        }
        return plan;
    }

    // List schedule: variables in arrival order, each on the allowed berth where
    // it can start earliest (ties to the lower berth index).
    Plan earliest_start_plan() const {
        const auto& pcs = data_->portcalls();
        std::vector<std::size_t> order(variables_.begin(), variables_.end());
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pcs[a].arrival_time < pcs[b].arrival_time;
        });
        auto occupied = blocks_;
        Plan plan = seed_plan_;
        for (std::size_t p : order) {
            const auto& pc = pcs[p];
            std::size_t best_berth = 0;
            minutes best_start = std::numeric_limits<minutes>::max();
            for (std::size_t b : data_->allowed_berths(p)) {
                const minutes t = place(occupied[b], pc.arrival_time, pc.service_duration, pc.arrival_time);
                if (t < best_start) {
                    best_start = t;
                    best_berth = b;
                }
            }
            auto& lane = occupied[best_berth];
            auto pos = std::upper_bound(lane.begin(), lane.end(), best_start,
                                        [](minutes t, const Interval& iv) { return t < iv.begin; });
            lane.insert(pos, Interval{best_start, best_start + pc.service_duration});
            plan[p] = {best_berth, best_start};
        }
        return plan;
    }

    // True when members sit on allowed berths, after arrival, clear of the
    // blocks and of each other.
    bool admits(const Plan& plan) const {
        auto occupied = blocks_;
        const auto& pcs = data_->portcalls();
        for (std::size_t p : variables_) {
            const auto& pl = plan[p];
            if (pl.start < pcs[p].arrival_time) return false;
            auto allowed = data_->allowed_berths(p);
            if (std::find(allowed.begin(), allowed.end(), pl.berth) == allowed.end()) return false;
            const Interval iv{pl.start, pl.start + pcs[p].service_duration};
            for (const auto& other : occupied[pl.berth]) {
                if (overlaps(other, iv)) return false;
            }
            occupied[pl.berth].push_back(iv);
        }
        return true;
    }

    Totals totals(const Plan& plan) const { return plan_totals(*data_, plan, members_); }

    double evaluate(const Plan& plan) const {
        const auto t = totals(plan);
        return objective_from_averages(t.avg_wait(), t.avg_turnaround(), weights_, norm_);
    }

    // Assignments of the members only.
    Schedule to_schedule(const Plan& plan) const {
        Schedule s;
        s.assignments.reserve(members_.size());
        const auto& pcs = data_->portcalls();
        const auto& berths = data_->berths();
        for (std::size_t p : members_) {
            s.assignments.push_back({pcs[p].portcall_id, berths[plan[p].berth].berth_id, plan[p].start});
        }
        return s;
    }

    bool same_variables(const Plan& a, const Plan& b) const {
        for (std::size_t p : variables_) {
            if (a[p] != b[p]) return false;
        }
        return true;
    }

    // Earliest start >= `want` if that is free, else earliest free start >= `arrival`.
    static minutes place(const std::vector<Interval>& lane, minutes want, minutes duration, minutes arrival) {
        const Interval iv{want, want + duration};
        auto it = std::lower_bound(lane.begin(), lane.end(), want,
                                   [](const Interval& x, minutes t) { return x.end <= t; });
        // Lanes are disjoint and sorted, so ends are sorted too; `it` is the first
        // interval ending after `want`.
        if (it == lane.end() || !overlaps(*it, iv)) return want;

        minutes t = arrival;
        for (const auto& x : lane) {
            if (x.end <= t) continue;
            if (x.begin >= t + duration) break;
            t = std::max(t, x.end);
        }
        return t;
    }

private:
    void add_block(std::size_t p, const Placement& pl) {
        blocks_[pl.berth].push_back({pl.start, pl.start + data_->portcalls()[p].service_duration});
    }

    const Dataset* data_;
    std::vector<std::size_t> members_;
    std::vector<std::size_t> variables_;
    ObjectiveWeights weights_;
    NormalizationContext norm_;
    Plan seed_plan_;
    std::vector<std::vector<Interval>> blocks_;
};

}  // namespace portopt
