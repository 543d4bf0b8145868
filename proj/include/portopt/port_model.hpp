#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "portopt/error.hpp"
#include "portopt/types.hpp"

namespace portopt {

// ---------------------------------------------------------------------------
// Per-portcall KPIs
// ---------------------------------------------------------------------------

inline minutes compute_wait(const Portcall& pc, const Assignment& a) {
    if (a.portcall_id != pc.portcall_id) {
        throw usage_error("assignment '" + a.portcall_id + "' does not refer to portcall '" +
                          pc.portcall_id + "'");
    }
    if (a.berth_start < pc.arrival_time) {
        throw invariant_error("portcall '" + pc.portcall_id + "' berths before it arrives");
    }
    return a.berth_start - pc.arrival_time;
}

// Departure is the end of service, so turnaround = wait + service.
inline minutes compute_turnaround(const Portcall& pc, const Assignment& a) {
    return compute_wait(pc, a) + pc.service_duration;
}

// ---------------------------------------------------------------------------
// Dense encoding of a schedule: one placement per portcall, by dataset index.
// ---------------------------------------------------------------------------

struct Placement {
    std::size_t berth = 0;
    minutes start = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
    friend auto operator<=>(const Placement&, const Placement&) = default;
};

using Plan = std::vector<Placement>;

struct Interval {
    minutes begin = 0;
    minutes end = 0;  // exclusive
};

inline bool overlaps(const Interval& a, const Interval& b) {
    return a.begin < b.end && b.begin < a.end;
}

// FCFS on each portcall's requested berth: arrival order, ties by portcall id,
// start = max(arrival, previous departure on that berth).
inline Schedule baseline_schedule(std::span<const Portcall> portcalls, std::span<const Berth> berths) {
    if (portcalls.empty()) {
        throw usage_error("baseline_schedule needs at least one portcall");
    }
    std::vector<std::size_t> order(portcalls.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = portcalls[a];
        const auto& pb = portcalls[b];
        if (pa.arrival_time != pb.arrival_time) return pa.arrival_time < pb.arrival_time;
        return pa.portcall_id < pb.portcall_id;
    });

    std::unordered_map<std::string, minutes> free_at;
    for (const auto& b : berths) free_at.emplace(b.berth_id, std::numeric_limits<minutes>::min());

    Schedule s;
    s.assignments.reserve(portcalls.size());
    for (std::size_t i : order) {
        const auto& pc = portcalls[i];
        auto it = free_at.find(pc.requested_berth);
        if (it == free_at.end()) {
            throw data_error("portcall '" + pc.portcall_id + "' requests unknown berth '" +
                             pc.requested_berth + "'");
        }
        const minutes start = std::max(pc.arrival_time, it->second);
        it->second = start + pc.service_duration;
        s.assignments.push_back({pc.portcall_id, pc.requested_berth, start});
    }
    std::sort(s.assignments.begin(), s.assignments.end(),
              [](const Assignment& a, const Assignment& b) { return a.portcall_id < b.portcall_id; });
    return s;
}

// ---------------------------------------------------------------------------
// Dataset: berths + portcalls + baseline, with index lookups.
//
// Berths are kept sorted by berth_id and portcalls by portcall_id, so dataset
// indices double as the id tie-break order everywhere downstream.
// ---------------------------------------------------------------------------

class Dataset {
public:
    Dataset() = default;

    // Synthetic data: baseline is FCFS per requested berth.
    Dataset(std::vector<Berth> berths, std::vector<Portcall> portcalls)
        : berths_(std::move(berths)), portcalls_(std::move(portcalls)) {
        sort_and_index();
        init_baseline(baseline_schedule(portcalls_, berths_));
    }

    // Ingested data: baseline is the observed schedule.
    Dataset(std::vector<Berth> berths, std::vector<Portcall> portcalls, Schedule observed)
        : berths_(std::move(berths)), portcalls_(std::move(portcalls)) {
        sort_and_index();
        init_baseline(std::move(observed));
    }

    const std::vector<Berth>& berths() const { return berths_; }
    const std::vector<Portcall>& portcalls() const { return portcalls_; }
    const Schedule& baseline() const { return baseline_; }
    const Plan& baseline_plan() const { return baseline_plan_; }
    std::size_t size() const { return portcalls_.size(); }
    bool empty() const { return portcalls_.empty(); }

    std::optional<std::size_t> find_berth(std::string_view id) const {
        auto it = berth_index_.find(std::string(id));
        if (it == berth_index_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<std::size_t> find_portcall(std::string_view id) const {
        auto it = portcall_index_.find(std::string(id));
        if (it == portcall_index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t requested_berth(std::size_t p) const { return requested_[p]; }

    // Berths a portcall may occupy under its current flags, ascending berth index.
    std::span<const std::size_t> allowed_berths(std::size_t p) const { return allowed_[p]; }

    void set_flags(std::size_t p, bool fixed, bool buffer_eligible) {
        if (fixed && buffer_eligible) {
            throw usage_error("portcall '" + portcalls_[p].portcall_id +
                              "' cannot be both fixed and buffer-eligible");
        }
        portcalls_[p].is_fixed = fixed;
        portcalls_[p].is_buffer_eligible = buffer_eligible;
        allowed_[p] = compute_allowed(p);
    }

    void clear_flags() {
        for (std::size_t p = 0; p < portcalls_.size(); ++p) set_flags(p, false, false);
    }

    Schedule to_schedule(const Plan& plan) const {
        Schedule s;
        s.assignments.reserve(plan.size());
        for (std::size_t p = 0; p < plan.size(); ++p) {
            s.assignments.push_back(
                {portcalls_[p].portcall_id, berths_[plan[p].berth].berth_id, plan[p].start});
        }
        return s;
    }

    // Requires exactly one assignment per portcall with known ids.
    Plan to_plan(const Schedule& s) const {
        Plan plan(portcalls_.size());
        std::vector<bool> seen(portcalls_.size(), false);
        for (const auto& a : s.assignments) {
            auto p = find_portcall(a.portcall_id);
            auto b = find_berth(a.berth_id);
            if (!p || !b) throw data_error("schedule references unknown portcall or berth: " + a.portcall_id);
            if (seen[*p]) throw data_error("schedule assigns portcall twice: " + a.portcall_id);
            seen[*p] = true;
            plan[*p] = {*b, a.berth_start};
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            throw data_error("schedule does not cover every portcall");
        }
        return plan;
    }

private:
    void sort_and_index() {
        std::sort(berths_.begin(), berths_.end(),
                  [](const Berth& a, const Berth& b) { return a.berth_id < b.berth_id; });
        std::sort(portcalls_.begin(), portcalls_.end(),
                  [](const Portcall& a, const Portcall& b) { return a.portcall_id < b.portcall_id; });

        for (std::size_t i = 0; i < berths_.size(); ++i) {
            if (!berth_index_.emplace(berths_[i].berth_id, i).second) {
                throw data_error("duplicate berth_id '" + berths_[i].berth_id + "'");
            }
        }
        std::map<std::string, bool> group_has_regular;
        for (const auto& b : berths_) group_has_regular[b.compat_group] |= !b.is_buffer;
        for (const auto& b : berths_) {
            if (b.is_buffer && !group_has_regular[b.compat_group]) {
                throw data_error("buffer berth '" + b.berth_id +
                                 "' shares its compat_group with no regular berth");
            }
        }

        requested_.resize(portcalls_.size());
        allowed_.resize(portcalls_.size());
        for (std::size_t p = 0; p < portcalls_.size(); ++p) {
            const auto& pc = portcalls_[p];
            if (!portcall_index_.emplace(pc.portcall_id, p).second) {
                throw data_error("duplicate portcall_id '" + pc.portcall_id + "'");
            }
            auto b = find_berth(pc.requested_berth);
            if (!b) {
                throw data_error("portcall '" + pc.portcall_id + "' requests unknown berth '" +
                                 pc.requested_berth + "'");
            }
            if (pc.service_duration < 1) {
                throw data_error("portcall '" + pc.portcall_id + "' has service_duration < 1 minute");
            }
            if (pc.is_fixed && pc.is_buffer_eligible) {
                throw data_error("portcall '" + pc.portcall_id + "' is both fixed and buffer-eligible");
            }
            requested_[p] = *b;
        }
        for (std::size_t p = 0; p < portcalls_.size(); ++p) allowed_[p] = compute_allowed(p);
    }

    void init_baseline(Schedule s) {
        baseline_plan_ = to_plan(s);
        for (std::size_t p = 0; p < portcalls_.size(); ++p) {
            if (baseline_plan_[p].berth != requested_[p]) {
                throw data_error("baseline places portcall '" + portcalls_[p].portcall_id +
                                 "' away from its requested berth");
            }
            if (baseline_plan_[p].start < portcalls_[p].arrival_time) {
                throw data_error("baseline berths portcall '" + portcalls_[p].portcall_id +
                                 "' before arrival");
            }
        }
        // Observed berth stays must not overlap either.
        std::vector<std::size_t> order(portcalls_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (baseline_plan_[a].berth != baseline_plan_[b].berth) return baseline_plan_[a].berth < baseline_plan_[b].berth;
            return baseline_plan_[a].start < baseline_plan_[b].start;
        });
        for (std::size_t k = 1; k < order.size(); ++k) {
            const auto a = order[k - 1], b = order[k];
            if (baseline_plan_[a].berth == baseline_plan_[b].berth &&
                baseline_plan_[a].start + portcalls_[a].service_duration > baseline_plan_[b].start) {
                throw data_error("baseline overlaps portcalls '" + portcalls_[a].portcall_id + "' and '" +
                                 portcalls_[b].portcall_id + "' on one berth");
            }
        }
        baseline_ = to_schedule(baseline_plan_);
    }

    // Regular berths of the requested berth's group plus the requested berth
    // itself; buffer berths of the group are appended when eligible.
    std::vector<std::size_t> compute_allowed(std::size_t p) const {
        const std::size_t req = requested_[p];
        const auto& pc = portcalls_[p];
        if (pc.is_fixed) return {req};
        const auto& group = berths_[req].compat_group;
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < berths_.size(); ++b) {
            if (berths_[b].compat_group != group) continue;
            if (!berths_[b].is_buffer || b == req) out.push_back(b);
        }
        if (pc.is_buffer_eligible) {
            for (std::size_t b = 0; b < berths_.size(); ++b) {
                if (b != req && berths_[b].compat_group == group && berths_[b].is_buffer) out.push_back(b);
            }
        }
        return out;
    }

    std::vector<Berth> berths_;
    std::vector<Portcall> portcalls_;
    Schedule baseline_;
    Plan baseline_plan_;
    std::unordered_map<std::string, std::size_t> berth_index_;
    std::unordered_map<std::string, std::size_t> portcall_index_;
    std::vector<std::size_t> requested_;
    std::vector<std::vector<std::size_t>> allowed_;
};

// ---------------------------------------------------------------------------
// Feasibility
// ---------------------------------------------------------------------------

enum class ViolationKind {
    missing_assignment,
    duplicate_assignment,
    unknown_portcall,
    unknown_berth,
    start_before_arrival,
    per_berth_overlap,
    fixed_pair_changed,
    incompatible_berth,
};

inline std::string_view to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::missing_assignment: return "missing-assignment";
        case ViolationKind::duplicate_assignment: return "duplicate-assignment";
        case ViolationKind::unknown_portcall: return "unknown-portcall";
        case ViolationKind::unknown_berth: return "unknown-berth";
        case ViolationKind::start_before_arrival: return "start-before-arrival";
        case ViolationKind::per_berth_overlap: return "per-berth-overlap";
        case ViolationKind::fixed_pair_changed: return "fixed-pair-changed";
        case ViolationKind::incompatible_berth: return "incompatible-berth";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::string portcall_id;
    std::string detail;
};

inline std::vector<Violation> check_feasible(const Schedule& s, const Dataset& data) {
    std::vector<Violation> out;
    const auto& pcs = data.portcalls();
    const auto& berths = data.berths();
    std::vector<int> count(pcs.size(), 0);
    std::vector<std::vector<std::pair<Interval, std::size_t>>> per_berth(berths.size());

    for (const auto& a : s.assignments) {
        auto p = data.find_portcall(a.portcall_id);
        if (!p) {
            out.push_back({ViolationKind::unknown_portcall, a.portcall_id, "not in dataset"});
            continue;
        }
        if (++count[*p] > 1) {
            out.push_back({ViolationKind::duplicate_assignment, a.portcall_id, "assigned more than once"});
            continue;
        }
        auto b = data.find_berth(a.berth_id);
        if (!b) {
            out.push_back({ViolationKind::unknown_berth, a.portcall_id, "berth '" + a.berth_id + "'"});
            continue;
        }
        const auto& pc = pcs[*p];
        if (a.berth_start < pc.arrival_time) {
            out.push_back({ViolationKind::start_before_arrival, a.portcall_id,
                           "start " + std::to_string(a.berth_start) + " < arrival " +
                               std::to_string(pc.arrival_time)});
        }
        if (pc.is_fixed) {
            const auto& base = data.baseline_plan()[*p];
            if (*b != base.berth || a.berth_start != base.start) {
                out.push_back({ViolationKind::fixed_pair_changed, a.portcall_id,
                               "fixed pair moved from " + berths[base.berth].berth_id + "@" +
                                   std::to_string(base.start)});
            }
        } else {
            auto allowed = data.allowed_berths(*p);
            if (std::find(allowed.begin(), allowed.end(), *b) == allowed.end()) {
                out.push_back({ViolationKind::incompatible_berth, a.portcall_id,
                               "berth '" + a.berth_id + "' not allowed"});
            }
        }
        per_berth[*b].push_back({{a.berth_start, a.berth_start + pc.service_duration}, *p});
    }

    for (std::size_t p = 0; p < pcs.size(); ++p) {
        if (count[p] == 0) {
            out.push_back({ViolationKind::missing_assignment, pcs[p].portcall_id, "no assignment"});
        }
    }

    for (std::size_t b = 0; b < per_berth.size(); ++b) {
        auto& v = per_berth[b];
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
            if (x.first.begin != y.first.begin) return x.first.begin < y.first.begin;
            return x.second < y.second;
        });
        // Sweep keeping the interval that reaches furthest right.
        for (std::size_t i = 1, reach = 0; i < v.size(); ++i) {
            if (v[i].first.begin < v[reach].first.end) {
                out.push_back({ViolationKind::per_berth_overlap, pcs[v[i].second].portcall_id,
                               "overlaps '" + pcs[v[reach].second].portcall_id + "' on berth '" +
                                   berths[b].berth_id + "'"});
            }
            if (v[i].first.end > v[reach].first.end) reach = i;
        }
    }
    return out;
}

class infeasible_schedule : public usage_error {
public:
    explicit infeasible_schedule(std::vector<Violation> v)
        : usage_error(describe(v)), violations_(std::move(v)) {}
    const std::vector<Violation>& violations() const { return violations_; }

private:
    static std::string describe(const std::vector<Violation>& v) {
        std::string msg = "infeasible schedule (" + std::to_string(v.size()) + " violations)";
        if (!v.empty()) {
            msg += ": ";
            msg += to_string(v.front().kind);
            msg += " " + v.front().portcall_id + " " + v.front().detail;
        }
        return msg;
    }
    std::vector<Violation> violations_;
};

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

// Reference averages the objective terms are divided by (baseline averages).
struct NormalizationContext {
    double ref_wait = 0.0;
    double ref_turn = 0.0;
};

struct Totals {
    minutes wait = 0;
    minutes turnaround = 0;
    std::size_t count = 0;

    double avg_wait() const { return count ? static_cast<double>(wait) / count : 0.0; }
    double avg_turnaround() const { return count ? static_cast<double>(turnaround) / count : 0.0; }
};

inline Totals plan_totals(const Dataset& data, const Plan& plan, std::span<const std::size_t> members) {
    Totals t;
    const auto& pcs = data.portcalls();
    for (std::size_t p : members) {
        const minutes w = plan[p].start - pcs[p].arrival_time;
        t.wait += w;
        t.turnaround += w + pcs[p].service_duration;
    }
    t.count = members.size();
    return t;
}

inline Totals plan_totals(const Dataset& data, const Plan& plan) {
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return plan_totals(data, plan, all);
}

inline NormalizationContext normalization_from_baseline(const Dataset& data) {
    const auto t = plan_totals(data, data.baseline_plan());
    return {t.avg_wait(), t.avg_turnaround()};
}

// J = w_wait * avg_wait / ref_wait + w_turn * avg_turn / ref_turn. A term with
// zero weight is skipped, so a zero reference only matters when weighted.
inline double objective_from_averages(double avg_wait, double avg_turn, const ObjectiveWeights& w,
                                      const NormalizationContext& norm) {
    double j = 0.0;
    if (w.w_wait > 0.0) {
        if (norm.ref_wait <= 0.0) throw usage_error("objective: baseline average wait is zero");
        j += w.w_wait * (avg_wait / norm.ref_wait);
    }
    if (w.w_turn > 0.0) {
        if (norm.ref_turn <= 0.0) throw usage_error("objective: baseline average turnaround is zero");
        j += w.w_turn * (avg_turn / norm.ref_turn);
    }
    return j;
}

inline double objective(const Schedule& s, const Dataset& data, const ObjectiveWeights& w,
                        const NormalizationContext& norm) {
    auto violations = check_feasible(s, data);
    if (!violations.empty()) throw infeasible_schedule(std::move(violations));
    const auto t = plan_totals(data, data.to_plan(s));
    return objective_from_averages(t.avg_wait(), t.avg_turnaround(), w, norm);
}

// ---------------------------------------------------------------------------
// KPI report against the dataset baseline
// ---------------------------------------------------------------------------

inline double reduction_pct(double baseline, double value) {
    if (baseline <= 0.0) return 0.0;
    return 100.0 * (baseline - value) / baseline;
}

inline KpiReport compute_kpis(const Dataset& data, const Plan& plan) {
    const auto t = plan_totals(data, plan);
    const auto base = plan_totals(data, data.baseline_plan());
    KpiReport k;
    k.avg_wait = t.avg_wait();
    k.avg_turnaround = t.avg_turnaround();
    k.has_baseline = true;
    // Reductions come from integer totals so identical schedules give exactly 0.
    k.wait_reduction_pct = base.wait == t.wait ? 0.0 : reduction_pct(base.avg_wait(), k.avg_wait);
    k.turnaround_reduction_pct =
        base.turnaround == t.turnaround ? 0.0 : reduction_pct(base.avg_turnaround(), k.avg_turnaround);
    return k;
}

inline KpiReport compute_kpis(const Dataset& data, const Schedule& s) {
    return compute_kpis(data, data.to_plan(s));
}

}  // namespace portopt
