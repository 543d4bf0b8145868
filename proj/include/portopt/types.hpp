#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "portopt/error.hpp"

namespace portopt {

// All times are integer minutes; absolute times are minutes since the Unix epoch (UTC).
using minutes = std::int64_t;

constexpr minutes minutes_per_day = 24 * 60;

struct Berth {
    std::string berth_id;
    std::string terminal_id;
    std::string compat_group;   // cargo-compatibility class
    bool is_buffer = false;     // under-used berth that may absorb overflow from its group
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const Berth&, const Berth&) = default;
};

struct Portcall {
    std::string portcall_id;
    std::string vessel_id;
    minutes arrival_time = 0;        // anchorage arrival
    std::string requested_berth;     // historical berth
    minutes service_duration = 1;    // time alongside, independent of the berth
    bool is_fixed = false;           // berth and start locked to the baseline
    bool is_buffer_eligible = false; // may additionally move to buffer berths of its group

    friend bool operator==(const Portcall&, const Portcall&) = default;
};

struct Assignment {
    std::string portcall_id;
    std::string berth_id;
    minutes berth_start = 0;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct Schedule {
    std::vector<Assignment> assignments;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Weights on the normalized average wait and average turnaround terms.
struct ObjectiveWeights {
    double w_wait = 0.0;
    double w_turn = 1.0;

    void validate() const {
        if (!(w_wait >= 0.0 && w_wait <= 1.0 && w_turn >= 0.0 && w_turn <= 1.0)) {
            throw parameter_error("objective weights must lie in [0, 1]");
        }
        if (w_wait + w_turn < 1.0 - 1e-9 || w_wait + w_turn > 1.0 + 1e-9) {
            throw parameter_error("objective weights must sum to 1");
        }
    }
};

struct KpiReport {
    double avg_wait = 0.0;        // minutes
    double avg_turnaround = 0.0;  // minutes
    double wait_reduction_pct = 0.0;
    double turnaround_reduction_pct = 0.0;
    double runtime_sec = 0.0;
    bool has_baseline = false;
};

}  // namespace portopt
