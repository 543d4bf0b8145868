#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "portopt/port_model.hpp"
#include "portopt/rng.hpp"

namespace portopt {

// Desk-scale stand-in for a few months of tanker port calls. Demand on the
// regular berths follows a Zipf popularity so a few terminals are congested
// and the rest, plus the buffer berths, have slack.
struct SyntheticParams {
    int n_vessels = 96;
    double portcalls_per_vessel = 2.08;   // 4341 portcalls / 2088 vessels
    int n_berths = 20;                    // including buffers
    int n_buffer_berths = 4;
    int n_anchorages = 4;
    int n_compat_groups = 4;
    double horizon_days = 60.0;
    double mean_interarrival_min = 0.0;   // 0: horizon spread evenly over the portcalls
    double service_mu = 7.27;             // log-minutes; exp(7.27) ~ 24 h median
    double service_sigma = 0.5;
    double zipf_exponent = 1.0;
    minutes epoch_start = 24805440;       // 2017-03-01 00:00 UTC

    int portcall_count() const {
        return static_cast<int>(std::lround(n_vessels * portcalls_per_vessel));
    }

    double effective_interarrival() const {
        if (mean_interarrival_min > 0.0) return mean_interarrival_min;
        return horizon_days * minutes_per_day / std::max(1, portcall_count());
    }

    void validate() const {
        if (n_vessels < 1) throw parameter_error("synthetic: n_vessels must be >= 1");
        if (!(portcalls_per_vessel >= 1.0)) throw parameter_error("synthetic: portcalls_per_vessel must be >= 1");
        if (n_berths < 1) throw parameter_error("synthetic: n_berths must be >= 1");
        if (n_buffer_berths < 0 || n_buffer_berths >= n_berths) {
            throw parameter_error("synthetic: need at least one regular (non-buffer) berth");
        }
        if (n_anchorages < 1) throw parameter_error("synthetic: n_anchorages must be >= 1");
        if (n_compat_groups < 1) throw parameter_error("synthetic: n_compat_groups must be >= 1");
        if (!(horizon_days >= 1.0)) throw parameter_error("synthetic: horizon_days must be >= 1");
        if (mean_interarrival_min < 0.0) throw parameter_error("synthetic: mean_interarrival_min must be >= 0");
        if (!(service_sigma >= 0.0)) throw parameter_error("synthetic: service_sigma must be >= 0");
        if (portcall_count() < 1) throw parameter_error("synthetic: parameters yield zero portcalls");
    }
};

// Standard-instance shape scaled to `portcalls` calls: same calls per vessel
// and the horizon stretched in proportion, so congestion stays comparable.
inline SyntheticParams scaled_standard(int portcalls) {
    if (portcalls < 1) throw parameter_error("synthetic: size must be >= 1 portcall");
    SyntheticParams p;
    p.n_vessels = std::max(1, static_cast<int>(std::lround(portcalls / p.portcalls_per_vessel)));
    p.portcalls_per_vessel = std::max(1.0, static_cast<double>(portcalls) / p.n_vessels);
    p.horizon_days = std::max(1.0, p.horizon_days * portcalls / 200.0);  // defaults are the 200-call instance
    return p;
}

struct SyntheticAnchorage {
    std::string zone_id;
    double lat = 0.0;
    double lon = 0.0;
};

struct SyntheticDataset {
    Dataset dataset;                             // baseline = FCFS per requested berth
    std::vector<SyntheticAnchorage> anchorages;  // abstract waiting areas
};

namespace detail {

inline std::string padded(const char* prefix, int value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, value);
    return buf;
}

}  // namespace detail

inline SyntheticDataset generate_synthetic(const SyntheticParams& prm, std::uint64_t seed) {
    prm.validate();
    rng_engine rng(derive_seed(seed, seed_stream::synthetic));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n_regular = prm.n_berths - prm.n_buffer_berths;
    const int n_groups = std::min(prm.n_compat_groups, n_regular);

    // Popularity rank of each regular berth is a random permutation; rank k
    // belongs to group k mod G and buffer j joins the group of rank j, i.e. the
    // group of one of the most congested berths.
    std::vector<int> rank_of(n_regular);
    std::iota(rank_of.begin(), rank_of.end(), 0);
    std::shuffle(rank_of.begin(), rank_of.end(), rng);

    SyntheticDataset out;
    std::vector<Berth> berths;
    berths.reserve(prm.n_berths);
    const double base_lat = 1.25, base_lon = 103.80;
    for (int b = 0; b < prm.n_berths; ++b) {
        Berth berth;
        berth.berth_id = detail::padded("B", b + 1, 3);
        berth.terminal_id = detail::padded("T", b / 2 + 1, 2);
        if (b < n_regular) {
            berth.compat_group = detail::padded("G", rank_of[b] % n_groups + 1, 2);
        } else {
            berth.is_buffer = true;
            berth.compat_group = detail::padded("G", (b - n_regular) % n_groups + 1, 2);
        }
        berth.lat = base_lat + 0.1 * unit(rng);
        berth.lon = base_lon + 0.2 * unit(rng);
        berths.push_back(std::move(berth));
    }
    for (int a = 0; a < prm.n_anchorages; ++a) {
        out.anchorages.push_back({detail::padded("A", a + 1, 2), base_lat - 0.05 * unit(rng),
                                  base_lon + 0.2 * unit(rng)});
    }

    std::vector<double> weight(n_regular);
    for (int b = 0; b < n_regular; ++b) weight[b] = 1.0 / std::pow(rank_of[b] + 1.0, prm.zipf_exponent);
    std::discrete_distribution<int> pick_berth(weight.begin(), weight.end());
    std::exponential_distribution<double> gap(1.0 / prm.effective_interarrival());
    std::lognormal_distribution<double> service(prm.service_mu, prm.service_sigma);

    // Vessels are reused once their previous call has finished. The least used
    // free vessel takes the next arrival, so every vessel gets a call before any
    // gets a second one; if no vessel is free the arrival waits for one.
    const int n_calls = prm.portcall_count();
    std::vector<minutes> vessel_free(prm.n_vessels, std::numeric_limits<minutes>::min());
    std::vector<int> vessel_calls(prm.n_vessels, 0);
    std::vector<Portcall> portcalls;
    portcalls.reserve(n_calls);
    double clock = 0.0;
    for (int i = 0; i < n_calls; ++i) {
        clock += gap(rng);
        minutes arrival = prm.epoch_start + static_cast<minutes>(std::floor(clock));
        int chosen = -1;
        for (int v = 0; v < prm.n_vessels; ++v) {
            if (vessel_free[v] > arrival) continue;
            if (chosen < 0 || vessel_calls[v] < vessel_calls[chosen]) chosen = v;
        }
        if (chosen < 0) {
            chosen = static_cast<int>(std::min_element(vessel_free.begin(), vessel_free.end()) - vessel_free.begin());
            arrival = vessel_free[chosen];
            clock = static_cast<double>(arrival - prm.epoch_start);
        }
        Portcall pc;
        pc.portcall_id = detail::padded("PC", i + 1, 5);
        pc.vessel_id = std::to_string(563000000 + chosen + 1);
        pc.arrival_time = arrival;
        pc.requested_berth = berths[static_cast<std::size_t>(pick_berth(rng))].berth_id;
        pc.service_duration = std::max<minutes>(1, std::llround(service(rng)));
        vessel_free[chosen] = arrival + pc.service_duration;
        ++vessel_calls[chosen];
        portcalls.push_back(std::move(pc));
    }

    out.dataset = Dataset(std::move(berths), std::move(portcalls));
    return out;
}

}  // namespace portopt
