#pragma once
// Hand-built AIS fixtures with their expected outcomes worked out by hand.

#include <sstream>
#include <string>
#include <vector>

#include "portopt/data_pipeline.hpp"

namespace fixtures {

using namespace portopt;

inline const LatLon anchorage_center{1.21, 103.81};
inline const LatLon berth_center{1.265, 103.855};

// A01: anchorage square, B001: berth square; 3-4 nm apart.
inline std::vector<Zone> two_zones() {
    return {
        {"A01", ZoneKind::anchorage, {{1.20, 103.80}, {1.20, 103.82}, {1.22, 103.82}, {1.22, 103.80}}},
        {"B001", ZoneKind::berth, {{1.26, 103.85}, {1.26, 103.86}, {1.27, 103.86}, {1.27, 103.85}}},
    };
}

// 12 kn northbound, one fix every 10 min (2 nm = 2/60 deg), index 2 thrown
// 100 nm east.
inline Track spike_track() {
    Track t;
    for (int i = 0; i < 6; ++i) t.push_back({"V", i * 10, 1.0 + i * 2.0 / 60.0, 103.0});
    t[2].lon += 100.0 / 60.0;
    return t;
}

inline std::vector<bool> spike_track_expected_flags() { return {false, false, true, false, false, false}; }

inline Track gappy_track() {
    Track t;
    for (int i = 0; i < 5; ++i) t.push_back({"V", i * 10, berth_center.lat, berth_center.lon});
    for (int i = 0; i < 5; ++i) t.push_back({"V", 100 + i * 10, berth_center.lat, berth_center.lon});
    return t;
}

// Anchorage 0..180, one fix outside at 190, berth 200..500.
inline Track anchorage_then_berth_track() {
    Track t;
    for (int m = 0; m <= 180; m += 10) t.push_back({"V1", m, anchorage_center.lat, anchorage_center.lon});
    t.push_back({"V1", 190, 1.24, 103.83});
    for (int m = 200; m <= 500; m += 10) t.push_back({"V1", m, berth_center.lat, berth_center.lon});
    return t;
}

// Three vessels:
//  563000001: anchorage 0..180 with a drift spike at 95, transit fix at 190,
//             berth 200..500 with fixes missing between 300 and 360 (fillable).
//  563000002: anchorage 400..450, jumps straight to berth at 520 (cross-zone,
//             open), berth 520..700; plus one row with lat 95 (rejected).
//  563000003: 20 min at the berth (too short), then two fixes outside every
//             zone 400 min apart (two open gaps: outside-zones, too-long).
inline std::string fixture_ais_csv() {
    std::ostringstream o;
    o << "vessel_id,timestamp_utc_min,lat,lon\n";
    auto row = [&](const char* v, int t, double lat, double lon) { o << v << ',' << t << ',' << lat << ',' << lon << '\n'; };
    for (int m = 0; m <= 180; m += 10) row("563000001", m, anchorage_center.lat, anchorage_center.lon);
    row("563000001", 95, 2.5, 104.5);
    row("563000001", 190, 1.24, 103.83);
    for (int m = 200; m <= 300; m += 10) row("563000001", m, berth_center.lat, berth_center.lon);
    for (int m = 360; m <= 500; m += 10) row("563000001", m, 1.264, 103.854);

    for (int m = 400; m <= 450; m += 10) row("563000002", m, anchorage_center.lat, anchorage_center.lon);
    row("563000002", 455, 95.0, 103.81);
    for (int m = 520; m <= 700; m += 10) row("563000002", m, berth_center.lat, berth_center.lon);

    for (int m = 800; m <= 820; m += 10) row("563000003", m, berth_center.lat, berth_center.lon);
    row("563000003", 900, 1.30, 103.90);
    row("563000003", 1300, 1.30, 103.90);
    return o.str();
}

inline CleaningReport fixture_expected_report() {
    CleaningReport r;
    r.rows_rejected = 1;
    r.drift_flags = 1;
    r.gaps_filled = 1;
    r.gaps_open = 3;
    r.zone_overlap_warnings = 0;
    r.stays = 4;
    r.portcalls = 2;
    return r;
}

inline std::vector<Portcall> fixture_expected_portcalls() {
    Portcall a;
    a.portcall_id = "PC00001";
    a.vessel_id = "563000001";
    a.arrival_time = 0;
    a.requested_berth = "B001";
    a.service_duration = 300;
    Portcall b;
    b.portcall_id = "PC00002";
    b.vessel_id = "563000002";
    b.arrival_time = 400;
    b.requested_berth = "B001";
    b.service_duration = 180;
    return {a, b};
}

inline Schedule fixture_expected_observed() { return {{{"PC00001", "B001", 200}, {"PC00002", "B001", 520}}}; }

}  // namespace fixtures
