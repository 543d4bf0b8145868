#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "portopt/error.hpp"
#include "portopt/geo.hpp"
#include "portopt/types.hpp"

namespace portopt {

// ---------------------------------------------------------------------------
// AIS tracks and zones
// ---------------------------------------------------------------------------

struct AisRecord {
    std::string vessel_id;
    minutes timestamp = 0;
    double lat = 0.0;
    double lon = 0.0;

    LatLon point() const { return {lat, lon}; }
    friend bool operator==(const AisRecord&, const AisRecord&) = default;
};

using Track = std::vector<AisRecord>;

enum class ZoneKind { anchorage, berth };

inline std::string_view to_string(ZoneKind k) { return k == ZoneKind::anchorage ? "anchorage" : "berth"; }

inline ZoneKind parse_zone_kind(std::string_view s) {
    if (s == "anchorage") return ZoneKind::anchorage;
    if (s == "berth") return ZoneKind::berth;
    throw data_error("unknown zone kind '" + std::string(s) + "'");
}

struct Zone {
    std::string zone_id;
    ZoneKind kind = ZoneKind::anchorage;
    std::vector<LatLon> polygon;  // closing vertex optional
};

struct StayEvent {
    std::string vessel_id;
    std::string zone_id;
    ZoneKind kind = ZoneKind::anchorage;
    minutes start = 0;
    minutes end = 0;

    minutes duration() const { return end - start; }
    friend bool operator==(const StayEvent&, const StayEvent&) = default;
};

namespace detail {

inline double cross(LatLon o, LatLon a, LatLon b) {
    return (a.lat - o.lat) * (b.lon - o.lon) - (a.lon - o.lon) * (b.lat - o.lat);
}

inline bool segments_cross(LatLon a, LatLon b, LatLon c, LatLon d) {
    const double d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) ||
           (d3 == 0 && on_segment(c, a, b)) || (d4 == 0 && on_segment(d, a, b));
}

}  // namespace detail

// Drops a repeated closing vertex, then checks >= 3 vertices and that no two
// non-adjacent edges touch.
inline void validate_zone(Zone& z) {
    if (z.zone_id.empty()) throw data_error("zone with empty zone_id");
    if (z.polygon.size() >= 2 && z.polygon.front() == z.polygon.back()) z.polygon.pop_back();
    const std::size_t n = z.polygon.size();
    if (n < 3) throw data_error("zone '" + z.zone_id + "' needs at least 3 vertices");
    for (const auto& v : z.polygon) {
        if (!(v.lat >= -90 && v.lat <= 90 && v.lon >= -180 && v.lon <= 180)) {
            throw data_error("zone '" + z.zone_id + "' has an out-of-range vertex");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (detail::segments_cross(z.polygon[i], z.polygon[(i + 1) % n], z.polygon[j], z.polygon[(j + 1) % n])) {
                throw data_error("zone '" + z.zone_id + "' is self-intersecting");
            }
        }
    }
}

// Zones sorted by id; that order is the attribution order for overlaps.
inline std::vector<Zone> prepare_zones(std::vector<Zone> zones) {
    for (auto& z : zones) validate_zone(z);
    std::sort(zones.begin(), zones.end(), [](const Zone& a, const Zone& b) { return a.zone_id < b.zone_id; });
    for (std::size_t i = 1; i < zones.size(); ++i) {
        if (zones[i].zone_id == zones[i - 1].zone_id) throw data_error("duplicate zone_id '" + zones[i].zone_id + "'");
    }
    return zones;
}

struct ZoneHit {
    const Zone* zone = nullptr;
    bool ambiguous = false;  // inside more than one zone
};

// `zones` must be sorted by id.
inline ZoneHit locate(LatLon p, const std::vector<Zone>& zones) {
    ZoneHit hit;
    for (const auto& z : zones) {
        if (!point_in_polygon(p, z.polygon)) continue;
        if (hit.zone) {
            hit.ambiguous = true;
            break;
        }
        hit.zone = &z;
    }
    return hit;
}

// ---------------------------------------------------------------------------
// parse_ais
// ---------------------------------------------------------------------------

struct RowReject {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string reason;
};

struct ParsedAis {
    std::map<std::string, Track> tracks;  // by vessel_id, time-sorted
    std::vector<RowReject> rejects;
    std::size_t rows = 0;

    std::size_t record_count() const {
        std::size_t n = 0;
        for (const auto& [_, t] : tracks) n += t.size();
        return n;
    }
};

inline constexpr std::string_view ais_header = "vessel_id,timestamp_utc_min,lat,lon";

namespace detail {

inline std::string_view chomp(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end || s.empty()) return std::nullopt;
    return v;
}

}  // namespace detail

inline ParsedAis parse_ais(std::istream& in) {
    ParsedAis out;
    std::string line;
    if (!std::getline(in, line) || detail::chomp(line) != ais_header) {
        throw data_error("AIS CSV: expected header '" + std::string(ais_header) + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = detail::chomp(line);
        if (text.empty()) continue;
        ++out.rows;
        const auto cols = detail::split_csv(text);
        if (cols.size() != 4) {
            out.rejects.push_back({lineno, "expected 4 columns"});
            continue;
        }
        const auto ts = detail::parse_number<minutes>(cols[1]);
        const auto lat = detail::parse_number<double>(cols[2]);
        const auto lon = detail::parse_number<double>(cols[3]);
        if (cols[0].empty()) {
            out.rejects.push_back({lineno, "empty vessel_id"});
        } else if (!ts || !lat || !lon) {
            out.rejects.push_back({lineno, "unparsable number"});
        } else if (!(*lat >= -90.0 && *lat <= 90.0)) {
            out.rejects.push_back({lineno, "lat out of range"});
        } else if (!(*lon >= -180.0 && *lon <= 180.0)) {
            out.rejects.push_back({lineno, "lon out of range"});
        } else {
            out.tracks[std::string(cols[0])].push_back({std::string(cols[0]), *ts, *lat, *lon});
        }
    }
    for (auto& [_, t] : out.tracks) {
        std::stable_sort(t.begin(), t.end(),
                         [](const AisRecord& a, const AisRecord& b) { return a.timestamp < b.timestamp; });
    }
    return out;
}

// ---------------------------------------------------------------------------
// detect_drift
// ---------------------------------------------------------------------------

inline constexpr double default_max_speed_knots = 50.0;

// Speed is measured against the last accepted record, so a single spike does
// not poison the record after it.
inline std::vector<bool> detect_drift(const Track& track, double max_speed_knots = default_max_speed_knots) {
    std::vector<bool> flags(track.size(), false);
    if (track.empty()) return flags;
    std::size_t last = 0;
    for (std::size_t i = 1; i < track.size(); ++i) {
        const double nm = haversine_nm(track[last].point(), track[i].point());
        const double hours = static_cast<double>(track[i].timestamp - track[last].timestamp) / 60.0;
        bool drift;
        if (hours <= 0.0) {
            drift = nm > 0.0;
        } else {
            drift = nm / hours > max_speed_knots;
        }
        if (drift) {
            flags[i] = true;
        } else {
            last = i;
        }
    }
    return flags;
}

inline Track drop_flagged(const Track& track, const std::vector<bool>& flags) {
    Track out;
    for (std::size_t i = 0; i < track.size(); ++i) {
        if (!flags[i]) out.push_back(track[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// fill_gaps
// ---------------------------------------------------------------------------

struct OpenGap {
    std::string vessel_id;
    minutes from = 0;
    minutes to = 0;
    std::string reason;  // "too-long", "cross-zone", "outside-zones"
};

struct GapFill {
    Track track;
    std::size_t gaps_filled = 0;
    std::size_t points_inserted = 0;
    std::vector<OpenGap> open;
};

struct GapParams {
    minutes max_gap_min = 360;
    minutes cadence_min = 10;
};

// A gap longer than the cadence is filled at that cadence when it stays in one
// zone and is no longer than max_gap_min; anything else is left and reported.
inline GapFill fill_gaps(const Track& track, const std::vector<Zone>& zones, GapParams prm = {}) {
    if (prm.cadence_min < 1) throw parameter_error("fill_gaps: cadence must be >= 1 minute");
    GapFill out;
    if (track.empty()) return out;
    out.track.push_back(track.front());
    for (std::size_t i = 1; i < track.size(); ++i) {
        const auto& a = track[i - 1];
        const auto& b = track[i];
        const minutes dt = b.timestamp - a.timestamp;
        if (dt > prm.cadence_min) {
            const auto za = locate(a.point(), zones).zone;
            const auto zb = locate(b.point(), zones).zone;
            if (dt > prm.max_gap_min) {
                out.open.push_back({a.vessel_id, a.timestamp, b.timestamp, "too-long"});
            } else if (!za || !zb) {
                out.open.push_back({a.vessel_id, a.timestamp, b.timestamp, "outside-zones"});
            } else if (za != zb) {
                out.open.push_back({a.vessel_id, a.timestamp, b.timestamp, "cross-zone"});
            } else {
                ++out.gaps_filled;
                for (minutes t = a.timestamp + prm.cadence_min; t < b.timestamp; t += prm.cadence_min) {
                    const double u = static_cast<double>(t - a.timestamp) / static_cast<double>(dt);
                    out.track.push_back({a.vessel_id, t, a.lat + u * (b.lat - a.lat), a.lon + u * (b.lon - a.lon)});
                    ++out.points_inserted;
                }
            }
        }
        out.track.push_back(b);
    }
    return out;
}

// ---------------------------------------------------------------------------
// extract_stays
// ---------------------------------------------------------------------------

struct StayExtraction {
    std::vector<StayEvent> stays;
    std::size_t ambiguous_records = 0;  // inside overlapping zones
};

// Maximal runs of consecutive records in one zone lasting >= min_dwell_min.
inline StayExtraction extract_stays(const Track& track, const std::vector<Zone>& zones, minutes min_dwell_min = 30) {
    StayExtraction out;
    const Zone* run_zone = nullptr;
    minutes run_start = 0, run_end = 0;
    auto close = [&](const std::string& vessel) {
        if (run_zone && run_end - run_start >= min_dwell_min && run_end > run_start) {
            out.stays.push_back({vessel, run_zone->zone_id, run_zone->kind, run_start, run_end});
        }
        run_zone = nullptr;
    };
    for (const auto& rec : track) {
        const auto hit = locate(rec.point(), zones);
        if (hit.ambiguous) ++out.ambiguous_records;
        if (hit.zone != run_zone) {
            close(rec.vessel_id);
            if (hit.zone) {
                run_zone = hit.zone;
                run_start = run_end = rec.timestamp;
            }
        } else if (hit.zone) {
            run_end = rec.timestamp;
        }
    }
    if (!track.empty()) close(track.back().vessel_id);
    return out;
}

// ---------------------------------------------------------------------------
// derive_portcalls
// ---------------------------------------------------------------------------

struct DerivedPortcalls {
    std::vector<Portcall> portcalls;
    Schedule observed;  // as-observed berth starts, the ingested baseline
};

inline constexpr minutes default_linkage_min = 48 * 60;

// `stays` holds every vessel's stays, each vessel's in start order. A berth
// stay's arrival is the start of the directly preceding anchorage stay when
// that one ends within the linkage window before berthing.
inline DerivedPortcalls derive_portcalls(const std::vector<StayEvent>& stays, minutes linkage_min = default_linkage_min) {
    struct Raw {
        std::string vessel;
        std::string berth;
        minutes arrival, start, end;
    };
    std::vector<Raw> raw;
    const StayEvent* prev = nullptr;
    for (const auto& s : stays) {
        if (prev && prev->vessel_id != s.vessel_id) prev = nullptr;
        if (s.kind == ZoneKind::berth) {
            minutes arrival = s.start;
            if (prev && prev->kind == ZoneKind::anchorage && prev->end <= s.start &&
                s.start - prev->end <= linkage_min) {
                arrival = prev->start;
            }
            raw.push_back({s.vessel_id, s.zone_id, arrival, s.start, s.end});
        }
        prev = &s;
    }
    std::stable_sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.vessel < b.vessel;
    });

    DerivedPortcalls out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "PC%05zu", i + 1);
        Portcall pc;
        pc.portcall_id = id;
        pc.vessel_id = raw[i].vessel;
        pc.arrival_time = raw[i].arrival;
        pc.requested_berth = raw[i].berth;
        pc.service_duration = raw[i].end - raw[i].start;
        out.portcalls.push_back(pc);
        out.observed.assignments.push_back({pc.portcall_id, raw[i].berth, raw[i].start});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Whole pipeline
// ---------------------------------------------------------------------------

struct PipelineParams {
    double max_speed_knots = default_max_speed_knots;
    GapParams gaps{};
    minutes min_dwell_min = 30;
    minutes linkage_min = default_linkage_min;
};

struct CleaningReport {
    std::size_t rows_rejected = 0;
    std::size_t drift_flags = 0;
    std::size_t gaps_filled = 0;
    std::size_t gaps_open = 0;
    std::size_t zone_overlap_warnings = 0;
    std::size_t stays = 0;
    std::size_t portcalls = 0;

    friend bool operator==(const CleaningReport&, const CleaningReport&) = default;
};

struct PipelineResult {
    std::map<std::string, Track> cleaned;  // drift-free, gap-filled
    std::vector<StayEvent> stays;
    DerivedPortcalls derived;
    std::vector<RowReject> rejects;
    std::vector<OpenGap> open_gaps;
    CleaningReport report;
};

// Drift removal followed by gap filling, one vessel.
inline GapFill clean_track(const Track& track, const std::vector<Zone>& zones, const PipelineParams& prm,
                           std::size_t* drift_count = nullptr) {
    const auto flags = detect_drift(track, prm.max_speed_knots);
    if (drift_count) *drift_count += static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
    return fill_gaps(drop_flagged(track, flags), zones, prm.gaps);
}

inline PipelineResult run_pipeline(const ParsedAis& ais, std::vector<Zone> zones, const PipelineParams& prm = {}) {
    zones = prepare_zones(std::move(zones));
    PipelineResult out;
    out.rejects = ais.rejects;
    out.report.rows_rejected = ais.rejects.size();
    for (const auto& [vessel, track] : ais.tracks) {
        auto filled = clean_track(track, zones, prm, &out.report.drift_flags);
        out.report.gaps_filled += filled.gaps_filled;
        out.report.gaps_open += filled.open.size();
        out.open_gaps.insert(out.open_gaps.end(), filled.open.begin(), filled.open.end());
        auto ex = extract_stays(filled.track, zones, prm.min_dwell_min);
        out.report.zone_overlap_warnings += ex.ambiguous_records;
        out.stays.insert(out.stays.end(), ex.stays.begin(), ex.stays.end());
        out.cleaned.emplace(vessel, std::move(filled.track));
    }
    out.derived = derive_portcalls(out.stays, prm.linkage_min);
    out.report.stays = out.stays.size();
    out.report.portcalls = out.derived.portcalls.size();
    return out;
}

// One regular berth per berth zone, placed at the polygon's vertex centroid;
// used when no berth list is supplied alongside the zones.
inline std::vector<Berth> berths_from_zones(const std::vector<Zone>& zones, std::string_view group = "G01") {
    std::vector<Berth> out;
    for (const auto& z : zones) {
        if (z.kind != ZoneKind::berth) continue;
        Berth b;
        b.berth_id = z.zone_id;
        b.terminal_id = z.zone_id;
        b.compat_group = std::string(group);
        for (const auto& v : z.polygon) {
            b.lat += v.lat;
            b.lon += v.lon;
        }
        b.lat /= static_cast<double>(z.polygon.size());
        b.lon /= static_cast<double>(z.polygon.size());
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace portopt
