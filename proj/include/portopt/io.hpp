#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "portopt/data_pipeline.hpp"
#include "portopt/error.hpp"
#include "portopt/orchestrator.hpp"
#include "portopt/port_model.hpp"

namespace portopt::io {

using json = nlohmann::ordered_json;

// Shortest text that parses back to the same double.
inline std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw invariant_error("cannot format number");
    return std::string(buf, p);
}

inline std::string fmt(minutes v) { return std::to_string(v); }

namespace detail {

using portopt::detail::chomp;
using portopt::detail::parse_number;
using portopt::detail::split_csv;

inline void expect_header(std::istream& in, std::string_view header, std::string_view what) {
    std::string line;
    if (!std::getline(in, line) || chomp(line) != header) {
        throw data_error(std::string(what) + ": expected header '" + std::string(header) + "'");
    }
}

// Non-empty data rows of a CSV whose header was already consumed; each row must
// have exactly `cols` fields.
template <class F>
void for_each_row(std::istream& in, std::size_t cols, std::string_view what, F&& fn) {
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = chomp(line);
        if (text.empty()) continue;
        const auto f = split_csv(text);
        if (f.size() != cols) {
            throw data_error(std::string(what) + " line " + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " fields");
        }
        fn(f, lineno);
    }
}

template <class T>
T number(std::string_view s, std::string_view what, std::size_t line) {
    auto v = parse_number<T>(s);
    if (!v) throw data_error(std::string(what) + " line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
    return *v;
}

inline void check_field(std::string_view s, std::string_view what) {
    if (s.find_first_of(",\r\n") != std::string_view::npos) {
        throw data_error(std::string(what) + ": identifier '" + std::string(s) + "' contains a separator");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Portcalls CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view portcalls_header = "portcall_id,vessel_id,arrival_utc_min,requested_berth,service_min";

inline std::vector<Portcall> read_portcalls(std::istream& in) {
    detail::expect_header(in, portcalls_header, "portcalls CSV");
    std::vector<Portcall> out;
    detail::for_each_row(in, 5, "portcalls CSV", [&](const auto& f, std::size_t line) {
        Portcall pc;
        pc.portcall_id = std::string(f[0]);
        pc.vessel_id = std::string(f[1]);
        pc.arrival_time = detail::number<minutes>(f[2], "portcalls CSV", line);
        pc.requested_berth = std::string(f[3]);
        pc.service_duration = detail::number<minutes>(f[4], "portcalls CSV", line);
        out.push_back(std::move(pc));
    });
    return out;
}

inline void write_portcalls(std::ostream& out, std::span<const Portcall> pcs) {
    out << portcalls_header << '\n';
    for (const auto& pc : pcs) {
        detail::check_field(pc.portcall_id, "portcalls CSV");
        detail::check_field(pc.vessel_id, "portcalls CSV");
        detail::check_field(pc.requested_berth, "portcalls CSV");
        out << pc.portcall_id << ',' << pc.vessel_id << ',' << pc.arrival_time << ',' << pc.requested_berth << ','
            << pc.service_duration << '\n';
    }
}

// ---------------------------------------------------------------------------
// Schedule CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view schedule_header = "portcall_id,berth_id,berth_start_utc_min";

inline Schedule read_schedule(std::istream& in) {
    detail::expect_header(in, schedule_header, "schedule CSV");
    Schedule s;
    detail::for_each_row(in, 3, "schedule CSV", [&](const auto& f, std::size_t line) {
        s.assignments.push_back(
            {std::string(f[0]), std::string(f[1]), detail::number<minutes>(f[2], "schedule CSV", line)});
    });
    return s;
}

inline void write_schedule(std::ostream& out, const Schedule& s) {
    out << schedule_header << '\n';
    for (const auto& a : s.assignments) {
        detail::check_field(a.portcall_id, "schedule CSV");
        detail::check_field(a.berth_id, "schedule CSV");
        out << a.portcall_id << ',' << a.berth_id << ',' << a.berth_start << '\n';
    }
}

// ---------------------------------------------------------------------------
// Berths / zones JSON
// ---------------------------------------------------------------------------

inline json parse_json(std::istream& in, std::string_view what) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw data_error(std::string(what) + ": " + e.what());
    }
}

inline std::vector<Berth> berths_from_json(const json& j) {
    if (!j.is_array()) throw data_error("berths JSON: expected an array");
    std::vector<Berth> out;
    try {
        for (const auto& b : j) {
            Berth berth;
            berth.berth_id = b.at("berth_id").get<std::string>();
            berth.terminal_id = b.at("terminal_id").get<std::string>();
            berth.compat_group = b.at("compat_group").get<std::string>();
            berth.is_buffer = b.at("is_buffer").get<bool>();
            berth.lat = b.at("lat").get<double>();
            berth.lon = b.at("lon").get<double>();
            out.push_back(std::move(berth));
        }
    } catch (const json::exception& e) {
        throw data_error(std::string("berths JSON: ") + e.what());
    }
    return out;
}

inline std::vector<Berth> read_berths(std::istream& in) { return berths_from_json(parse_json(in, "berths JSON")); }

inline json to_json(std::span<const Berth> berths) {
    json arr = json::array();
    for (const auto& b : berths) {
        arr.push_back({{"berth_id", b.berth_id},
                       {"terminal_id", b.terminal_id},
                       {"compat_group", b.compat_group},
                       {"is_buffer", b.is_buffer},
                       {"lat", b.lat},
                       {"lon", b.lon}});
    }
    return arr;
}

inline void write_berths(std::ostream& out, std::span<const Berth> berths) { out << to_json(berths).dump(2) << '\n'; }

inline std::vector<Zone> zones_from_json(const json& j) {
    if (!j.is_array()) throw data_error("zones JSON: expected an array");
    std::vector<Zone> out;
    try {
        for (const auto& z : j) {
            Zone zone;
            zone.zone_id = z.at("zone_id").get<std::string>();
            zone.kind = parse_zone_kind(z.at("kind").get<std::string>());
            for (const auto& v : z.at("polygon")) {
                if (!v.is_array() || v.size() != 2) throw data_error("zones JSON: vertex must be [lat, lon]");
                zone.polygon.push_back({v[0].get<double>(), v[1].get<double>()});
            }
            validate_zone(zone);
            out.push_back(std::move(zone));
        }
    } catch (const json::exception& e) {
        throw data_error(std::string("zones JSON: ") + e.what());
    }
    return out;
}

inline std::vector<Zone> read_zones(std::istream& in) { return zones_from_json(parse_json(in, "zones JSON")); }

inline json to_json(const std::vector<Zone>& zones) {
    json arr = json::array();
    for (const auto& z : zones) {
        json poly = json::array();
        for (const auto& v : z.polygon) poly.push_back({v.lat, v.lon});
        arr.push_back({{"zone_id", z.zone_id}, {"kind", std::string(to_string(z.kind))}, {"polygon", poly}});
    }
    return arr;
}

// ---------------------------------------------------------------------------
// AIS CSV (reader lives with the pipeline)
// ---------------------------------------------------------------------------

inline void write_ais(std::ostream& out, const std::vector<AisRecord>& recs) {
    out << ais_header << '\n';
    for (const auto& r : recs) out << r.vessel_id << ',' << r.timestamp << ',' << fmt(r.lat) << ',' << fmt(r.lon) << '\n';
}

inline json to_json(const CleaningReport& r) {
    return {{"rows_rejected", r.rows_rejected},     {"drift_flags", r.drift_flags},
            {"gaps_filled", r.gaps_filled},         {"gaps_open", r.gaps_open},
            {"zone_overlap_warnings", r.zone_overlap_warnings},
            {"stays", r.stays},                     {"portcalls", r.portcalls}};
}

// ---------------------------------------------------------------------------
// KPI report. Runtime is left out so reruns are byte-identical; it goes to
// the manifest instead.
// ---------------------------------------------------------------------------

inline json to_json(const KpiReport& k, const KpiReport& baseline) {
    return {{"baseline", {{"avg_wait_min", baseline.avg_wait}, {"avg_turnaround_min", baseline.avg_turnaround}}},
            {"optimized", {{"avg_wait_min", k.avg_wait}, {"avg_turnaround_min", k.avg_turnaround}}},
            {"wait_reduction_pct", k.wait_reduction_pct},
            {"turnaround_reduction_pct", k.turnaround_reduction_pct}};
}

// ---------------------------------------------------------------------------
// Sweep matrices: header `f/r,<r...>`, one row per f.
// ---------------------------------------------------------------------------

struct Matrix {
    std::vector<double> f_values;
    std::vector<double> r_values;
    std::vector<std::vector<double>> values;  // [f][r]

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

enum class SweepKpi { wait_reduction, turnaround_reduction, objective };

inline std::string_view to_string(SweepKpi k) {
    switch (k) {
        case SweepKpi::wait_reduction: return "wait_reduction_pct";
        case SweepKpi::turnaround_reduction: return "turnaround_reduction_pct";
        case SweepKpi::objective: return "objective";
    }
    return "?";
}

inline Matrix matrix_of(const SweepResult& s, SweepKpi kpi) {
    Matrix m{s.f_values, s.r_values, {}};
    for (const auto& row : s.cells) {
        auto& out = m.values.emplace_back();
        for (const auto& c : row) {
            out.push_back(kpi == SweepKpi::wait_reduction         ? c.median_wait_reduction
                          : kpi == SweepKpi::turnaround_reduction ? c.median_turnaround_reduction
                                                                  : c.median_objective);
        }
    }
    return m;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
    out << "f/r";
    for (double r : m.r_values) out << ',' << fmt(r);
    out << '\n';
    for (std::size_t i = 0; i < m.f_values.size(); ++i) {
        out << fmt(m.f_values[i]);
        for (double v : m.values[i]) out << ',' << fmt(v);
        out << '\n';
    }
}

inline Matrix read_matrix(std::istream& in) {
    Matrix m;
    std::string line;
    if (!std::getline(in, line)) throw data_error("matrix CSV: empty");
    auto head = detail::split_csv(detail::chomp(line));
    if (head.empty() || head[0] != "f/r") throw data_error("matrix CSV: header must start with 'f/r'");
    for (std::size_t k = 1; k < head.size(); ++k) m.r_values.push_back(detail::number<double>(head[k], "matrix CSV", 1));
    detail::for_each_row(in, head.size(), "matrix CSV", [&](const auto& f, std::size_t line) {
        m.f_values.push_back(detail::number<double>(f[0], "matrix CSV", line));
        auto& row = m.values.emplace_back();
        for (std::size_t k = 1; k < f.size(); ++k) row.push_back(detail::number<double>(f[k], "matrix CSV", line));
    });
    return m;
}

// Long form: one row per (cell, seed, kpi).
inline constexpr std::string_view plot_header = "f,r,paradigm,kpi,value,seed";

struct PlotRow {
    double f = 0, r = 0;
    std::string paradigm, kpi;
    double value = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const PlotRow&, const PlotRow&) = default;
};

inline std::vector<PlotRow> plot_rows(const SweepResult& s) {
    std::vector<PlotRow> out;
    const std::string par(to_string(s.paradigm));
    for (const auto& row : s.cells) {
        for (const auto& c : row) {
            for (const auto& run : c.runs) {
                out.push_back({c.f, c.r, par, "wait_reduction_pct", run.kpis.wait_reduction_pct, run.seed});
                out.push_back({c.f, c.r, par, "turnaround_reduction_pct", run.kpis.turnaround_reduction_pct, run.seed});
                out.push_back({c.f, c.r, par, "objective", run.objective, run.seed});
            }
        }
    }
    return out;
}

inline void write_plot_rows(std::ostream& out, const std::vector<PlotRow>& rows) {
    out << plot_header << '\n';
    for (const auto& p : rows) {
        out << fmt(p.f) << ',' << fmt(p.r) << ',' << p.paradigm << ',' << p.kpi << ',' << fmt(p.value) << ','
            << p.seed << '\n';
    }
}

inline std::vector<PlotRow> read_plot_rows(std::istream& in) {
    detail::expect_header(in, plot_header, "plot CSV");
    std::vector<PlotRow> out;
    detail::for_each_row(in, 6, "plot CSV", [&](const auto& f, std::size_t line) {
        out.push_back({detail::number<double>(f[0], "plot CSV", line), detail::number<double>(f[1], "plot CSV", line),
                       std::string(f[2]), std::string(f[3]), detail::number<double>(f[4], "plot CSV", line),
                       detail::number<std::uint64_t>(f[5], "plot CSV", line)});
    });
    return out;
}

inline constexpr std::string_view runtime_header = "size,paradigm,seconds";

inline void write_runtime(std::ostream& out, const RuntimeTable& t) {
    out << runtime_header << '\n';
    for (const auto& row : t.rows) out << row.size << ',' << to_string(row.paradigm) << ',' << fmt(row.seconds) << '\n';
}

inline std::vector<RuntimeRow> read_runtime(std::istream& in) {
    detail::expect_header(in, runtime_header, "runtime CSV");
    std::vector<RuntimeRow> out;
    detail::for_each_row(in, 3, "runtime CSV", [&](const auto& f, std::size_t line) {
        out.push_back({detail::number<std::size_t>(f[0], "runtime CSV", line), parse_paradigm(f[1]),
                       detail::number<double>(f[2], "runtime CSV", line)});
    });
    return out;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw data_error("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write to a sibling temp file, then rename over the target.
inline void write_atomic(const std::filesystem::path& p, std::string_view content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw data_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, p);
}

template <class F>
std::string render(F&& fn) {
    std::ostringstream ss;
    fn(ss);
    return ss.str();
}

// Berths JSON + portcalls CSV, optionally with an observed schedule CSV.
inline Dataset load_dataset(const std::filesystem::path& berths, const std::filesystem::path& portcalls,
                            const std::filesystem::path& baseline = {}) {
    std::istringstream b(slurp(berths)), p(slurp(portcalls));
    auto bs = read_berths(b);
    auto ps = read_portcalls(p);
    if (baseline.empty()) return Dataset(std::move(bs), std::move(ps));
    std::istringstream s(slurp(baseline));
    return Dataset(std::move(bs), std::move(ps), read_schedule(s));
}

}  // namespace portopt::io
