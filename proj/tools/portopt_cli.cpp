// portopt: clean AIS data, generate synthetic instances, optimize berth
// schedules, sweep scenarios and time the two planning paradigms.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "portopt/data_pipeline.hpp"
#include "portopt/io.hpp"
#include "portopt/orchestrator.hpp"
#include "portopt/synthetic.hpp"

#ifndef PORTOPT_VERSION
#define PORTOPT_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace portopt;
using io::json;

namespace {

enum exit_code { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_invariant = 3 };

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw invariant_error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// Config file: a flat JSON object whose keys are flag names with '_' for '-'.
// Its entries are appended to the command line unless the flag is already
// there, so explicit flags win over the file and the file over defaults.
// ---------------------------------------------------------------------------

std::string config_token(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return io::fmt(v.get<double>());
    throw usage_error("config: value of '" + key + "' must be a scalar or a list of scalars");
}

std::vector<std::string> with_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    json cfg;
    try {
        cfg = json::parse(io::slurp(path));
    } catch (const json::exception& e) {
        throw usage_error("config '" + path + "': " + e.what());
    } catch (const data_error& e) {
        throw usage_error(std::string("config: ") + e.what());
    }
    if (!cfg.is_object()) throw usage_error("config '" + path + "': expected a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (flag == "--config") continue;
        bool given = false;
        for (const auto& a : args) given |= a == flag || a.rfind(flag + "=", 0) == 0;
        if (given) continue;
        std::string token;
        if (value.is_array()) {
            for (const auto& v : value) token += (token.empty() ? "" : ",") + config_token(v, key);
        } else {
            token = config_token(value, key);
        }
        args.push_back(flag);
        args.push_back(token);
    }
    return args;
}

// ---------------------------------------------------------------------------
// Outputs are rendered in memory first and only written once the command has
// succeeded, so a failing run leaves the output directory untouched.
// ---------------------------------------------------------------------------

struct Run {
    std::string command;
    json config = json::object();
    std::vector<std::uint64_t> seeds;
    json inputs = json::object();
    std::vector<std::pair<std::string, std::string>> outputs;  // file name, content
    json timings = json::object();

    std::string read_input(const std::string& label, const fs::path& p) {
        auto text = io::slurp(p);
        inputs[label] = {{"path", p.string()}, {"sha256", sha256_hex(text)}};
        return text;
    }

    void output(std::string name, std::string content) { outputs.emplace_back(std::move(name), std::move(content)); }

    void commit(const fs::path& dir, double wall_sec, const std::string& started) {
        json files = json::object();
        for (const auto& [name, content] : outputs) {
            io::write_atomic(dir / name, content);
            files[name] = sha256_hex(content);
        }
        timings["started_utc"] = started;
        timings["wall_sec"] = wall_sec;
        json m = {{"command", command},
                  {"version", PORTOPT_VERSION},
                  {"config", config},
                  {"seeds", seeds},
                  {"inputs", inputs},
                  {"outputs", files},
                  {"timings", timings}};
        io::write_atomic(dir / "manifest.json", m.dump(2) + "\n");
    }
};

struct Common {
    std::uint64_t seed = 1;
    std::string config;
    std::string out_dir = "out";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--config", c.config, "JSON file of flag values (flags given here take precedence)");
    sub->add_option("--out-dir", c.out_dir, "Directory for output files")->capture_default_str();
}

// Dataset files, either from one directory or given one by one.
struct DataArgs {
    std::string data_dir, berths, portcalls, baseline;

    void add(CLI::App* sub) {
        sub->add_option("--data-dir", data_dir, "Directory with berths.json, portcalls.csv and optional baseline.csv");
        sub->add_option("--berths", berths, "Berths JSON (overrides --data-dir)");
        sub->add_option("--portcalls", portcalls, "Portcalls CSV (overrides --data-dir)");
        sub->add_option("--baseline", baseline, "Observed schedule CSV; FCFS is used when absent");
    }

    Dataset load(Run& run) const {
        fs::path b = berths, p = portcalls, s = baseline;
        if (!data_dir.empty()) {
            if (b.empty()) b = fs::path(data_dir) / "berths.json";
            if (p.empty()) p = fs::path(data_dir) / "portcalls.csv";
            if (s.empty() && fs::exists(fs::path(data_dir) / "baseline.csv")) s = fs::path(data_dir) / "baseline.csv";
        }
        if (b.empty() || p.empty()) throw usage_error("need --data-dir or both --berths and --portcalls");
        std::istringstream bs(run.read_input("berths", b)), ps(run.read_input("portcalls", p));
        auto berth_list = io::read_berths(bs);
        auto calls = io::read_portcalls(ps);
        if (s.empty()) return Dataset(std::move(berth_list), std::move(calls));
        std::istringstream ss(run.read_input("baseline", s));
        return Dataset(std::move(berth_list), std::move(calls), io::read_schedule(ss));
    }
};

// Scenario knobs shared by optimize, sweep and bench.
struct ScenarioArgs {
    ScenarioConfig sc;
    std::string method = "batch";

    void add(CLI::App* sub, bool with_fr) {
        if (with_fr) {
            sub->add_option("--f", sc.f, "Fraction of fixed berth-time pairs")->capture_default_str();
            sub->add_option("--r", sc.r, "Fraction of flexible portcalls that may use buffer berths")->capture_default_str();
        }
        sub->add_option("--window-days", sc.window_days, "Rolling window length in days")->capture_default_str();
        sub->add_option("--w-wait", sc.weights.w_wait, "Objective weight of average wait")->capture_default_str();
        sub->add_option("--w-turn", sc.weights.w_turn, "Objective weight of average turnaround")->capture_default_str();
        sub->add_option("--max-evals", sc.afa.max_evals, "Evaluation budget of the firefly stage")->capture_default_str();
        sub->add_option("--pool-size", sc.epso.max_iter, "Swarm iterations, one pool entry each")->capture_default_str();
        sub->add_option("--swarm-size", sc.epso.swarm_size, "Particles (0: one per distinct vessel)")->capture_default_str();
        sub->add_option("--population", sc.afa.population, "Fireflies (0: one per distinct vessel)")->capture_default_str();
        sub->add_option("--stall-limit", sc.afa.stall_limit, "Firefly iterations without improvement before stopping")
            ->capture_default_str();
    }

    json echo() const {
        return {{"method", method},
                {"f", sc.f},
                {"r", sc.r},
                {"window_days", sc.window_days},
                {"w_wait", sc.weights.w_wait},
                {"w_turn", sc.weights.w_turn},
                {"epso",
                 {{"max_iter", sc.epso.max_iter},
                  {"swarm_size", sc.epso.swarm_size},
                  {"inertia", sc.epso.inertia},
                  {"c_local", sc.epso.c_local},
                  {"c_global", sc.epso.c_global},
                  {"slot_minutes", sc.epso.slot_minutes},
                  {"max_slots", sc.epso.max_slots},
                  {"init_slot_span", sc.epso.init_slot_span},
                  {"seed_earliest_start", sc.epso.seed_earliest_start}}},
                {"afa",
                 {{"alpha", sc.afa.alpha},
                  {"beta", sc.afa.beta},
                  {"gamma", sc.afa.gamma},
                  {"s", sc.afa.s},
                  {"delta_b", sc.afa.delta_b},
                  {"population", sc.afa.population},
                  {"max_evals", sc.afa.max_evals},
                  {"stall_limit", sc.afa.stall_limit}}}};
    }
};

std::vector<Paradigm> paradigms_of(const std::string& method) {
    if (method == "both") return {Paradigm::batch, Paradigm::rolling};
    return {parse_paradigm(method)};
}

double hours(double minutes_value) { return minutes_value / 60.0; }

// ---------------------------------------------------------------------------
// clean
// ---------------------------------------------------------------------------

struct CleanArgs {
    Common common;
    std::string ais, zones, berths;
    PipelineParams prm;
};

void cmd_clean(const CleanArgs& a, Run& run) {
    // Zones first: a bad zone file must stop the run before anything is read further.
    std::istringstream zs(run.read_input("zones", a.zones));
    auto zones = io::read_zones(zs);
    std::vector<Berth> berths;
    if (!a.berths.empty()) {
        std::istringstream bs(run.read_input("berths", a.berths));
        berths = io::read_berths(bs);
    }
    const auto ais_text = run.read_input("ais", a.ais);
    ParsedAis parsed;
    if (ais_text.find_first_not_of(" \t\r\n") != std::string::npos) {
        std::istringstream in(ais_text);
        parsed = parse_ais(in);
    }
    auto res = run_pipeline(parsed, zones, a.prm);
    if (a.berths.empty()) berths = berths_from_zones(prepare_zones(zones));

    run.config = {{"ais", a.ais},
                  {"zones", a.zones},
                  {"berths", a.berths},
                  {"max_speed_knots", a.prm.max_speed_knots},
                  {"max_gap_min", a.prm.gaps.max_gap_min},
                  {"cadence_min", a.prm.gaps.cadence_min},
                  {"min_dwell_min", a.prm.min_dwell_min},
                  {"linkage_min", a.prm.linkage_min}};

    json report = io::to_json(res.report);
    json rejects = json::array();
    for (const auto& r : res.rejects) rejects.push_back({{"line", r.line}, {"reason", r.reason}});
    json gaps = json::array();
    for (const auto& g : res.open_gaps) {
        gaps.push_back({{"vessel_id", g.vessel_id}, {"from", g.from}, {"to", g.to}, {"reason", g.reason}});
    }
    report["rejected_rows"] = rejects;
    report["open_gap_list"] = gaps;

    run.output("portcalls.csv", io::render([&](std::ostream& o) { io::write_portcalls(o, res.derived.portcalls); }));
    run.output("baseline.csv", io::render([&](std::ostream& o) { io::write_schedule(o, res.derived.observed); }));
    run.output("berths.json", io::render([&](std::ostream& o) { io::write_berths(o, berths); }));
    run.output("cleaning_report.json", report.dump(2) + "\n");

    std::printf("rows %zu, rejected %zu, drift flags %zu, gaps filled %zu, open %zu, stays %zu, portcalls %zu\n",
                parsed.rows, res.report.rows_rejected, res.report.drift_flags, res.report.gaps_filled,
                res.report.gaps_open, res.report.stays, res.report.portcalls);
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    Common common;
    SyntheticParams prm;
};

void cmd_synth(const SynthArgs& a, Run& run) {
    auto syn = generate_synthetic(a.prm, a.common.seed);
    const auto& d = syn.dataset;
    run.seeds = {a.common.seed};
    run.config = {{"n_vessels", a.prm.n_vessels},
                  {"portcalls_per_vessel", a.prm.portcalls_per_vessel},
                  {"n_berths", a.prm.n_berths},
                  {"n_buffer_berths", a.prm.n_buffer_berths},
                  {"n_anchorages", a.prm.n_anchorages},
                  {"n_compat_groups", a.prm.n_compat_groups},
                  {"horizon_days", a.prm.horizon_days},
                  {"mean_interarrival_min", a.prm.mean_interarrival_min},
                  {"service_mu", a.prm.service_mu},
                  {"service_sigma", a.prm.service_sigma},
                  {"zipf_exponent", a.prm.zipf_exponent},
                  {"epoch_start", a.prm.epoch_start}};

    json anchorages = json::array();
    for (const auto& an : syn.anchorages) anchorages.push_back({{"zone_id", an.zone_id}, {"lat", an.lat}, {"lon", an.lon}});

    run.output("portcalls.csv", io::render([&](std::ostream& o) { io::write_portcalls(o, d.portcalls()); }));
    run.output("berths.json", io::render([&](std::ostream& o) { io::write_berths(o, d.berths()); }));
    run.output("baseline.csv", io::render([&](std::ostream& o) { io::write_schedule(o, d.baseline()); }));
    run.output("anchorages.json", anchorages.dump(2) + "\n");

    const auto k = compute_kpis(d, d.baseline_plan());
    std::printf("%zu portcalls on %zu berths; baseline avg wait %.1f h, avg turnaround %.1f h\n", d.size(),
                d.berths().size(), hours(k.avg_wait), hours(k.avg_turnaround));
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeArgs {
    Common common;
    DataArgs data;
    ScenarioArgs scenario;
};

void cmd_optimize(OptimizeArgs& a, Run& run) {
    auto d = a.data.load(run);
    auto& sc = a.scenario.sc;
    sc.paradigm = parse_paradigm(a.scenario.method);
    sc.seed = a.common.seed;
    run.seeds = {sc.seed};
    run.config = a.scenario.echo();

    auto res = run_scenario(d, sc);
    const auto base = compute_kpis(d, d.baseline_plan());
    run.timings["optimize_sec"] = res.kpis.runtime_sec;

    run.output("schedule.csv", io::render([&](std::ostream& o) { io::write_schedule(o, res.schedule); }));
    auto kpis = io::to_json(res.kpis, base);
    kpis["objective"] = res.objective;
    kpis["windows"] = res.windows;
    run.output("kpis.json", kpis.dump(2) + "\n");

    std::printf("%s, f=%g r=%g, %zu portcalls, %zu window(s)\n", a.scenario.method.c_str(), sc.f, sc.r, d.size(),
                res.windows);
    std::printf("  avg wait        %8.2f h -> %8.2f h  (%.1f%% reduction)\n", hours(base.avg_wait),
                hours(res.kpis.avg_wait), res.kpis.wait_reduction_pct);
    std::printf("  avg turnaround  %8.2f h -> %8.2f h  (%.1f%% reduction)\n", hours(base.avg_turnaround),
                hours(res.kpis.avg_turnaround), res.kpis.turnaround_reduction_pct);
    std::printf("  objective %.6f, runtime %.3f s\n", res.objective, res.kpis.runtime_sec);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
    Common common;
    DataArgs data;
    ScenarioArgs scenario;
    std::vector<double> f_values{0.0, 0.5, 0.9};
    std::vector<double> r_values{0.0, 0.5, 0.9};
    int n_seeds = 10;
};

void cmd_sweep(SweepArgs& a, Run& run) {
    if (a.n_seeds < 1) throw parameter_error("sweep: --seeds must be >= 1");
    auto d = a.data.load(run);
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < a.n_seeds; ++k) seeds.push_back(a.common.seed + static_cast<std::uint64_t>(k));
    run.seeds = seeds;
    run.config = a.scenario.echo();
    run.config.erase("f");
    run.config.erase("r");
    run.config["f_values"] = a.f_values;
    run.config["r_values"] = a.r_values;

    std::vector<io::PlotRow> plot;
    for (auto p : paradigms_of(a.scenario.method)) {
        const auto t0 = std::chrono::steady_clock::now();
        auto sw = sweep_scenarios(d, a.f_values, a.r_values, p, seeds, a.scenario.sc);
        run.timings[std::string(to_string(p)) + "_sec"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto kpi : {io::SweepKpi::wait_reduction, io::SweepKpi::turnaround_reduction, io::SweepKpi::objective}) {
            auto m = io::matrix_of(sw, kpi);
            run.output(std::string(io::to_string(kpi)) + "_" + std::string(to_string(p)) + ".csv",
                       io::render([&](std::ostream& o) { io::write_matrix(o, m); }));
        }
        auto rows = io::plot_rows(sw);
        plot.insert(plot.end(), rows.begin(), rows.end());

        std::printf("%s median wait reduction (%%), rows f, columns r\n", std::string(to_string(p)).c_str());
        std::printf("  f\\r ");
        for (double r : a.r_values) std::printf("%8g", r);
        std::printf("\n");
        for (std::size_t i = 0; i < a.f_values.size(); ++i) {
            std::printf("  %-4g", a.f_values[i]);
            for (std::size_t j = 0; j < a.r_values.size(); ++j) std::printf("%8.1f", sw.at(i, j).median_wait_reduction);
            std::printf("\n");
        }
    }
    run.output("plot_data.csv", io::render([&](std::ostream& o) { io::write_plot_rows(o, plot); }));
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    Common common;
    ScenarioArgs scenario;
    std::vector<int> sizes{50, 100, 200};
    int repeats = 3;
};

void cmd_bench(BenchArgs& a, Run& run) {
    auto& sc = a.scenario.sc;
    sc.seed = a.common.seed;
    run.seeds = {sc.seed};
    run.config = a.scenario.echo();
    run.config.erase("method");
    run.config["sizes"] = a.sizes;
    run.config["repeats"] = a.repeats;

    std::vector<Dataset> datasets;
    for (int n : a.sizes) datasets.push_back(generate_synthetic(scaled_standard(n), a.common.seed).dataset);
    auto t = benchmark_runtime(datasets, sc, a.repeats);

    json summary = {{"batch_loglog_slope", t.batch_loglog_slope}, {"rolling_loglog_slope", t.rolling_loglog_slope}};
    json ratios = json::array();
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        ratios.push_back({{"size", datasets[i].size()}, {"rolling_over_batch", t.rolling_over_batch[i].second}});
    }
    summary["ratios"] = ratios;
    run.output("runtime.csv", io::render([&](std::ostream& o) { io::write_runtime(o, t); }));
    run.output("runtime_summary.json", summary.dump(2) + "\n");

    std::printf("size  paradigm  seconds\n");
    for (const auto& row : t.rows) {
        std::printf("%4zu  %-8s  %.4f\n", row.size, std::string(to_string(row.paradigm)).c_str(), row.seconds);
    }
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        std::printf("rolling/batch at %zu: %.3f\n", datasets[i].size(), t.rolling_over_batch[i].second);
    }
    std::printf("log-log slope: batch %.2f, rolling %.2f\n", t.batch_loglog_slope, t.rolling_loglog_slope);
}

void print_violations(const infeasible_schedule& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    for (const auto& v : e.violations()) {
        std::fprintf(stderr, "  %s %s %s\n", std::string(to_string(v.kind)).c_str(), v.portcall_id.c_str(),
                     v.detail.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Berth schedule optimization for port call data", "portopt"};
    app.set_version_flag("--version", PORTOPT_VERSION);
    app.require_subcommand(1);

    CleanArgs clean;
    auto* c = app.add_subcommand("clean", "Clean AIS fixes and derive portcalls");
    add_common(c, clean.common);
    c->add_option("--ais", clean.ais, "AIS CSV")->required();
    c->add_option("--zones", clean.zones, "Zones JSON")->required();
    c->add_option("--berths", clean.berths, "Berths JSON to pass through (default: one berth per berth zone)");
    c->add_option("--max-speed-knots", clean.prm.max_speed_knots, "Drift speed threshold")->capture_default_str();
    c->add_option("--max-gap-min", clean.prm.gaps.max_gap_min, "Longest gap that is filled")->capture_default_str();
    c->add_option("--cadence-min", clean.prm.gaps.cadence_min, "Spacing of inserted fixes")->capture_default_str();
    c->add_option("--min-dwell-min", clean.prm.min_dwell_min, "Shortest stay kept")->capture_default_str();
    c->add_option("--linkage-min", clean.prm.linkage_min, "Longest anchorage-to-berth link")->capture_default_str();

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic congested instance");
    add_common(s, synth.common);
    auto& sp = synth.prm;
    s->add_option("--n-vessels", sp.n_vessels, "Distinct vessels")->capture_default_str();
    s->add_option("--portcalls-per-vessel", sp.portcalls_per_vessel, "Mean calls per vessel")->capture_default_str();
    s->add_option("--n-berths", sp.n_berths, "Berths including buffers")->capture_default_str();
    s->add_option("--n-buffer-berths", sp.n_buffer_berths, "Buffer berths")->capture_default_str();
    s->add_option("--n-anchorages", sp.n_anchorages, "Anchorage areas")->capture_default_str();
    s->add_option("--n-compat-groups", sp.n_compat_groups, "Compatibility groups")->capture_default_str();
    s->add_option("--horizon-days", sp.horizon_days, "Arrival horizon; shorter means more congestion")->capture_default_str();
    s->add_option("--mean-interarrival-min", sp.mean_interarrival_min, "Fixed mean interarrival (0: from horizon)")
        ->capture_default_str();
    s->add_option("--service-mu", sp.service_mu, "Log-mean of service minutes")->capture_default_str();
    s->add_option("--service-sigma", sp.service_sigma, "Log-sd of service minutes")->capture_default_str();
    s->add_option("--zipf-exponent", sp.zipf_exponent, "Berth popularity skew")->capture_default_str();

    OptimizeArgs opt;
    auto* o = app.add_subcommand("optimize", "Optimize a berth schedule for one scenario");
    add_common(o, opt.common);
    opt.data.add(o);
    opt.scenario.add(o, true);
    o->add_option("--method", opt.scenario.method, "batch or rolling")
        ->check(CLI::IsMember({"batch", "rolling"}))
        ->capture_default_str();

    SweepArgs sweep;
    auto* w = app.add_subcommand("sweep", "Run an f x r scenario grid over several seeds");
    add_common(w, sweep.common);
    sweep.data.add(w);
    sweep.scenario.method = "both";
    sweep.scenario.add(w, false);
    w->add_option("--method", sweep.scenario.method, "batch, rolling or both")
        ->check(CLI::IsMember({"batch", "rolling", "both"}))
        ->capture_default_str();
    w->add_option("--f-values", sweep.f_values, "Fixed fractions (rows)")->delimiter(',')->capture_default_str();
    w->add_option("--r-values", sweep.r_values, "Buffer-eligible fractions (columns)")->delimiter(',')->capture_default_str();
    w->add_option("--seeds", sweep.n_seeds, "Seeds per cell, counting up from --seed")->capture_default_str();

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Time batch against rolling on synthetic instances of several sizes");
    add_common(b, bench.common);
    bench.scenario.sc.r = 0.9;
    bench.scenario.add(b, true);
    b->add_option("--sizes", bench.sizes, "Portcall counts")->delimiter(',')->capture_default_str();
    b->add_option("--repeats", bench.repeats, "Timings per cell; the median is kept")->capture_default_str();

    std::vector<std::string> args(argv + 1, argv + argc);
    std::string command = "portopt";
    for (const auto& a : args) command += " " + a;

    try {
        args = with_config(std::move(args));
        std::reverse(args.begin(), args.end());  // CLI11 takes the vector back to front
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }

    const auto started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Run run;
        run.command = command;
        std::string out_dir;
        if (*c) {
            cmd_clean(clean, run);
            out_dir = clean.common.out_dir;
        } else if (*s) {
            cmd_synth(synth, run);
            out_dir = synth.common.out_dir;
        } else if (*o) {
            cmd_optimize(opt, run);
            out_dir = opt.common.out_dir;
        } else if (*w) {
            cmd_sweep(sweep, run);
            out_dir = sweep.common.out_dir;
        } else {
            cmd_bench(bench, run);
            out_dir = bench.common.out_dir;
        }
        run.commit(out_dir, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), started);
        return exit_ok;
    } catch (const infeasible_schedule& e) {
        print_violations(e);
        return exit_invariant;
    } catch (const invariant_error& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_invariant;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    } catch (const data_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return exit_data;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "file error: %s\n", e.what());
        return exit_data;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return exit_invariant;
    }
}
