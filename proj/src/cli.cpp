#include "stsc/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stsc/detect.hpp"
#include "stsc/export.hpp"
#include "stsc/ingest.hpp"
#include "stsc/log.hpp"
#include "stsc/metrics.hpp"
#include "stsc/model.hpp"

namespace fs = std::filesystem;

namespace stsc {

namespace {

struct CommonOpts {
    std::string manifest;
    std::vector<std::string> chats;
    std::string changes;
    std::string out;
    std::string window_length;
    std::string origin;
    std::string format = "canonical";
    std::vector<std::string> patterns;
    bool with_run_metadata = false;
    std::string window_select;  // graph only
};

// Everything the pipeline produces, ready for the exporters.
struct Pipeline {
    ArchitectureModel model;
    DetectConfig config;
    std::vector<CommEvent> events;
    IngestReport report;
    std::vector<ChangeRecord> changes;
    std::vector<Window> windows;
    std::vector<CommGraph> graphs;
    CentralitySeries series;
    std::vector<Finding> findings;
    std::vector<InputDigest> digests;
    Instant now{};
};

struct CliError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{"cannot open " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw CliError{"error reading " + path};
    return ss.str();
}

std::string basename_of(const std::string& path) { return fs::path(path).filename().string(); }

// Does this finding belong to one of the requested pattern families?
// A filter matches on the exact pattern id or on its family prefix
// (conway, bcm, ownership).
bool pattern_matches(const std::string& pattern, const std::vector<std::string>& filters) {
    if (filters.empty()) return true;
    for (const auto& f : filters) {
        if (pattern == f) return true;
        if (pattern.size() > f.size() && pattern.compare(0, f.size(), f) == 0 &&
            pattern[f.size()] == '_')
            return true;
    }
    return false;
}

Pipeline build_pipeline(const CommonOpts& opts) {
    Pipeline p;

    std::string manifest_bytes = read_file(opts.manifest);
    p.digests.push_back({basename_of(opts.manifest), fnv1a64_hex(manifest_bytes)});
    LoadResult loaded = load_architecture(manifest_bytes);
    for (const auto& w : loaded.warnings) STSC_LOG_WARN("%s: %s", opts.manifest.c_str(), w.c_str());
    if (!loaded.parse_error.empty())
        throw CliError{opts.manifest + ": " + loaded.parse_error};
    if (!loaded.model) {
        std::string msg = opts.manifest + ": invalid manifest";
        for (const auto& v : loaded.violations) msg += "\n  " + v;
        throw CliError{msg};
    }
    p.model = std::move(*loaded.model);
    p.config = loaded.detect;

    for (const auto& chat_path : opts.chats) {
        std::string bytes = read_file(chat_path);
        p.digests.push_back({basename_of(chat_path), fnv1a64_hex(bytes)});
        std::pair<std::vector<CommEvent>, IngestReport> parsed;
        try {
            parsed = opts.format == "xmpp" ? parse_chat_xmpp_xml(bytes)
                                           : parse_chat_canonical(bytes);
        } catch (const std::exception& e) {
            throw CliError{chat_path + ": " + e.what()};
        }
        for (auto& w : parsed.second.warnings) w = basename_of(chat_path) + " " + w;
        p.report.merge(parsed.second);
        p.events.insert(p.events.end(), std::make_move_iterator(parsed.first.begin()),
                        std::make_move_iterator(parsed.first.end()));
    }
    std::stable_sort(p.events.begin(), p.events.end(),
                     [](const CommEvent& a, const CommEvent& b) {
                         return a.timestamp < b.timestamp;
                     });
    for (const auto& w : p.report.warnings) STSC_LOG_WARN("%s", w.c_str());

    if (!opts.changes.empty()) {
        std::string bytes = read_file(opts.changes);
        p.digests.push_back({basename_of(opts.changes), fnv1a64_hex(bytes)});
        auto [records, warnings] = load_changes(bytes);
        for (const auto& w : warnings)
            STSC_LOG_WARN("%s %s", basename_of(opts.changes).c_str(), w.c_str());
        p.changes = std::move(records);
    }

    register_chat_actors(p.model, p.events, p.report);

    // Window parameters: flag > manifest > default.
    Duration length = std::chrono::seconds{7 * 86400};
    if (loaded.window_length) length = *loaded.window_length;
    if (!opts.window_length.empty()) {
        auto d = parse_duration(opts.window_length);
        if (!d) throw CliError{"bad --window-length: " + opts.window_length};
        length = *d;
    }
    std::optional<Instant> origin = loaded.window_origin;
    if (!opts.origin.empty()) {
        auto t = parse_rfc3339(opts.origin);
        if (!t) throw CliError{"bad --origin: " + opts.origin};
        origin = *t;
    }
    if (!origin) origin = default_origin(p.events);

    if (origin) p.windows = build_windows(p.events, *origin, length);
    auto roster = p.model.analysis_roster();
    for (const auto& w : p.windows) p.graphs.push_back(build_comm_graph(p.events, w, roster));
    p.series = build_series(p.graphs, roster);

    p.now = Instant{std::chrono::seconds{0}};
    for (const auto& ev : p.events) p.now = std::max(p.now, ev.timestamp);
    for (const auto& c : p.changes) p.now = std::max(p.now, c.timestamp);

    p.findings = run_all(p.graphs, p.series, p.model, p.changes, p.now, p.config);
    if (!opts.patterns.empty()) {
        std::vector<Finding> kept;
        for (auto& f : p.findings)
            if (pattern_matches(f.pattern, opts.patterns)) kept.push_back(std::move(f));
        p.findings = std::move(kept);
    }
    return p;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{"cannot write " + path.string()};
    out << bytes;
    if (!out) throw CliError{"error writing " + path.string()};
}

int exit_code_for(const std::vector<Finding>& findings) {
    for (const auto& f : findings)
        if (f.severity == Severity::alert) return 2;
    return 0;
}

json run_metadata_json(bool enabled) {
    if (!enabled) return json();
    auto now = std::chrono::system_clock::now();
    auto secs = std::chrono::time_point_cast<std::chrono::seconds>(now);
    return json{{"generated_at", format_rfc3339(secs)}, {"tool", "stsc"}};
}

json ingest_report_json(const IngestReport& report) {
    return json{{"events_read", report.events_read},
                {"events_dropped_self", report.events_dropped_self},
                {"events_dropped_unparseable", report.events_dropped_unparseable},
                {"actors_auto_registered", report.actors_auto_registered},
                {"warnings", report.warnings}};
}

std::string overlay_filename(const Window& w) {
    return "overlay-" + format_compact(w.start) + ".dot";
}

int cmd_analyze(const CommonOpts& opts) {
    Pipeline p = build_pipeline(opts);
    fs::create_directories(opts.out);
    write_file(fs::path(opts.out) / "findings.json",
               export_findings_json(p.findings, p.digests,
                                    run_metadata_json(opts.with_run_metadata)));
    write_file(fs::path(opts.out) / "centrality.csv", export_timeseries_csv(p.series));
    write_file(fs::path(opts.out) / "ingest-report.json",
               ingest_report_json(p.report).dump(2) + "\n");
    for (const auto& g : p.graphs)
        write_file(fs::path(opts.out) / overlay_filename(g.window),
                   export_overlay_dot(g, p.model, classify_edges(g)));
    return exit_code_for(p.findings);
}

int cmd_graph(const CommonOpts& opts) {
    Pipeline p = build_pipeline(opts);
    fs::create_directories(opts.out);
    std::vector<const CommGraph*> selected;
    if (!opts.window_select.empty()) {
        std::optional<Instant> at = parse_iso_week(opts.window_select);
        if (!at) at = parse_rfc3339(opts.window_select);
        if (!at)
            throw CliError{"bad --window (want ISO week like 2006-W41 or a timestamp): " +
                           opts.window_select};
        for (const auto& g : p.graphs)
            if (g.window.contains(*at)) selected.push_back(&g);
        if (selected.empty()) throw CliError{"no window contains " + opts.window_select};
    } else {
        for (const auto& g : p.graphs) selected.push_back(&g);
    }
    for (const CommGraph* g : selected)
        write_file(fs::path(opts.out) / overlay_filename(g->window),
                   export_overlay_dot(*g, p.model, classify_edges(*g)));
    return 0;
}

int cmd_timeline(const CommonOpts& opts) {
    Pipeline p = build_pipeline(opts);
    fs::create_directories(opts.out);
    write_file(fs::path(opts.out) / "centrality.csv", export_timeseries_csv(p.series));
    return 0;
}

int cmd_check(const CommonOpts& opts) {
    Pipeline p = build_pipeline(opts);
    for (const auto& f : p.findings) {
        std::string window = f.window ? format_rfc3339(f.window->start) : "all";
        std::string actors, modules;
        for (const auto& a : f.actors) actors += (actors.empty() ? "" : ",") + a;
        for (const auto& m : f.components_or_modules)
            modules += (modules.empty() ? "" : ",") + m;
        std::cout << to_string(f.severity) << ' ' << f.pattern << ' ' << window;
        if (!actors.empty()) std::cout << ' ' << actors;
        if (!modules.empty()) std::cout << ' ' << modules;
        std::cout << '\n';
    }
    std::cout << p.findings.size() << " finding(s)\n";
    return exit_code_for(p.findings);
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool need_out) {
    cmd->add_option("--manifest", opts.manifest, "architecture manifest (JSON)")
        ->required();
    cmd->add_option("--chat", opts.chats, "chat log file; repeatable")
        ->required();
    cmd->add_option("--changes", opts.changes, "change log (JSON Lines)");
    auto* out = cmd->add_option("--out", opts.out, "output directory");
    if (need_out) out->required();
    cmd->add_option("--window-length", opts.window_length,
                    "window length override, e.g. 7d");
    cmd->add_option("--origin", opts.origin, "window origin override (RFC 3339)");
    cmd->add_option("--format", opts.format, "chat input format")
        ->check(CLI::IsMember({"canonical", "xmpp"}));
    cmd->add_option("--pattern", opts.patterns,
                    "restrict findings to a pattern or family (conway, bcm, ownership); "
                    "repeatable");
    cmd->add_flag("--with-run-metadata", opts.with_run_metadata,
                  "embed run metadata in findings.json (breaks byte-identical reruns)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"socio-technical structure clash detector"};
    app.require_subcommand(1);

    CommonOpts analyze_opts, graph_opts, timeline_opts, check_opts;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "run every detector and write the full report directory");
    add_common(analyze, analyze_opts, true);
    CLI::App* graph =
        app.add_subcommand("graph", "write architecture-overlay DOT file(s)");
    add_common(graph, graph_opts, true);
    graph->add_option("--window", graph_opts.window_select,
                      "only the window containing this ISO week (2006-W41) or timestamp");
    CLI::App* timeline =
        app.add_subcommand("timeline", "write the centrality time-series CSV");
    add_common(timeline, timeline_opts, true);
    CLI::App* check = app.add_subcommand(
        "check", "print findings to stdout and gate on alerts (exit 2)");
    add_common(check, check_opts, false);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::stringstream out, err;
        int code = app.exit(e, out, err);
        std::cout << out.str();
        std::cerr << err.str();
        // CLI11 uses 0 for --help; anything else is a usage error.
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_opts);
        if (graph->parsed()) return cmd_graph(graph_opts);
        if (timeline->parsed()) return cmd_timeline(timeline_opts);
        if (check->parsed()) return cmd_check(check_opts);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace stsc
