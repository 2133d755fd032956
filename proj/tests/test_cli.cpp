#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stsc/cli.hpp"
#include "stsc/export.hpp"

namespace fs = std::filesystem;
using namespace stsc;

namespace {

std::string fixture(const std::string& rel) {
    const char* root = std::getenv("STSC_FIXTURES");
    REQUIRE(root != nullptr);
    return std::string(root) + "/" + rel;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& path, const std::string& bytes) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    REQUIRE(out.good());
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "stsc-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> mendix_args(const std::string& sub, const fs::path& out) {
    std::vector<std::string> args = {sub,
                                     "--manifest", fixture("mendix/manifest.json"),
                                     "--chat", fixture("mendix/chat-week1.jsonl"),
                                     "--chat", fixture("mendix/chat-week2.jsonl"),
                                     "--chat", fixture("mendix/chat-week3.jsonl"),
                                     "--chat", fixture("mendix/chat-week4.jsonl"),
                                     "--changes", fixture("mendix/changes.jsonl")};
    if (!out.empty()) {
        args.push_back("--out");
        args.push_back(out.string());
    }
    return args;
}

// Capture std::cout for the duration of one run_cli call.
struct CoutCapture {
    std::ostringstream buffer;
    std::streambuf* saved;
    CoutCapture() : saved(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(saved); }
};

}  // namespace

TEST_CASE("analyze writes the full report directory and gates on alerts") {
    fs::path out = fresh_dir("analyze");
    int code = run_cli(mendix_args("analyze", out));
    CHECK(code == 2);  // the fixture project has missing-link alerts

    CHECK(fs::exists(out / "findings.json"));
    CHECK(fs::exists(out / "centrality.csv"));
    CHECK(fs::exists(out / "ingest-report.json"));
    std::vector<std::string> overlays;
    for (const auto& entry : fs::directory_iterator(out)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("overlay-", 0) == 0) overlays.push_back(name);
    }
    std::sort(overlays.begin(), overlays.end());
    CHECK(overlays == std::vector<std::string>{
                          "overlay-20061002T000000Z.dot", "overlay-20061009T000000Z.dot",
                          "overlay-20061016T000000Z.dot", "overlay-20061023T000000Z.dot"});

    auto findings = parse_findings_json(slurp(out / "findings.json"));
    CHECK(!findings.empty());
    json report = json::parse(slurp(out / "ingest-report.json"));
    CHECK(report["events_read"] == 524);
    CHECK(report["events_dropped_self"] == 0);
    CHECK(report["events_dropped_unparseable"] == 0);
    CHECK(report["actors_auto_registered"] == 0);

    // digests cover manifest + 4 chat files + changes, in argument order
    json doc = json::parse(slurp(out / "findings.json"));
    REQUIRE(doc["generated_from"].size() == 6);
    CHECK(doc["generated_from"][0]["input"] == "manifest.json");
    CHECK(doc["generated_from"][5]["input"] == "changes.jsonl");
}

TEST_CASE("analyze twice produces byte-identical reports") {
    fs::path out1 = fresh_dir("repeat1");
    fs::path out2 = fresh_dir("repeat2");
    CHECK(run_cli(mendix_args("analyze", out1)) == 2);
    CHECK(run_cli(mendix_args("analyze", out2)) == 2);
    for (const auto& name : {"findings.json", "centrality.csv", "ingest-report.json",
                             "overlay-20061002T000000Z.dot", "overlay-20061023T000000Z.dot"})
        CHECK(slurp(out1 / name) == slurp(out2 / name));
}

TEST_CASE("run metadata appears only when asked for") {
    fs::path out = fresh_dir("meta");
    auto args = mendix_args("analyze", out);
    args.push_back("--with-run-metadata");
    run_cli(args);
    json doc = json::parse(slurp(out / "findings.json"));
    REQUIRE(doc.contains("run_metadata"));
    CHECK(doc["run_metadata"]["tool"] == "stsc");

    fs::path plain = fresh_dir("meta-plain");
    run_cli(mendix_args("analyze", plain));
    CHECK(!json::parse(slurp(plain / "findings.json")).contains("run_metadata"));
}

TEST_CASE("timeline emits the same CSV bytes as analyze") {
    fs::path a = fresh_dir("tl-analyze");
    fs::path t = fresh_dir("tl-timeline");
    run_cli(mendix_args("analyze", a));
    CHECK(run_cli(mendix_args("timeline", t)) == 0);
    CHECK(slurp(t / "centrality.csv") == slurp(a / "centrality.csv"));
    // 4 windows x 12 rostered analysis actors + header
    auto rows = parse_timeseries_csv(slurp(t / "centrality.csv"));
    CHECK(rows.size() == 48);
}

TEST_CASE("graph --window selects exactly one overlay") {
    fs::path out = fresh_dir("graph-week");
    auto args = mendix_args("graph", out);
    args.push_back("--window");
    args.push_back("2006-W41");
    CHECK(run_cli(args) == 0);
    size_t count = 0;
    std::string only;
    for (const auto& entry : fs::directory_iterator(out)) {
        ++count;
        only = entry.path().filename().string();
    }
    CHECK(count == 1);
    CHECK(only == "overlay-20061009T000000Z.dot");  // the week containing Oct 9-15
}

TEST_CASE("graph --window also accepts a timestamp inside the window") {
    fs::path out = fresh_dir("graph-ts");
    auto args = mendix_args("graph", out);
    args.push_back("--window");
    args.push_back("2006-10-20T12:00:00Z");
    CHECK(run_cli(args) == 0);
    CHECK(fs::exists(out / "overlay-20061016T000000Z.dot"));
    CHECK(!fs::exists(out / "overlay-20061009T000000Z.dot"));
}

TEST_CASE("graph without --window writes every overlay") {
    fs::path out = fresh_dir("graph-all");
    CHECK(run_cli(mendix_args("graph", out)) == 0);
    size_t count = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        (void)entry;
        ++count;
    }
    CHECK(count == 4);
}

TEST_CASE("graph --window outside the data is an operational error") {
    fs::path out = fresh_dir("graph-miss");
    auto args = mendix_args("graph", out);
    args.push_back("--window");
    args.push_back("2007-W01");
    CHECK(run_cli(args) == 1);
}

TEST_CASE("check prints one line per finding plus a count, and gates") {
    CoutCapture cap;
    int code = run_cli(mendix_args("check", {}));
    CHECK(code == 2);
    std::string text = cap.buffer.str();
    size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines >= 2);
    CHECK(text.find("alert conway_missing_link 2006-10-02T00:00:00Z") != std::string::npos);
    CHECK(text.find(" finding(s)\n") != std::string::npos);
    // the count line agrees with the number of findings printed
    std::string last = text.substr(text.rfind('\n', text.size() - 2) + 1);
    CHECK(std::to_string(lines - 1) + " finding(s)\n" == last);
}

TEST_CASE("check --pattern conway restricts output and still alerts") {
    CoutCapture cap;
    auto args = mendix_args("check", {});
    args.push_back("--pattern");
    args.push_back("conway");
    CHECK(run_cli(args) == 2);
    std::istringstream lines(cap.buffer.str());
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find("finding(s)") != std::string::npos) continue;
        bool conway = line.find("conway_missing_link") != std::string::npos ||
                      line.find("conway_weak_link") != std::string::npos;
        CHECK(conway);
    }
}

TEST_CASE("check --pattern ownership exits clean: no alerts in that family") {
    CoutCapture cap;
    auto args = mendix_args("check", {});
    args.push_back("--pattern");
    args.push_back("ownership");
    CHECK(run_cli(args) == 0);
    std::string text = cap.buffer.str();
    CHECK(text.find("ownership_multi_owner") != std::string::npos);
    CHECK(text.find("ownership_stale") != std::string::npos);
    CHECK(text.find("conway") == std::string::npos);
}

TEST_CASE("check --pattern accepts exact pattern ids") {
    CoutCapture cap;
    auto args = mendix_args("check", {});
    args.push_back("--pattern");
    args.push_back("bcm_unexpected_central");
    CHECK(run_cli(args) == 2);
    std::string text = cap.buffer.str();
    CHECK(text.find("bcm_unexpected_central") != std::string::npos);
    CHECK(text.find("bcm_expected_peripheral") == std::string::npos);
}

TEST_CASE("a congruent project exits 0 with an empty findings list") {
    fs::path dir = fresh_dir("congruent");
    spit(dir / "manifest.json", R"({
      "actors": [
        {"id": "a", "roles": ["developer"]},
        {"id": "b", "roles": ["developer"]}
      ],
      "components": [{"id": "c", "name": "C"}],
      "assignments": [
        {"actor": "a", "component": "c", "role": "developer"},
        {"actor": "b", "component": "c", "role": "developer"}
      ]
    })");
    spit(dir / "chat.jsonl",
         "{\"ts\":\"2006-10-02T09:00:00Z\",\"from\":\"a\",\"to\":\"b\"}\n"
         "{\"ts\":\"2006-10-02T10:00:00Z\",\"from\":\"b\",\"to\":\"a\"}\n"
         "{\"ts\":\"2006-10-03T09:00:00Z\",\"from\":\"a\",\"to\":\"b\"}\n");
    fs::path out = dir / "out";
    int code = run_cli({"analyze", "--manifest", (dir / "manifest.json").string(),
                        "--chat", (dir / "chat.jsonl").string(), "--out", out.string()});
    CHECK(code == 0);
    CHECK(parse_findings_json(slurp(out / "findings.json")).empty());
}

TEST_CASE("a missing manifest is an operational error") {
    fs::path out = fresh_dir("no-manifest");
    int code = run_cli({"analyze", "--manifest", (out / "nope.json").string(),
                        "--chat", fixture("mendix/chat-week1.jsonl"),
                        "--out", out.string()});
    CHECK(code == 1);
}

TEST_CASE("an invalid manifest is an operational error, not a crash") {
    fs::path dir = fresh_dir("bad-manifest");
    spit(dir / "manifest.json", "{\"actors\": [");
    int code = run_cli({"check", "--manifest", (dir / "manifest.json").string(),
                        "--chat", fixture("mendix/chat-week1.jsonl")});
    CHECK(code == 1);
}

TEST_CASE("usage errors exit 1, --help exits 0") {
    CoutCapture cap;
    CHECK(run_cli({}) == 1);                        // no subcommand
    CHECK(run_cli({"frobnicate"}) == 1);            // unknown subcommand
    CHECK(run_cli({"analyze"}) == 1);               // missing required options
    CHECK(run_cli({"--help"}) == 0);
    CHECK(cap.buffer.str().find("analyze") != std::string::npos);
}

TEST_CASE("--window-length overrides the manifest which overrides the default") {
    fs::path dir = fresh_dir("precedence");
    spit(dir / "manifest.json", R"({
      "actors": [
        {"id": "a", "roles": ["developer"]},
        {"id": "b", "roles": ["developer"]}
      ],
      "components": [{"id": "c", "name": "C"}],
      "assignments": [
        {"actor": "a", "component": "c", "role": "developer"},
        {"actor": "b", "component": "c", "role": "developer"}
      ],
      "window": {"length": "14d"}
    })");
    // 21 days of traffic: 14d windows -> 2, 7d windows -> 3
    std::string chat;
    for (int day = 0; day < 21; day += 2) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "{\"ts\":\"2006-10-%02dT09:00:00Z\",\"from\":\"a\",\"to\":\"b\"}\n",
                      2 + day);
        chat += buf;
    }
    spit(dir / "chat.jsonl", chat);

    auto windows_with = [&](const std::vector<std::string>& extra) {
        fs::path out = dir / ("out" + std::to_string(rand()));
        std::vector<std::string> args = {"timeline", "--manifest",
                                         (dir / "manifest.json").string(), "--chat",
                                         (dir / "chat.jsonl").string(), "--out", out.string()};
        args.insert(args.end(), extra.begin(), extra.end());
        REQUIRE(run_cli(args) == 0);
        std::set<std::string> starts;
        for (const auto& row : parse_timeseries_csv(slurp(out / "centrality.csv")))
            starts.insert(row.window_start);
        return starts.size();
    };
    CHECK(windows_with({}) == 2);                             // manifest 14d
    CHECK(windows_with({"--window-length", "7d"}) == 3);      // flag beats manifest
    CHECK(windows_with({"--origin", "2006-10-01T00:00:00Z", "--window-length", "7d"}) == 4);
}

TEST_CASE("--format xmpp runs the adapter and reports drops per file") {
    fs::path dir = fresh_dir("xmpp");
    spit(dir / "manifest.json", R"({
      "actors": [
        {"id": "jonve", "roles": ["developer"]},
        {"id": "judva", "roles": ["developer"]},
        {"id": "vla", "roles": ["developer"]}
      ],
      "components": [{"id": "xml-server", "name": "XML Server"}],
      "assignments": [
        {"actor": "jonve", "component": "xml-server", "role": "developer"},
        {"actor": "judva", "component": "xml-server", "role": "developer"},
        {"actor": "vla", "component": "xml-server", "role": "developer"}
      ]
    })");
    fs::path out = dir / "out";
    int code = run_cli({"analyze", "--manifest", (dir / "manifest.json").string(),
                        "--chat", fixture("ingest/sample.xml"), "--format", "xmpp",
                        "--out", out.string()});
    CHECK(code == 2);  // judva never talks to vla -> missing link
    json report = json::parse(slurp(out / "ingest-report.json"));
    CHECK(report["events_read"] == 5);
    CHECK(report["events_dropped_self"] == 1);
    CHECK(report["events_dropped_unparseable"] == 2);
    REQUIRE(report["warnings"].size() == 2);
    std::string w0 = report["warnings"][0].get<std::string>();
    CHECK(w0.find("sample.xml") == 0);  // warnings name the source file
}

TEST_CASE("analyze --pattern ownership filters the report and the gate") {
    fs::path out = fresh_dir("filtered");
    auto args = mendix_args("analyze", out);
    args.push_back("--pattern");
    args.push_back("ownership");
    CHECK(run_cli(args) == 0);  // ownership findings never alert here
    auto findings = parse_findings_json(slurp(out / "findings.json"));
    REQUIRE(!findings.empty());
    for (const auto& f : findings) CHECK(f.pattern.rfind("ownership_", 0) == 0);
}
