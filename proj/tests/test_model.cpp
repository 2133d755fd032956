#include <doctest.h>

#include <algorithm>

#include "stsc/export.hpp"
#include "stsc/model.hpp"

using namespace stsc;

namespace {

ArchitectureModel small_model() {
    ArchitectureModel m;
    m.actors = {{"jonve", "Jonve", {"developer"}},
                {"judva", std::nullopt, {"developer"}},
                {"pan", std::nullopt, {"project_lead"}},
                {"verra", std::nullopt, {"other"}}};
    m.components = {{"xml-server", "XML Server"}, {"client", "Client System"}};
    m.dependencies = {{"client", "xml-server", "xml-interchange"}};
    m.assignments = {{"jonve", "xml-server", "developer"},
                     {"judva", "xml-server", "developer"},
                     {"pan", "client", "project_lead"}};
    return m;
}

}  // namespace

TEST_CASE("valid model produces no violations") {
    CHECK(validate_model(small_model()).empty());
}

TEST_CASE("dependency to an undeclared component is reported by name") {
    auto m = small_model();
    m.dependencies.push_back({"client", "ghost", "rpc"});
    auto v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("ghost") != std::string::npos);
}

TEST_CASE("duplicate assignment pair is one violation") {
    auto m = small_model();
    m.assignments.push_back({"jonve", "xml-server", "developer"});
    auto v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("jonve") != std::string::npos);
}

TEST_CASE("all violations are collected, not just the first") {
    auto m = small_model();
    m.actors.push_back({"jonve", std::nullopt, {"developer"}});        // duplicate id
    m.dependencies.push_back({"client", "client", "self"});            // self dependency
    m.assignments.push_back({"nobody", "client", "developer"});        // unknown actor
    auto v = validate_model(m);
    CHECK(v.size() == 3);
}

TEST_CASE("validation is pure and stable") {
    auto m = small_model();
    m.actors.push_back({"", std::nullopt, {}});
    m.dependencies.push_back({"a", "b", "x"});
    auto v1 = validate_model(m);
    auto v2 = validate_model(m);
    CHECK(v1 == v2);
    CHECK(!v1.empty());
}

TEST_CASE("empty components with assignments violate referential integrity") {
    ArchitectureModel m;
    m.actors = {{"jonve", std::nullopt, {"developer"}}};
    m.assignments = {{"jonve", "xml-server", "developer"}};
    auto v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("xml-server") != std::string::npos);
}

TEST_CASE("unknown role and role not held by actor are violations") {
    auto m = small_model();
    m.actors.push_back({"x", std::nullopt, {"wizard"}});
    auto v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("wizard") != std::string::npos);

    m = small_model();
    m.assignments.push_back({"judva", "client", "project_lead"});  // judva is a developer
    v = validate_model(m);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("judva") != std::string::npos);
}

TEST_CASE("analysis roster excludes 'other' roles and sorts ids") {
    auto roster = small_model().analysis_roster();
    CHECK(roster == std::vector<std::string>{"jonve", "judva", "pan"});
}

TEST_CASE("severity names round-trip") {
    for (Severity s : {Severity::info, Severity::warning, Severity::alert})
        CHECK(*severity_from_string(to_string(s)) == s);
    CHECK(!severity_from_string("fatal"));
}

TEST_CASE("finding order: window start, then pattern, then actors; run-wide last") {
    Window w1{*parse_rfc3339("2006-10-02T00:00:00Z"), *parse_rfc3339("2006-10-09T00:00:00Z")};
    Window w2{*parse_rfc3339("2006-10-09T00:00:00Z"), *parse_rfc3339("2006-10-16T00:00:00Z")};
    Finding a{kPatternConwayMissing, w1, {"a", "b"}, {}, json::object(), Severity::alert};
    Finding b{kPatternConwayWeak, w1, {"a", "b"}, {}, json::object(), Severity::warning};
    Finding c{kPatternConwayMissing, w2, {"a", "b"}, {}, json::object(), Severity::alert};
    Finding d{kPatternConwayMissing, w1, {"a", "c"}, {}, json::object(), Severity::alert};
    Finding e{kPatternOwnershipStale, std::nullopt, {}, {"m"}, json::object(), Severity::info};

    std::vector<Finding> fs = {e, c, b, d, a};
    std::sort(fs.begin(), fs.end(), finding_less);
    CHECK(fs[0] == a);  // w1, conway_missing_link, {a,b}
    CHECK(fs[1] == d);  // w1, conway_missing_link, {a,c}
    CHECK(fs[2] == b);  // w1, conway_weak_link
    CHECK(fs[3] == c);  // w2
    CHECK(fs[4] == e);  // run-wide sorts last
}

TEST_CASE("findings serialize and re-parse to equal values") {
    Window w{*parse_rfc3339("2006-10-02T00:00:00Z"), *parse_rfc3339("2006-10-09T00:00:00Z")};
    std::vector<Finding> fs;
    fs.push_back({kPatternConwayMissing,
                  w,
                  {"jonve", "judva"},
                  {"xml-server"},
                  json{{"reasons", json::array({"co_assignment"})},
                       {"via", json::array({"xml-server"})},
                       {"observed_weight", 0}},
                  Severity::alert});
    fs.push_back({kPatternBcmUnexpected,
                  w,
                  {"mne"},
                  {},
                  json{{"rank", 1}, {"value", 32.0}, {"expected", json::array({"vla"})}},
                  Severity::alert});
    fs.push_back({kPatternOwnershipStale,
                  std::nullopt,
                  {},
                  {"legacy/era-export"},
                  json{{"last_change", "2006-06-13T15:00:00Z"}},
                  Severity::info});

    auto bytes = export_findings_json(fs, {{"chat.jsonl", "0123456789abcdef"}});
    auto parsed = parse_findings_json(bytes);
    REQUIRE(parsed.size() == fs.size());
    for (size_t i = 0; i < fs.size(); ++i) CHECK(parsed[i] == fs[i]);
}
