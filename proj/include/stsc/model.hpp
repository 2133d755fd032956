#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stsc/time.hpp"

namespace stsc {

using json = nlohmann::ordered_json;

struct Actor {
    std::string id;                           // chat handle; the node label
    std::optional<std::string> display_name;
    std::set<std::string> roles;              // developer / project_lead / project_manager / other
};

struct Component {
    std::string id;
    std::string name;
};

struct DependencyEdge {
    std::string from;  // component id
    std::string to;    // component id
    std::string kind;  // e.g. "xml-interchange"
};

struct Assignment {
    std::string actor;
    std::string component;
    std::string role;
};

struct ArchitectureModel {
    std::vector<Component> components;
    std::vector<DependencyEdge> dependencies;
    std::vector<Assignment> assignments;
    std::vector<Actor> actors;

    const Actor* find_actor(const std::string& id) const;
    const Component* find_component(const std::string& id) const;
    // Actors whose roles intersect {developer, project_lead, project_manager},
    // sorted by id. These are the nodes every per-window graph must carry.
    std::vector<std::string> analysis_roster() const;
};

struct CommEvent {
    std::string sender;
    std::string recipient;
    Instant timestamp;
    std::optional<int64_t> bytes;
};

struct Window {
    Instant start;
    Instant end;  // half-open: [start, end)

    bool contains(Instant t) const { return start <= t && t < end; }
    friend bool operator==(const Window&, const Window&) = default;
    friend auto operator<=>(const Window&, const Window&) = default;
};

struct CommGraph {
    Window window;
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, int64_t> edges;  // (sender, recipient) -> count
};

struct CentralityRecord {
    std::string actor;
    Window window;
    int in_degree = 0;
    int out_degree = 0;
    int total_degree = 0;       // distinct neighbours after symmetrizing
    double betweenness_raw = 0.0;
    double betweenness_norm = 0.0;
};

enum class EdgeClass { strong, weak };

struct EdgeStrength {
    std::pair<std::string, std::string> edge;  // endpoints, lexicographic order
    int64_t weight = 0;                        // symmetrized weight
    EdgeClass cls = EdgeClass::strong;
};

struct ChangeRecord {
    std::string actor;
    std::string module;
    Instant timestamp;
};

enum class Severity { info, warning, alert };

std::string to_string(Severity s);
std::optional<Severity> severity_from_string(std::string_view s);

// Pattern identifiers are stable strings; they appear verbatim in reports.
inline constexpr const char* kPatternConwayMissing = "conway_missing_link";
inline constexpr const char* kPatternConwayWeak = "conway_weak_link";
inline constexpr const char* kPatternBcmUnexpected = "bcm_unexpected_central";
inline constexpr const char* kPatternBcmPeripheral = "bcm_expected_peripheral";
inline constexpr const char* kPatternOwnershipMulti = "ownership_multi_owner";
inline constexpr const char* kPatternOwnershipStale = "ownership_stale";

bool is_known_pattern(std::string_view pattern);

struct Finding {
    std::string pattern;
    std::optional<Window> window;              // nullopt = applies to the whole run
    std::vector<std::string> actors;           // sorted
    std::vector<std::string> components_or_modules;  // sorted
    json evidence;                             // per-pattern payload
    Severity severity = Severity::warning;

    friend bool operator==(const Finding& a, const Finding& b) {
        return a.pattern == b.pattern && a.window == b.window && a.actors == b.actors &&
               a.components_or_modules == b.components_or_modules && a.evidence == b.evidence &&
               a.severity == b.severity;
    }
};

// Global report order: window start ascending (run-wide findings last), then
// pattern id, then actors, then components/modules.
bool finding_less(const Finding& a, const Finding& b);

// Returns one human-readable violation per broken invariant; empty means valid.
// Pure and deterministic: the order of violations is stable.
std::vector<std::string> validate_model(const ArchitectureModel& model);

}  // namespace stsc
