#include "stsc/model.hpp"

#include <algorithm>

namespace stsc {

const Actor* ArchitectureModel::find_actor(const std::string& id) const {
    for (const auto& a : actors)
        if (a.id == id) return &a;
    return nullptr;
}

const Component* ArchitectureModel::find_component(const std::string& id) const {
    for (const auto& c : components)
        if (c.id == id) return &c;
    return nullptr;
}

std::vector<std::string> ArchitectureModel::analysis_roster() const {
    std::vector<std::string> out;
    for (const auto& a : actors) {
        if (a.roles.count("developer") || a.roles.count("project_lead") ||
            a.roles.count("project_manager"))
            out.push_back(a.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(Severity s) {
    switch (s) {
        case Severity::info: return "info";
        case Severity::warning: return "warning";
        case Severity::alert: return "alert";
    }
    return "warning";
}

std::optional<Severity> severity_from_string(std::string_view s) {
    if (s == "info") return Severity::info;
    if (s == "warning") return Severity::warning;
    if (s == "alert") return Severity::alert;
    return std::nullopt;
}

bool is_known_pattern(std::string_view p) {
    return p == kPatternConwayMissing || p == kPatternConwayWeak ||
           p == kPatternBcmUnexpected || p == kPatternBcmPeripheral ||
           p == kPatternOwnershipMulti || p == kPatternOwnershipStale;
}

bool finding_less(const Finding& a, const Finding& b) {
    // Run-wide findings (no window) sort after every windowed finding.
    bool aw = a.window.has_value(), bw = b.window.has_value();
    if (aw != bw) return aw;
    if (aw && a.window->start != b.window->start) return a.window->start < b.window->start;
    if (a.pattern != b.pattern) return a.pattern < b.pattern;
    if (a.actors != b.actors) return a.actors < b.actors;
    return a.components_or_modules < b.components_or_modules;
}

namespace {

const std::set<std::string> kKnownRoles = {"developer", "project_lead", "project_manager",
                                           "other"};

}  // namespace

std::vector<std::string> validate_model(const ArchitectureModel& model) {
    std::vector<std::string> out;
    std::set<std::string> actor_ids, component_ids;

    for (const auto& a : model.actors) {
        if (a.id.empty()) out.push_back("actor with empty id");
        else if (!actor_ids.insert(a.id).second)
            out.push_back("duplicate actor id: " + a.id);
        for (const auto& r : a.roles)
            if (!kKnownRoles.count(r)) out.push_back("actor " + a.id + " has unknown role: " + r);
    }
    for (const auto& c : model.components) {
        if (c.id.empty()) out.push_back("component with empty id");
        else if (!component_ids.insert(c.id).second)
            out.push_back("duplicate component id: " + c.id);
    }
    for (const auto& d : model.dependencies) {
        if (d.from == d.to)
            out.push_back("dependency from component to itself: " + d.from);
        if (!component_ids.count(d.from))
            out.push_back("dependency references undeclared component: " + d.from);
        if (!component_ids.count(d.to))
            out.push_back("dependency references undeclared component: " + d.to);
    }
    std::set<std::pair<std::string, std::string>> seen_assignments;
    for (const auto& as : model.assignments) {
        if (!actor_ids.count(as.actor))
            out.push_back("assignment references undeclared actor: " + as.actor);
        if (!component_ids.count(as.component))
            out.push_back("assignment references undeclared component: " + as.component);
        if (!seen_assignments.insert({as.actor, as.component}).second)
            out.push_back("duplicate assignment: " + as.actor + " -> " + as.component);
        if (actor_ids.count(as.actor)) {
            const Actor* a = model.find_actor(as.actor);
            if (a && !a->roles.empty() && !a->roles.count(as.role))
                out.push_back("assignment role " + as.role + " not among roles of actor " +
                              as.actor);
        }
    }
    return out;
}

}  // namespace stsc
