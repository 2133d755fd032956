#include "stsc/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stsc/log.hpp"

namespace stsc {

namespace {

// Evidence reals are rounded before serialization so reports are stable at
// 6-decimal precision.
double round6(double v) { return std::round(v * 1e6) / 1e6; }

int severity_rank(Severity s) {
    switch (s) {
        case Severity::alert: return 0;
        case Severity::warning: return 1;
        case Severity::info: return 2;
    }
    return 3;
}

}  // namespace

std::vector<RequiredEdge> required_edges(const ArchitectureModel& model) {
    std::map<std::pair<std::string, std::string>, RequiredEdge> merged;
    std::map<std::string, std::set<std::string>> members;  // component -> actors
    for (const auto& as : model.assignments) members[as.component].insert(as.actor);

    auto add = [&](const std::string& a, const std::string& b, const char* reason,
                   std::initializer_list<const std::string*> via) {
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto& edge = merged[key];
        edge.pair = key;
        edge.reasons.insert(reason);
        for (const std::string* c : via) edge.via.insert(*c);
    };

    for (const auto& [component, actors] : members) {
        for (auto it = actors.begin(); it != actors.end(); ++it)
            for (auto jt = std::next(it); jt != actors.end(); ++jt)
                add(*it, *jt, "co_assignment", {&component});
    }
    for (const auto& dep : model.dependencies) {
        const auto& from_actors = members[dep.from];
        const auto& to_actors = members[dep.to];
        for (const auto& a : from_actors)
            for (const auto& b : to_actors)
                if (a != b) add(a, b, "cross_dependency", {&dep.from, &dep.to});
    }

    std::vector<RequiredEdge> out;
    out.reserve(merged.size());
    for (auto& [key, edge] : merged) out.push_back(std::move(edge));
    return out;  // map order = sorted by pair
}

std::vector<Finding> detect_conway(const CommGraph& graph, const ArchitectureModel& model,
                                   const DetectConfig& config) {
    UGraph u = symmetrize(graph);
    int64_t max_weight = 0;
    for (const auto& [pair, w] : u.edges) max_weight = std::max(max_weight, w);

    std::vector<Finding> out;
    for (const auto& req : required_edges(model)) {
        auto it = u.edges.find(req.pair);
        json reasons = json::array();
        for (const auto& r : req.reasons) reasons.push_back(r);
        json via = json::array();
        for (const auto& c : req.via) via.push_back(c);

        if (it == u.edges.end()) {
            Finding f;
            f.pattern = kPatternConwayMissing;
            f.window = graph.window;
            f.actors = {req.pair.first, req.pair.second};
            f.components_or_modules.assign(req.via.begin(), req.via.end());
            f.evidence = {{"reasons", reasons}, {"via", via}, {"observed_weight", 0}};
            f.severity = Severity::alert;
            out.push_back(std::move(f));
        } else if (2 * it->second < max_weight) {
            Finding f;
            f.pattern = kPatternConwayWeak;
            f.window = graph.window;
            f.actors = {req.pair.first, req.pair.second};
            f.components_or_modules.assign(req.via.begin(), req.via.end());
            f.evidence = {{"weight", it->second}, {"max_weight", max_weight}};
            f.severity = config.min_required_weight == RequiredWeight::strong ? Severity::alert
                                                                              : Severity::warning;
            out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
        int ra = severity_rank(a.severity), rb = severity_rank(b.severity);
        if (ra != rb) return ra < rb;
        return a.actors < b.actors;
    });
    return out;
}

std::vector<Finding> detect_betweenness_match(const std::vector<CentralityRecord>& records,
                                              const ArchitectureModel& model,
                                              const DetectConfig& config) {
    std::vector<Finding> out;
    if (config.expected_central.empty()) {
        STSC_LOG_INFO("betweenness-match check skipped: no expected_central configured");
        return out;
    }
    if (records.empty()) return out;

    std::vector<const CentralityRecord*> ranked;
    ranked.reserve(records.size());
    for (const auto& r : records) ranked.push_back(&r);
    std::sort(ranked.begin(), ranked.end(), [](const CentralityRecord* a,
                                               const CentralityRecord* b) {
        if (a->betweenness_raw != b->betweenness_raw)
            return a->betweenness_raw > b->betweenness_raw;
        return a->actor < b->actor;
    });

    std::set<std::string> expected(config.expected_central.begin(),
                                   config.expected_central.end());
    json expected_json = json::array();
    for (const auto& e : expected) expected_json.push_back(e);

    auto exempt = [&](const std::string& actor) {
        const Actor* a = model.find_actor(actor);
        return a && (a->roles.count("project_lead") || a->roles.count("project_manager"));
    };

    size_t n = ranked.size();
    double cutoff = config.peripheral_percentile * static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        const CentralityRecord& rec = *ranked[i];
        int rank = static_cast<int>(i) + 1;
        if (rank <= config.top_k && !expected.count(rec.actor) && !exempt(rec.actor) &&
            rec.betweenness_raw > 0.0) {
            Finding f;
            f.pattern = kPatternBcmUnexpected;
            f.window = rec.window;
            f.actors = {rec.actor};
            f.evidence = {{"rank", rank},
                          {"value", round6(rec.betweenness_raw)},
                          {"expected", expected_json}};
            f.severity = Severity::alert;
            out.push_back(std::move(f));
        }
        if (expected.count(rec.actor) && static_cast<double>(rank) > cutoff) {
            Finding f;
            f.pattern = kPatternBcmPeripheral;
            f.window = rec.window;
            f.actors = {rec.actor};
            f.evidence = {{"rank", rank}, {"value", round6(rec.betweenness_raw)}};
            f.severity = Severity::warning;
            out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end(), finding_less);
    return out;
}

std::vector<Finding> detect_ownership(const std::vector<ChangeRecord>& changes, Instant now,
                                      const DetectConfig& config) {
    std::map<std::string, std::vector<const ChangeRecord*>> by_module;
    for (const auto& c : changes) by_module[c.module].push_back(&c);

    std::vector<Finding> out;
    for (const auto& [module, recs] : by_module) {
        // Trailing window (now - ownership_window, now].
        Instant window_start = now - config.ownership_window;
        std::map<std::string, int64_t> counts;
        int64_t total = 0;
        Instant last = recs.front()->timestamp;
        for (const ChangeRecord* r : recs) {
            last = std::max(last, r->timestamp);
            if (r->timestamp > window_start && r->timestamp <= now) {
                counts[r->actor] += 1;
                ++total;
            }
        }
        bool has_majority = false;
        for (const auto& [actor, count] : counts)
            if (2 * count > total) has_majority = true;
        if (counts.size() >= 2 && !has_majority) {
            Finding f;
            f.pattern = kPatternOwnershipMulti;
            f.window = std::nullopt;
            for (const auto& [actor, count] : counts) f.actors.push_back(actor);
            f.components_or_modules = {module};
            json jcounts = json::object();
            for (const auto& [actor, count] : counts) jcounts[actor] = count;
            json jactors = json::array();
            for (const auto& a : f.actors) jactors.push_back(a);
            f.evidence = {{"actors", jactors}, {"counts", jcounts}};
            f.severity = Severity::warning;
            out.push_back(std::move(f));
        }
        if (last < now - config.staleness) {
            Finding f;
            f.pattern = kPatternOwnershipStale;
            f.window = std::nullopt;
            f.components_or_modules = {module};
            f.evidence = {{"last_change", format_rfc3339(last)}};
            f.severity = config.stable_modules.count(module) ? Severity::info : Severity::warning;
            out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end(), finding_less);
    return out;
}

std::vector<Finding> run_all(const std::vector<CommGraph>& graphs,
                             const CentralitySeries& series, const ArchitectureModel& model,
                             const std::vector<ChangeRecord>& changes, Instant now,
                             const DetectConfig& config) {
    // The series must carry every graph node; anything else means the inputs
    // were assembled from different rosters.
    std::vector<std::string> missing;
    for (const auto& g : graphs)
        for (const auto& node : g.nodes)
            if (!series.by_actor.count(node)) missing.push_back(node);
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        std::string joined;
        for (const auto& m : missing) joined += (joined.empty() ? "" : ", ") + m;
        throw std::runtime_error("graphs and centrality series disagree on the roster: " +
                                 joined);
    }

    std::vector<Finding> out;
    for (size_t i = 0; i < graphs.size(); ++i) {
        auto conway = detect_conway(graphs[i], model, config);
        out.insert(out.end(), std::make_move_iterator(conway.begin()),
                   std::make_move_iterator(conway.end()));
        std::vector<CentralityRecord> window_records;
        for (const auto& [actor, recs] : series.by_actor)
            if (i < recs.size()) window_records.push_back(recs[i]);
        auto bcm = detect_betweenness_match(window_records, model, config);
        out.insert(out.end(), std::make_move_iterator(bcm.begin()),
                   std::make_move_iterator(bcm.end()));
    }
    if (!changes.empty()) {
        auto ownership = detect_ownership(changes, now, config);
        out.insert(out.end(), std::make_move_iterator(ownership.begin()),
                   std::make_move_iterator(ownership.end()));
    }
    std::sort(out.begin(), out.end(), finding_less);
    return out;
}

}  // namespace stsc
