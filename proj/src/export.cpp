#include "stsc/export.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace stsc {

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;  // offset basis
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;  // FNV prime
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

namespace {

json window_to_json(const std::optional<Window>& w) {
    if (!w) return "all";
    return json{{"start", format_rfc3339(w->start)}, {"end", format_rfc3339(w->end)}};
}

std::optional<Window> window_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "all") return std::nullopt;
    if (!j.is_object()) throw std::runtime_error("finding window must be \"all\" or an object");
    auto start = parse_rfc3339(j.at("start").get<std::string>());
    auto end = parse_rfc3339(j.at("end").get<std::string>());
    if (!start || !end) throw std::runtime_error("finding window has a bad timestamp");
    return Window{*start, *end};
}

}  // namespace

std::string export_findings_json(const std::vector<Finding>& findings,
                                 const std::vector<InputDigest>& generated_from,
                                 const json& run_metadata) {
    json doc;
    doc["schema_version"] = 1;
    json inputs = json::array();
    for (const auto& d : generated_from)
        inputs.push_back({{"input", d.input}, {"fnv1a64", d.fnv1a64}});
    doc["generated_from"] = std::move(inputs);
    json items = json::array();
    for (const auto& f : findings) {
        json item;
        item["pattern"] = f.pattern;
        item["window"] = window_to_json(f.window);
        item["actors"] = f.actors;
        item["components_or_modules"] = f.components_or_modules;
        item["evidence"] = f.evidence;
        item["severity"] = to_string(f.severity);
        items.push_back(std::move(item));
    }
    doc["findings"] = std::move(items);
    if (!run_metadata.is_null() && !run_metadata.empty()) doc["run_metadata"] = run_metadata;
    return doc.dump(2) + "\n";
}

std::vector<Finding> parse_findings_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("findings document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema_version"))
        throw std::runtime_error("findings document missing schema_version");
    if (doc["schema_version"].get<int64_t>() != 1)
        throw std::runtime_error("unsupported findings schema_version");

    std::vector<Finding> out;
    for (const auto& item : doc.at("findings")) {
        Finding f;
        f.pattern = item.at("pattern").get<std::string>();
        if (!is_known_pattern(f.pattern))
            throw std::runtime_error("unknown finding pattern: " + f.pattern);
        f.window = window_from_json(item.at("window"));
        f.actors = item.at("actors").get<std::vector<std::string>>();
        f.components_or_modules =
            item.at("components_or_modules").get<std::vector<std::string>>();
        f.evidence = item.at("evidence");
        auto sev = severity_from_string(item.at("severity").get<std::string>());
        if (!sev) throw std::runtime_error("unknown severity in findings document");
        f.severity = *sev;
        out.push_back(std::move(f));
    }
    return out;
}

namespace {

// DOT string literal: always quoted, with embedded quotes and backslashes
// escaped.
std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string export_overlay_dot(const CommGraph& graph, const ArchitectureModel& model,
                               const std::vector<EdgeStrength>& strengths) {
    // Primary placement: first assignment by component id. Extra assignments
    // are rendered as dashed links into the other clusters.
    std::map<std::string, std::string> primary;                   // actor -> component
    std::map<std::string, std::set<std::string>> extra;           // actor -> other components
    for (const auto& as : model.assignments) {
        auto it = primary.find(as.actor);
        if (it == primary.end()) {
            primary[as.actor] = as.component;
        } else if (as.component < it->second) {
            extra[as.actor].insert(it->second);
            it->second = as.component;
        } else if (as.component != it->second) {
            extra[as.actor].insert(as.component);
        }
    }

    std::map<std::string, std::set<std::string>> cluster_nodes;   // component -> actors
    for (const auto& c : model.components) cluster_nodes[c.id];
    std::set<std::string> loose;                                  // nodes outside any cluster
    for (const auto& node : graph.nodes) {
        auto it = primary.find(node);
        if (it != primary.end() && cluster_nodes.count(it->second))
            cluster_nodes[it->second].insert(node);
        else
            loose.insert(node);
    }

    // Anchor node used for cluster-to-cluster edges; empty clusters get an
    // invisible placeholder so dependencies still render.
    std::map<std::string, std::string> anchor;
    for (const auto& [component, nodes] : cluster_nodes)
        anchor[component] = nodes.empty() ? "_" + component : *nodes.begin();

    std::string out;
    out += "digraph overlay {\n";
    out += "  compound=true;\n";
    out += "  node [shape=ellipse];\n";
    for (const auto& c : model.components) {
        out += "  subgraph " + dot_quote("cluster_" + c.id) + " {\n";
        out += "    label=" + dot_quote(c.name) + ";\n";
        const auto& nodes = cluster_nodes[c.id];
        if (nodes.empty())
            out += "    " + dot_quote(anchor[c.id]) + " [style=invis, label=\"\"];\n";
        for (const auto& node : nodes) out += "    " + dot_quote(node) + ";\n";
        out += "  }\n";
    }
    for (const auto& node : loose) out += "  " + dot_quote(node) + ";\n";

    // Social edges, undirected; solid = strong, dashed = weak.
    for (const auto& es : strengths) {
        out += "  " + dot_quote(es.edge.first) + " -> " + dot_quote(es.edge.second) +
               " [dir=none, style=" +
               (es.cls == EdgeClass::weak ? std::string("dashed") : std::string("solid")) +
               ", label=" + dot_quote(std::to_string(es.weight)) + "];\n";
    }

    // Secondary assignments: dashed gray link from the actor into the other
    // cluster.
    for (const auto& [actor, components] : extra) {
        if (!graph.nodes.count(actor)) continue;
        for (const auto& component : components) {
            if (!cluster_nodes.count(component)) continue;
            out += "  " + dot_quote(actor) + " -> " + dot_quote(anchor[component]) +
                   " [dir=none, style=dashed, color=gray, lhead=" +
                   dot_quote("cluster_" + component) + ", label=\"also assigned\"];\n";
        }
    }

    // Component dependencies as cluster-to-cluster arrows.
    for (const auto& dep : model.dependencies) {
        if (!cluster_nodes.count(dep.from) || !cluster_nodes.count(dep.to)) continue;
        out += "  " + dot_quote(anchor[dep.from]) + " -> " + dot_quote(anchor[dep.to]) +
               " [ltail=" + dot_quote("cluster_" + dep.from) + ", lhead=" +
               dot_quote("cluster_" + dep.to) + ", style=bold, color=gray40, label=" +
               dot_quote(dep.kind) + "];\n";
    }
    out += "}\n";
    return out;
}

std::string export_timeseries_csv(const CentralitySeries& series) {
    std::string out =
        "window_start,actor,in_degree,out_degree,total_degree,betweenness_raw,betweenness_norm\n";
    for (size_t i = 0; i < series.windows.size(); ++i) {
        for (const auto& [actor, recs] : series.by_actor) {
            const CentralityRecord& r = recs[i];
            char buf[64];
            out += format_rfc3339(r.window.start);
            out += ',';
            out += actor;
            std::snprintf(buf, sizeof buf, ",%d,%d,%d,", r.in_degree, r.out_degree,
                          r.total_degree);
            out += buf;
            std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", r.betweenness_raw, r.betweenness_norm);
            out += buf;
        }
    }
    return out;
}

std::vector<ParsedCsvRow> parse_timeseries_csv(std::string_view bytes) {
    std::vector<ParsedCsvRow> rows;
    size_t pos = 0;
    bool header = true;
    while (pos < bytes.size()) {
        size_t nl = bytes.find('\n', pos);
        std::string_view line =
            bytes.substr(pos, nl == std::string_view::npos ? bytes.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? bytes.size() : nl + 1;
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        ParsedCsvRow row;
        std::vector<std::string> fields;
        size_t fpos = 0;
        while (true) {
            size_t comma = line.find(',', fpos);
            if (comma == std::string_view::npos) {
                fields.emplace_back(line.substr(fpos));
                break;
            }
            fields.emplace_back(line.substr(fpos, comma - fpos));
            fpos = comma + 1;
        }
        if (fields.size() != 7) throw std::runtime_error("malformed CSV row: wrong field count");
        row.window_start = fields[0];
        row.actor = fields[1];
        row.in_degree = std::stoi(fields[2]);
        row.out_degree = std::stoi(fields[3]);
        row.total_degree = std::stoi(fields[4]);
        row.betweenness_raw = std::stod(fields[5]);
        row.betweenness_norm = std::stod(fields[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace stsc
