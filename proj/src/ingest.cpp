#include "stsc/ingest.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "stsc/log.hpp"
#include "stsc/xml.hpp"

namespace stsc {

void IngestReport::merge(const IngestReport& other) {
    events_read += other.events_read;
    events_dropped_self += other.events_dropped_self;
    events_dropped_unparseable += other.events_dropped_unparseable;
    actors_auto_registered += other.actors_auto_registered;
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

namespace {

bool blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

void sort_events(std::vector<CommEvent>& events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const CommEvent& a, const CommEvent& b) { return a.timestamp < b.timestamp; });
}

// Strips "user@domain/resource" down to "user".
std::string strip_jid(std::string_view jid) {
    size_t slash = jid.find('/');
    if (slash != std::string_view::npos) jid = jid.substr(0, slash);
    size_t at = jid.find('@');
    if (at != std::string_view::npos) jid = jid.substr(0, at);
    return std::string(jid);
}

}  // namespace

std::pair<std::vector<CommEvent>, IngestReport> parse_chat_canonical(std::string_view input) {
    std::vector<CommEvent> events;
    IngestReport report;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= input.size()) {
        size_t nl = input.find('\n', pos);
        std::string_view line = input.substr(pos, nl == std::string_view::npos ? input.size() - pos
                                                                               : nl - pos);
        pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
        ++line_no;
        if (blank(line)) continue;
        ++report.events_read;

        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            ++report.events_dropped_unparseable;
            report.warnings.push_back("line " + std::to_string(line_no) + ": not a JSON object");
            continue;
        }
        auto field = [&](const char* key) -> std::optional<std::string> {
            auto it = rec.find(key);
            if (it == rec.end() || !it->is_string() || it->get<std::string>().empty())
                return std::nullopt;
            return it->get<std::string>();
        };
        auto ts_raw = field("ts");
        auto from = field("from");
        auto to = field("to");
        std::optional<Instant> ts = ts_raw ? parse_rfc3339(*ts_raw) : std::nullopt;
        std::optional<int64_t> bytes;
        bool bytes_ok = true;
        if (auto it = rec.find("bytes"); it != rec.end()) {
            if (it->is_number_integer() && it->get<int64_t>() >= 0)
                bytes = it->get<int64_t>();
            else
                bytes_ok = false;
        }
        if (!ts || !from || !to || !bytes_ok) {
            ++report.events_dropped_unparseable;
            std::string why = !from || !to          ? "missing from/to"
                              : !ts_raw             ? "missing ts"
                              : !ts                 ? "bad timestamp"
                                                    : "bad bytes";
            report.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
            continue;
        }
        if (*from == *to) {
            ++report.events_dropped_self;
            continue;
        }
        events.push_back({*from, *to, *ts, bytes});
    }
    sort_events(events);
    return {std::move(events), std::move(report)};
}

std::pair<std::vector<CommEvent>, IngestReport> parse_chat_xmpp_xml(std::string_view input) {
    auto parsed = xml::parse(input);
    if (!parsed.root)
        throw std::runtime_error("XML parse error at byte " +
                                 std::to_string(parsed.error_offset) + ": " + parsed.error);

    std::vector<CommEvent> events;
    IngestReport report;

    // Collect <message> stanzas anywhere under the root.
    std::vector<const xml::Element*> stack{&*parsed.root};
    std::vector<const xml::Element*> stanzas;
    while (!stack.empty()) {
        const xml::Element* el = stack.back();
        stack.pop_back();
        if (el->name == "message") {
            stanzas.push_back(el);
            continue;  // nested messages make no sense; don't descend
        }
        for (auto it = el->children.rbegin(); it != el->children.rend(); ++it)
            stack.push_back(&*it);
    }

    for (const xml::Element* msg : stanzas) {
        ++report.events_read;
        auto warn = [&](const std::string& why) {
            ++report.events_dropped_unparseable;
            report.warnings.push_back("stanza at byte " + std::to_string(msg->offset) + ": " + why);
        };
        if (const std::string* type = msg->attr("type"); type && *type == "groupchat") {
            warn("groupchat stanza not supported");
            continue;
        }
        const std::string* from = msg->attr("from");
        const std::string* to = msg->attr("to");
        if (!from || !to || from->empty() || to->empty()) {
            warn("missing from/to");
            continue;
        }
        std::string ts_text;
        if (const std::string* ts_attr = msg->attr("ts")) {
            ts_text = *ts_attr;
        } else if (const xml::Element* ts_child = msg->child("ts")) {
            ts_text = ts_child->text;
            // trim surrounding whitespace from element text
            size_t b = ts_text.find_first_not_of(" \t\r\n");
            size_t e = ts_text.find_last_not_of(" \t\r\n");
            ts_text = b == std::string::npos ? "" : ts_text.substr(b, e - b + 1);
        }
        if (ts_text.empty()) {
            warn("missing timestamp");
            continue;
        }
        auto ts = parse_rfc3339(ts_text);
        if (!ts) {
            warn("bad timestamp");
            continue;
        }
        std::string sender = strip_jid(*from);
        std::string recipient = strip_jid(*to);
        if (sender == recipient) {
            ++report.events_dropped_self;
            continue;
        }
        std::optional<int64_t> bytes;
        if (const xml::Element* body = msg->child("body"))
            bytes = static_cast<int64_t>(body->text.size());
        events.push_back({std::move(sender), std::move(recipient), *ts, bytes});
    }
    sort_events(events);
    return {std::move(events), std::move(report)};
}

namespace {

std::optional<std::string> json_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
}

void parse_detect_config(const json& j, DetectConfig& cfg, std::vector<std::string>& violations,
                         std::vector<std::string>& warnings) {
    static const std::set<std::string> known = {"expected_central",      "top_k",
                                                "peripheral_percentile", "ownership_window",
                                                "staleness",             "stable_modules",
                                                "min_required_weight"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            warnings.push_back("unknown detect key: " + it.key());

    if (auto it = j.find("expected_central"); it != j.end()) {
        if (!it->is_array()) {
            violations.push_back("detect.expected_central must be an array of actor ids");
        } else {
            for (const auto& v : *it) {
                if (!v.is_string()) {
                    violations.push_back("detect.expected_central entries must be strings");
                    break;
                }
                cfg.expected_central.push_back(v.get<std::string>());
            }
        }
    }
    if (auto it = j.find("top_k"); it != j.end()) {
        if (!it->is_number_integer() || it->get<int64_t>() < 1)
            violations.push_back("detect.top_k must be a positive integer");
        else
            cfg.top_k = static_cast<int>(it->get<int64_t>());
    }
    if (auto it = j.find("peripheral_percentile"); it != j.end()) {
        if (!it->is_number() || it->get<double>() <= 0.0 || it->get<double>() >= 1.0)
            violations.push_back("detect.peripheral_percentile must be in (0,1)");
        else
            cfg.peripheral_percentile = it->get<double>();
    }
    auto duration_field = [&](const char* key, Duration& slot) {
        auto it = j.find(key);
        if (it == j.end()) return;
        auto s = it->is_string() ? parse_duration(it->get<std::string>()) : std::nullopt;
        if (!s)
            violations.push_back(std::string("detect.") + key +
                                 " must be a duration like \"28d\"");
        else
            slot = *s;
    };
    duration_field("ownership_window", cfg.ownership_window);
    duration_field("staleness", cfg.staleness);
    if (auto it = j.find("stable_modules"); it != j.end()) {
        if (!it->is_array())
            violations.push_back("detect.stable_modules must be an array of module paths");
        else
            for (const auto& v : *it)
                if (v.is_string()) cfg.stable_modules.insert(v.get<std::string>());
    }
    if (auto it = j.find("min_required_weight"); it != j.end()) {
        auto s = it->is_string() ? it->get<std::string>() : "";
        if (s == "present") cfg.min_required_weight = RequiredWeight::present;
        else if (s == "strong") cfg.min_required_weight = RequiredWeight::strong;
        else violations.push_back("detect.min_required_weight must be \"present\" or \"strong\"");
    }
}

}  // namespace

LoadResult load_architecture(std::string_view input) {
    LoadResult out;
    json doc;
    try {
        doc = json::parse(input);
    } catch (const json::parse_error& e) {
        out.parse_error = e.what();
        return out;
    }
    if (!doc.is_object()) {
        out.parse_error = "manifest root must be a JSON object";
        return out;
    }

    static const std::set<std::string> known = {"actors", "components", "dependencies",
                                                "assignments", "detect", "window"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!known.count(it.key()))
            out.warnings.push_back("unknown manifest key: " + it.key());

    ArchitectureModel model;
    auto array_of_objects = [&](const char* key, auto&& each) {
        auto it = doc.find(key);
        if (it == doc.end()) return;
        if (!it->is_array()) {
            out.violations.push_back(std::string(key) + " must be an array");
            return;
        }
        for (const auto& entry : *it) {
            if (!entry.is_object()) {
                out.violations.push_back(std::string(key) + " entries must be objects");
                continue;
            }
            each(entry);
        }
    };

    array_of_objects("actors", [&](const json& a) {
        Actor actor;
        if (auto id = json_string(a, "id")) actor.id = *id;
        else {
            out.violations.push_back("actor missing id");
            return;
        }
        if (auto dn = json_string(a, "display_name")) actor.display_name = *dn;
        if (auto it = a.find("roles"); it != a.end() && it->is_array())
            for (const auto& r : *it)
                if (r.is_string()) actor.roles.insert(r.get<std::string>());
        model.actors.push_back(std::move(actor));
    });
    array_of_objects("components", [&](const json& c) {
        Component comp;
        if (auto id = json_string(c, "id")) comp.id = *id;
        else {
            out.violations.push_back("component missing id");
            return;
        }
        comp.name = json_string(c, "name").value_or(comp.id);
        model.components.push_back(std::move(comp));
    });
    array_of_objects("dependencies", [&](const json& d) {
        auto from = json_string(d, "from"), to = json_string(d, "to");
        if (!from || !to) {
            out.violations.push_back("dependency missing from/to");
            return;
        }
        model.dependencies.push_back({*from, *to, json_string(d, "kind").value_or("")});
    });
    array_of_objects("assignments", [&](const json& a) {
        auto actor = json_string(a, "actor"), component = json_string(a, "component");
        if (!actor || !component) {
            out.violations.push_back("assignment missing actor/component");
            return;
        }
        model.assignments.push_back({*actor, *component, json_string(a, "role").value_or("")});
    });

    if (auto it = doc.find("detect"); it != doc.end()) {
        if (!it->is_object())
            out.violations.push_back("detect must be an object");
        else
            parse_detect_config(*it, out.detect, out.violations, out.warnings);
    }
    if (auto it = doc.find("window"); it != doc.end()) {
        if (!it->is_object()) {
            out.violations.push_back("window must be an object");
        } else {
            if (auto len = json_string(*it, "length")) {
                auto d = parse_duration(*len);
                if (!d) out.violations.push_back("window.length must be a duration like \"7d\"");
                else out.window_length = *d;
            }
            if (auto origin = json_string(*it, "origin")) {
                auto t = parse_rfc3339(*origin);
                if (!t) out.violations.push_back("window.origin must be an RFC 3339 timestamp");
                else out.window_origin = *t;
            }
        }
    }

    auto structural = validate_model(model);
    out.violations.insert(out.violations.end(), structural.begin(), structural.end());

    // Config cross-checks need the roster.
    std::set<std::string> ids;
    for (const auto& a : model.actors) ids.insert(a.id);
    for (const auto& e : out.detect.expected_central)
        if (!ids.count(e))
            out.violations.push_back("detect.expected_central names unknown actor: " + e);

    if (out.violations.empty()) out.model = std::move(model);
    return out;
}

std::pair<std::vector<ChangeRecord>, std::vector<std::string>> load_changes(
    std::string_view input) {
    std::vector<ChangeRecord> records;
    std::vector<std::string> warnings;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= input.size()) {
        size_t nl = input.find('\n', pos);
        std::string_view line = input.substr(pos, nl == std::string_view::npos ? input.size() - pos
                                                                               : nl - pos);
        pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
        ++line_no;
        if (blank(line)) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            warnings.push_back("line " + std::to_string(line_no) + ": not a JSON object");
            continue;
        }
        auto ts_raw = json_string(rec, "ts");
        auto actor = json_string(rec, "actor");
        auto module = json_string(rec, "module");
        std::optional<Instant> ts = ts_raw ? parse_rfc3339(*ts_raw) : std::nullopt;
        if (!ts || !actor || actor->empty() || !module || module->empty()) {
            warnings.push_back("line " + std::to_string(line_no) + ": malformed change record");
            continue;
        }
        records.push_back({*actor, *module, *ts});
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const ChangeRecord& a, const ChangeRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
    return {std::move(records), std::move(warnings)};
}

std::vector<Window> build_windows(const std::vector<CommEvent>& events, Instant origin,
                                  Duration length) {
    std::vector<Window> windows;
    if (events.empty()) return windows;
    int64_t len = length.count();
    auto index_of = [&](Instant t) {
        int64_t delta = (t - origin).count();
        int64_t k = delta / len;
        if (delta % len < 0) k -= 1;  // floor division
        return k;
    };
    int64_t first = index_of(events.front().timestamp);
    int64_t last = index_of(events.back().timestamp);
    for (int64_t k = first; k <= last; ++k) {
        Instant start = origin + Duration{k * len};
        windows.push_back({start, start + length});
    }
    return windows;
}

std::optional<Instant> default_origin(const std::vector<CommEvent>& events) {
    if (events.empty()) return std::nullopt;
    return floor_to_day(events.front().timestamp);
}

CommGraph build_comm_graph(const std::vector<CommEvent>& events, const Window& window,
                           const std::vector<std::string>& roster) {
    CommGraph g;
    g.window = window;
    g.nodes.insert(roster.begin(), roster.end());
    for (const auto& ev : events) {
        if (!window.contains(ev.timestamp)) continue;
        g.nodes.insert(ev.sender);
        g.nodes.insert(ev.recipient);
        g.edges[{ev.sender, ev.recipient}] += 1;
    }
    return g;
}

void register_chat_actors(ArchitectureModel& model, const std::vector<CommEvent>& events,
                          IngestReport& report) {
    std::set<std::string> known;
    for (const auto& a : model.actors) known.insert(a.id);
    std::set<std::string> added;
    for (const auto& ev : events) {
        for (const std::string* id : {&ev.sender, &ev.recipient}) {
            if (!known.count(*id) && added.insert(*id).second) {
                model.actors.push_back({*id, std::nullopt, {}});
                ++report.actors_auto_registered;
                STSC_LOG_INFO("auto-registered chat actor: %s", id->c_str());
            }
        }
    }
}

}  // namespace stsc
