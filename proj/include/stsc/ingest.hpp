#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stsc/detect.hpp"
#include "stsc/model.hpp"
#include "stsc/time.hpp"

namespace stsc {

struct IngestReport {
    int64_t events_read = 0;  // = retained + dropped_self + dropped_unparseable
    int64_t events_dropped_self = 0;
    int64_t events_dropped_unparseable = 0;
    int64_t actors_auto_registered = 0;
    std::vector<std::string> warnings;

    void merge(const IngestReport& other);
};

// Canonical chat format: one JSON object per line with keys ts, from, to and
// optional bytes. Events come back sorted by timestamp (stable); self-messages
// and malformed lines are dropped and counted, warnings cite line numbers.
std::pair<std::vector<CommEvent>, IngestReport> parse_chat_canonical(std::string_view input);

// XMPP-style XML adapter: <message> stanzas with from/to attributes (JID
// domain/resource suffixes stripped) and a ts attribute or child element.
// Identical filtering and ordering contract as the canonical parser.
// A non-well-formed document throws std::runtime_error naming the byte offset.
std::pair<std::vector<CommEvent>, IngestReport> parse_chat_xmpp_xml(std::string_view input);

struct LoadResult {
    std::optional<ArchitectureModel> model;  // set only when everything validated
    DetectConfig detect;
    std::optional<Duration> window_length;   // optional manifest-level window config
    std::optional<Instant> window_origin;
    std::string parse_error;                 // JSON syntax error, with location
    std::vector<std::string> violations;     // validation failures (all of them)
    std::vector<std::string> warnings;       // e.g. unknown keys
};

LoadResult load_architecture(std::string_view input);

// Change log: one JSON object per line with keys ts, actor, module. Sorted by
// timestamp; malformed lines dropped with a warning.
std::pair<std::vector<ChangeRecord>, std::vector<std::string>> load_changes(
    std::string_view input);

// Half-open fixed-length windows [origin + k*len, origin + (k+1)*len) covering
// every event; interior empty windows are emitted too. Empty input -> empty.
std::vector<Window> build_windows(const std::vector<CommEvent>& events, Instant origin,
                                  Duration length);

// Midnight UTC of the first event's day — the default window origin.
std::optional<Instant> default_origin(const std::vector<CommEvent>& events);

// Nodes: every actor in an in-window event plus every rostered analysis actor;
// edges: per ordered pair, the count of in-window events.
CommGraph build_comm_graph(const std::vector<CommEvent>& events, const Window& window,
                           const std::vector<std::string>& roster);

// Adds chat-only actors to the model roster with empty roles, bumping
// report.actors_auto_registered.
void register_chat_actors(ArchitectureModel& model, const std::vector<CommEvent>& events,
                          IngestReport& report);

}  // namespace stsc
