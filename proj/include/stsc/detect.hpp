#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stsc/metrics.hpp"
#include "stsc/model.hpp"
#include "stsc/time.hpp"

namespace stsc {

// How strong a required edge has to be. With `present`, any edge satisfies the
// requirement and weak edges are still reported as warnings; with `strong`,
// weak required edges escalate to alert severity.
enum class RequiredWeight { present, strong };

struct DetectConfig {
    std::vector<std::string> expected_central;  // the actors management expects to be hubs
    int top_k = 3;
    double peripheral_percentile = 0.5;
    Duration ownership_window = std::chrono::seconds{28 * 86400};
    Duration staleness = std::chrono::seconds{56 * 86400};
    std::set<std::string> stable_modules;  // stale findings on these downgrade to info
    RequiredWeight min_required_weight = RequiredWeight::present;
};

struct RequiredEdge {
    std::pair<std::string, std::string> pair;  // lexicographic order
    std::set<std::string> reasons;             // co_assignment / cross_dependency
    std::set<std::string> via;                 // component ids that induce the requirement
};

// Every coordination pair the architecture demands: co-assigned actors plus
// actor pairs across each dependency edge. Merged, reasons unioned, sorted.
std::vector<RequiredEdge> required_edges(const ArchitectureModel& model);

std::vector<Finding> detect_conway(const CommGraph& graph, const ArchitectureModel& model,
                                   const DetectConfig& config);

// Records must all belong to one window. Rank = betweenness_raw descending,
// ties by actor id.
std::vector<Finding> detect_betweenness_match(const std::vector<CentralityRecord>& records,
                                              const ArchitectureModel& model,
                                              const DetectConfig& config);

std::vector<Finding> detect_ownership(const std::vector<ChangeRecord>& changes, Instant now,
                                      const DetectConfig& config);

// All checkers over all windows, globally ordered (see finding_less).
// Throws std::runtime_error when graphs and series disagree on the roster.
std::vector<Finding> run_all(const std::vector<CommGraph>& graphs,
                             const CentralitySeries& series, const ArchitectureModel& model,
                             const std::vector<ChangeRecord>& changes, Instant now,
                             const DetectConfig& config);

}  // namespace stsc
