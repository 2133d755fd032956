#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stsc/model.hpp"

namespace stsc {

// Undirected simple graph with summed weights; edge keys are (min, max).
struct UGraph {
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, int64_t> edges;

    bool has_edge(const std::string& a, const std::string& b) const {
        return a < b ? edges.count({a, b}) > 0 : edges.count({b, a}) > 0;
    }
};

UGraph symmetrize(const CommGraph& graph);

struct Degrees {
    int in = 0;
    int out = 0;
    int total = 0;  // distinct neighbours in the symmetrized graph
};

std::map<std::string, Degrees> degree_centrality(const CommGraph& graph);

// Shortest-path bookkeeping for one source: path counts, BFS distances, and
// predecessor lists on shortest paths (distance -1 = unreachable).
struct PathCounts {
    std::map<std::string, double> sigma;
    std::map<std::string, int> dist;
    std::map<std::string, std::vector<std::string>> preds;
};

PathCounts single_source_paths(const UGraph& graph, const std::string& source);

struct Betweenness {
    double raw = 0.0;
    double norm = 0.0;
};

// Freeman betweenness over unordered pairs on the unweighted graph;
// normalization by (n-1)(n-2)/2 for n >= 3, else all zeros.
std::map<std::string, Betweenness> betweenness(const UGraph& graph);

struct CentralitySeries {
    // Actor -> one record per window, in window order. Every rostered analysis
    // actor (and every actor observed in any window) has a full-length series.
    std::map<std::string, std::vector<CentralityRecord>> by_actor;
    std::vector<Window> windows;
};

CentralitySeries build_series(const std::vector<CommGraph>& graphs,
                              const std::vector<std::string>& roster);

// Strength classes over symmetrized weights: weak iff weight < max/2.
// Sorted by endpoints; empty graph -> empty list.
std::vector<EdgeStrength> classify_edges(const CommGraph& graph);

}  // namespace stsc
