#include "stsc/metrics.hpp"

#include <algorithm>
#include <deque>

namespace stsc {

UGraph symmetrize(const CommGraph& graph) {
    UGraph u;
    u.nodes = graph.nodes;
    for (const auto& [pair, w] : graph.edges) {
        const auto& [a, b] = pair;
        if (a == b) continue;
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        u.edges[key] += w;
    }
    return u;
}

std::map<std::string, Degrees> degree_centrality(const CommGraph& graph) {
    std::map<std::string, std::set<std::string>> out_nbrs, in_nbrs;
    std::map<std::string, Degrees> result;
    for (const auto& node : graph.nodes) result[node];  // zero-init every node
    for (const auto& [pair, w] : graph.edges) {
        (void)w;
        out_nbrs[pair.first].insert(pair.second);
        in_nbrs[pair.second].insert(pair.first);
    }
    for (auto& [node, deg] : result) {
        const auto& outs = out_nbrs[node];
        const auto& ins = in_nbrs[node];
        deg.out = static_cast<int>(outs.size());
        deg.in = static_cast<int>(ins.size());
        std::set<std::string> all(outs);
        all.insert(ins.begin(), ins.end());
        deg.total = static_cast<int>(all.size());
    }
    return result;
}

namespace {

using Adjacency = std::map<std::string, std::vector<std::string>>;

Adjacency adjacency(const UGraph& graph) {
    Adjacency adj;
    for (const auto& node : graph.nodes) adj[node];
    for (const auto& [pair, w] : graph.edges) {
        (void)w;
        adj[pair.first].push_back(pair.second);
        adj[pair.second].push_back(pair.first);
    }
    // Each neighbour list mixes both endpoint positions; sort for
    // deterministic traversal.
    for (auto& [node, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

// BFS from source filling sigma/dist/preds; `order` gets nodes in
// non-decreasing distance (the accumulation order for Brandes, reversed).
PathCounts bfs_paths(const UGraph& graph, const Adjacency& adj, const std::string& source,
                     std::vector<std::string>* order) {
    PathCounts pc;
    for (const auto& node : graph.nodes) {
        pc.sigma[node] = 0.0;
        pc.dist[node] = -1;
        pc.preds[node];
    }
    pc.sigma[source] = 1.0;
    pc.dist[source] = 0;
    std::deque<std::string> queue{source};
    while (!queue.empty()) {
        std::string v = std::move(queue.front());
        queue.pop_front();
        if (order) order->push_back(v);
        auto it = adj.find(v);
        if (it == adj.end()) continue;
        for (const auto& w : it->second) {
            if (pc.dist[w] < 0) {
                pc.dist[w] = pc.dist[v] + 1;
                queue.push_back(w);
            }
            if (pc.dist[w] == pc.dist[v] + 1) {
                pc.sigma[w] += pc.sigma[v];
                pc.preds[w].push_back(v);
            }
        }
    }
    return pc;
}

}  // namespace

PathCounts single_source_paths(const UGraph& graph, const std::string& source) {
    return bfs_paths(graph, adjacency(graph), source, nullptr);
}

std::map<std::string, Betweenness> betweenness(const UGraph& graph) {
    // Brandes (2001): one BFS per source, dependency accumulation in reverse
    // BFS order. Each unordered pair is seen from both endpoints, so raw
    // scores are halved at the end.
    std::map<std::string, Betweenness> result;
    for (const auto& node : graph.nodes) result[node];
    size_t n = graph.nodes.size();
    if (n < 3) return result;

    Adjacency adj = adjacency(graph);
    std::map<std::string, double> cb;
    for (const auto& node : graph.nodes) cb[node] = 0.0;

    for (const auto& s : graph.nodes) {
        std::vector<std::string> order;
        PathCounts pc = bfs_paths(graph, adj, s, &order);
        std::map<std::string, double> delta;
        for (const auto& node : graph.nodes) delta[node] = 0.0;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::string& w = *it;
            for (const auto& v : pc.preds[w])
                delta[v] += pc.sigma[v] / pc.sigma[w] * (1.0 + delta[w]);
            if (w != s) cb[w] += delta[w];
        }
    }

    double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (auto& [node, b] : result) {
        b.raw = cb[node] / 2.0;  // unordered pairs
        b.norm = b.raw / norm;
    }
    return result;
}

CentralitySeries build_series(const std::vector<CommGraph>& graphs,
                              const std::vector<std::string>& roster) {
    CentralitySeries series;
    std::set<std::string> actors(roster.begin(), roster.end());
    for (const auto& g : graphs) {
        series.windows.push_back(g.window);
        actors.insert(g.nodes.begin(), g.nodes.end());
    }
    for (const auto& a : actors) series.by_actor[a];

    for (const auto& g : graphs) {
        auto degrees = degree_centrality(g);
        auto btw = betweenness(symmetrize(g));
        for (const auto& a : actors) {
            CentralityRecord rec;
            rec.actor = a;
            rec.window = g.window;
            if (auto it = degrees.find(a); it != degrees.end()) {
                rec.in_degree = it->second.in;
                rec.out_degree = it->second.out;
                rec.total_degree = it->second.total;
            }
            if (auto it = btw.find(a); it != btw.end()) {
                rec.betweenness_raw = it->second.raw;
                rec.betweenness_norm = it->second.norm;
            }
            series.by_actor[a].push_back(std::move(rec));
        }
    }
    return series;
}

std::vector<EdgeStrength> classify_edges(const CommGraph& graph) {
    std::vector<EdgeStrength> out;
    UGraph u = symmetrize(graph);
    if (u.edges.empty()) return out;
    int64_t max_weight = 0;
    for (const auto& [pair, w] : u.edges) max_weight = std::max(max_weight, w);
    for (const auto& [pair, w] : u.edges) {
        EdgeStrength es;
        es.edge = pair;
        es.weight = w;
        es.cls = 2 * w < max_weight ? EdgeClass::weak : EdgeClass::strong;
        out.push_back(std::move(es));
    }
    return out;  // map iteration is already sorted by endpoints
}

}  // namespace stsc
