#pragma once

// Brute-force reference implementations used to cross-check the library.
// Deliberately naive: dense matrices, Floyd-Warshall, full sorts.

#include "hotspot/graph.hpp"
#include "hotspot/neighborhood.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using hotspot::Graph;
using hotspot::NodeId;

constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> all_pairs(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (NodeId j : g.neighbors(static_cast<NodeId>(i)))
            d[i][j] = 1;
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][m] + d[m][j] < d[i][j])
                    d[i][j] = d[i][m] + d[m][j];
    return d;
}

inline std::vector<NodeId> nearest(const std::vector<std::vector<int>>& d, NodeId i, std::size_t k) {
    std::vector<std::pair<int, NodeId>> order;
    for (std::size_t j = 0; j < d.size(); ++j)
        if (j != i && d[i][j] < kInf)
            order.push_back({d[i][j], static_cast<NodeId>(j)});
    std::sort(order.begin(), order.end());
    std::vector<NodeId> out;
    for (std::size_t r = 0; r < std::min(k, order.size()); ++r)
        out.push_back(order[r].second);
    return out;
}

inline std::vector<NodeId> ball(const std::vector<std::vector<int>>& d, NodeId i, std::size_t l) {
    std::vector<std::pair<int, NodeId>> order;
    for (std::size_t j = 0; j < d.size(); ++j)
        if (j != i && d[i][j] <= static_cast<int>(l))
            order.push_back({d[i][j], static_cast<NodeId>(j)});
    std::sort(order.begin(), order.end());
    std::vector<NodeId> out;
    for (const auto& [dist, v] : order)
        out.push_back(v);
    return out;
}

inline std::size_t hotspots(const Graph& g, const std::vector<bool>& reporting, hotspot::NeighborhoodMode mode,
                            std::size_t k_or_l, std::size_t s) {
    const auto d = all_pairs(g);
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        if (!reporting[i])
            continue;
        const auto members = mode == hotspot::NeighborhoodMode::NearestNeighbors
                                 ? nearest(d, static_cast<NodeId>(i), k_or_l)
                                 : ball(d, static_cast<NodeId>(i), k_or_l);
        std::size_t hits = 0;
        for (NodeId v : members)
            hits += reporting[v] ? 1 : 0;
        if (members.size() >= s && hits >= s)
            ++count;
    }
    return count;
}

// Independent of the library generators: one Bernoulli draw per pair.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<hotspot::Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng))
                edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    return Graph::from_edges(n, edges);
}

inline Graph path(std::size_t n) {
    std::vector<hotspot::Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i)
        e.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
    return Graph::from_edges(n, e);
}

inline Graph cycle(std::size_t n) {
    std::vector<hotspot::Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        e.push_back({static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)});
    return Graph::from_edges(n, e);
}

inline Graph star(std::size_t leaves) {
    std::vector<hotspot::Edge> e;
    for (std::size_t i = 1; i <= leaves; ++i)
        e.push_back({0, static_cast<NodeId>(i)});
    return Graph::from_edges(leaves + 1, e);
}

inline Graph complete(std::size_t n) {
    std::vector<hotspot::Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            e.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    return Graph::from_edges(n, e);
}

} // namespace oracle
