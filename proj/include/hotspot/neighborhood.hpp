#pragma once

#include "hotspot/graph.hpp"

#include <algorithm>
#include <limits>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hotspot {

enum class NeighborhoodMode { NearestNeighbors, Ball };

const char* to_string(NeighborhoodMode mode) noexcept;

struct Neighborhood {
    NodeId center = 0;
    NeighborhoodMode mode = NeighborhoodMode::NearestNeighbors;
    std::size_t param = 0; // K or l
    std::vector<NodeId> members;        // ordered by (distance, id), center excluded
    std::vector<std::uint32_t> distance; // parallel to members

    std::size_t size() const noexcept { return members.size(); }
};

// Reusable visited marks for BFS. Sized lazily to the graph; clearing is O(1)
// through an epoch counter.
class BfsWorkspace {
public:
    void prepare(std::size_t n);
    bool visit(NodeId v) noexcept {
        if (stamp_[v] == epoch_)
            return false;
        stamp_[v] = epoch_;
        return true;
    }
    void mark(NodeId v) noexcept { stamp_[v] = epoch_; }
    bool visited(NodeId v) const noexcept { return stamp_[v] == epoch_; }

    std::vector<NodeId> frontier;
    std::vector<NodeId> next;

private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

BfsWorkspace& thread_workspace();

// K nearest neighbors: BFS by hop distance, the last partially used distance
// shell is cut by ascending id. Returns every reachable node when fewer than k.
Neighborhood nearest_neighbors(const Graph& g, NodeId i, std::size_t k);
void nearest_neighbors(const Graph& g, NodeId i, std::size_t k, Neighborhood& out, BfsWorkspace& ws);

// Nodes at hop distance 1..l.
Neighborhood ball(const Graph& g, NodeId i, std::size_t l);
void ball(const Graph& g, NodeId i, std::size_t l, Neighborhood& out, BfsWorkspace& ws);

// Calls visit(node, distance) for every node at distance 1..max_depth in
// (distance, id) order. Visiting stops early when visit returns false.
template <class Visit>
void bfs_layers(const Graph& g, NodeId i, std::size_t max_depth, BfsWorkspace& ws, Visit&& visit);

// Source of neighborhoods for the detector. Exact BFS by default; the harness
// substitutes a view with misperceived distances.
class NeighborhoodSource {
public:
    virtual ~NeighborhoodSource() = default;
    virtual const Graph& graph() const noexcept = 0;
    virtual void nearest(NodeId i, std::size_t k, Neighborhood& out) const = 0;
    virtual void ball(NodeId i, std::size_t l, Neighborhood& out) const = 0;

    void query(NeighborhoodMode mode, NodeId i, std::size_t param, Neighborhood& out) const {
        if (mode == NeighborhoodMode::NearestNeighbors)
            nearest(i, param, out);
        else
            ball(i, param, out);
    }
};

class ExactNeighborhoods final : public NeighborhoodSource {
public:
    explicit ExactNeighborhoods(const Graph& g) : g_(&g) {}
    const Graph& graph() const noexcept override { return *g_; }
    void nearest(NodeId i, std::size_t k, Neighborhood& out) const override;
    void ball(NodeId i, std::size_t l, Neighborhood& out) const override;

private:
    const Graph* g_;
};

// ---- template implementation ----------------------------------------------

template <class Visit>
void bfs_layers(const Graph& g, NodeId i, std::size_t max_depth, BfsWorkspace& ws, Visit&& visit) {
    ws.prepare(g.num_nodes());
    ws.mark(i);
    ws.frontier.assign(1, i);
    for (std::size_t depth = 1; depth <= max_depth && !ws.frontier.empty(); ++depth) {
        ws.next.clear();
        for (NodeId u : ws.frontier)
            for (NodeId v : g.neighbors(u))
                if (ws.visit(v))
                    ws.next.push_back(v);
        std::sort(ws.next.begin(), ws.next.end());
        for (NodeId v : ws.next)
            if (!visit(v, static_cast<std::uint32_t>(depth)))
                return;
        std::swap(ws.frontier, ws.next);
    }
}

} // namespace hotspot
