#include "hotspot/neighborhood.hpp"

namespace hotspot {

const char* to_string(NeighborhoodMode mode) noexcept {
    return mode == NeighborhoodMode::NearestNeighbors ? "nn" : "ball";
}

void BfsWorkspace::prepare(std::size_t n) {
    if (stamp_.size() < n)
        stamp_.resize(n, 0);
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
}

BfsWorkspace& thread_workspace() {
    thread_local BfsWorkspace ws;
    return ws;
}

void nearest_neighbors(const Graph& g, NodeId i, std::size_t k, Neighborhood& out, BfsWorkspace& ws) {
    out.center = i;
    out.mode = NeighborhoodMode::NearestNeighbors;
    out.param = k;
    out.members.clear();
    out.distance.clear();
    if (k == 0)
        return;
    bfs_layers(g, i, std::numeric_limits<std::size_t>::max(), ws, [&](NodeId v, std::uint32_t d) {
        out.members.push_back(v);
        out.distance.push_back(d);
        return out.members.size() < k;
    });
}

void ball(const Graph& g, NodeId i, std::size_t l, Neighborhood& out, BfsWorkspace& ws) {
    out.center = i;
    out.mode = NeighborhoodMode::Ball;
    out.param = l;
    out.members.clear();
    out.distance.clear();
    bfs_layers(g, i, l, ws, [&](NodeId v, std::uint32_t d) {
        out.members.push_back(v);
        out.distance.push_back(d);
        return true;
    });
}

Neighborhood nearest_neighbors(const Graph& g, NodeId i, std::size_t k) {
    Neighborhood out;
    nearest_neighbors(g, i, k, out, thread_workspace());
    return out;
}

Neighborhood ball(const Graph& g, NodeId i, std::size_t l) {
    Neighborhood out;
    ball(g, i, l, out, thread_workspace());
    return out;
}

void ExactNeighborhoods::nearest(NodeId i, std::size_t k, Neighborhood& out) const {
    nearest_neighbors(*g_, i, k, out, thread_workspace());
}

void ExactNeighborhoods::ball(NodeId i, std::size_t l, Neighborhood& out) const {
    hotspot::ball(*g_, i, l, out, thread_workspace());
}

} // namespace hotspot
