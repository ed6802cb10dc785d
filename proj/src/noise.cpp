#include "hotspot/noise.hpp"

#include "hotspot/error.hpp"
#include "hotspot/rng.hpp"

#include <algorithm>
#include <limits>

namespace hotspot {

void DistanceNoise::validate() const {
    require(flip_prob >= 0.0 && flip_prob <= 1.0, "noise: flip probability must lie in [0, 1]");
    require(magnitude >= 1, "noise: magnitude must be >= 1");
}

NoisyNeighborhoods::NoisyNeighborhoods(const Graph& g, DistanceNoise noise, std::uint64_t seed)
    : g_(&g), noise_(noise), seed_(seed) {
    noise_.validate();
}

std::uint32_t NoisyNeighborhoods::perceived_distance(NodeId observer, NodeId target,
                                                     std::uint32_t true_distance) const noexcept {
    if (true_distance <= noise_.magnitude || noise_.flip_prob <= 0.0)
        return true_distance;
    const std::uint64_t h = derive_seed(seed_, {observer, target});
    if (uniform01(h) >= noise_.flip_prob)
        return true_distance;
    // the top 53 bits decided the flip; use the lowest bit for the sign
    return (h & 1) ? true_distance + noise_.magnitude : true_distance - noise_.magnitude;
}

namespace {

void sort_by_perceived(Neighborhood& out) {
    std::vector<std::pair<std::uint32_t, NodeId>> tmp(out.members.size());
    for (std::size_t j = 0; j < tmp.size(); ++j)
        tmp[j] = {out.distance[j], out.members[j]};
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t j = 0; j < tmp.size(); ++j) {
        out.distance[j] = tmp[j].first;
        out.members[j] = tmp[j].second;
    }
}

} // namespace

void NoisyNeighborhoods::ball(NodeId i, std::size_t l, Neighborhood& out) const {
    out.center = i;
    out.mode = NeighborhoodMode::Ball;
    out.param = l;
    out.members.clear();
    out.distance.clear();
    if (l == 0)
        return;
    // a node can be perceived inside the ball from true distance up to l + d
    const std::size_t reach = noise_.flip_prob > 0.0 ? l + noise_.magnitude : l;
    bfs_layers(*g_, i, reach, thread_workspace(), [&](NodeId v, std::uint32_t d) {
        const auto seen = perceived_distance(i, v, d);
        if (seen <= l) {
            out.members.push_back(v);
            out.distance.push_back(seen);
        }
        return true;
    });
    sort_by_perceived(out);
}

void NoisyNeighborhoods::nearest(NodeId i, std::size_t k, Neighborhood& out) const {
    out.center = i;
    out.mode = NeighborhoodMode::NearestNeighbors;
    out.param = k;
    out.members.clear();
    out.distance.clear();
    if (k == 0)
        return;

    // Expand whole BFS layers. After finishing layer L every undiscovered node
    // is perceived at distance >= L + 1 - d, so the k best candidates are final
    // once the k-th smallest perceived distance falls below that bound.
    std::vector<std::uint32_t> best; // perceived distances seen so far
    std::uint32_t current_layer = 0;
    auto settled = [&](std::uint32_t finished_layer) {
        if (out.members.size() < k)
            return false;
        best.assign(out.distance.begin(), out.distance.end());
        std::nth_element(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(k - 1), best.end());
        const std::uint32_t kth = best[k - 1];
        const std::int64_t bound = noise_.flip_prob > 0.0
                                       ? static_cast<std::int64_t>(finished_layer) + 1 - noise_.magnitude
                                       : static_cast<std::int64_t>(finished_layer) + 1;
        return static_cast<std::int64_t>(kth) < bound;
    };
    bfs_layers(*g_, i, std::numeric_limits<std::size_t>::max(), thread_workspace(), [&](NodeId v, std::uint32_t d) {
        if (d != current_layer) {
            if (current_layer > 0 && settled(current_layer)) {
                return false;
            }
            current_layer = d;
        }
        out.members.push_back(v);
        out.distance.push_back(perceived_distance(i, v, d));
        return true;
    });
    sort_by_perceived(out);
    if (out.members.size() > k) {
        out.members.resize(k);
        out.distance.resize(k);
    }
}

} // namespace hotspot
