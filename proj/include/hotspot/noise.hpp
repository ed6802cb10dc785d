#pragma once

#include "hotspot/neighborhood.hpp"

#include <cstdint>

namespace hotspot {

// Misperceived hop distances: for each ordered (observer, target) pair with
// true distance > magnitude, with probability flip_prob the observer sees
// true +/- magnitude, sign equiprobable.
struct DistanceNoise {
    double flip_prob = 0.0;
    std::uint32_t magnitude = 1;

    void validate() const;
};

// Neighborhood queries through an observer's perceived distances. The
// perturbation of a pair is a pure function of (seed, observer, target), so
// re-querying never re-rolls and i's view of j is independent of j's view of i.
class NoisyNeighborhoods final : public NeighborhoodSource {
public:
    NoisyNeighborhoods(const Graph& g, DistanceNoise noise, std::uint64_t seed);

    const Graph& graph() const noexcept override { return *g_; }
    // Members ordered by (perceived distance, id); `distance` holds perceived values.
    void nearest(NodeId i, std::size_t k, Neighborhood& out) const override;
    void ball(NodeId i, std::size_t l, Neighborhood& out) const override;

    std::uint32_t perceived_distance(NodeId observer, NodeId target, std::uint32_t true_distance) const noexcept;

private:
    const Graph* g_;
    DistanceNoise noise_;
    std::uint64_t seed_;
};

} // namespace hotspot
