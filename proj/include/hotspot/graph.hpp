#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace hotspot {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

struct BuildStats {
    std::size_t duplicates = 0;
    std::size_t self_loops = 0;
};

// Immutable undirected simple graph in compressed adjacency form. Neighbor
// lists are sorted ascending; construction symmetrizes the input and drops
// self-loops and repeated edges.
class Graph {
public:
    Graph() = default;

    static Graph from_edges(std::size_t num_nodes, std::span<const Edge> edges, BuildStats* stats = nullptr);

    std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t num_edges() const noexcept { return adjacency_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const noexcept;

    std::vector<Edge> edges() const;

    // Connected component label per node, components numbered by smallest member.
    std::vector<std::uint32_t> component_labels() const;
    std::vector<NodeId> largest_component() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
};

// ---- generators -----------------------------------------------------------

Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed);
Graph gen_grid(std::size_t dim, std::size_t side);
// Full `degree`-ary tree with levels 0..depth; node v has children
// v*degree+1 .. v*degree+degree, so ids increase with level.
Graph gen_tree(std::size_t degree, std::size_t depth);
Graph gen_power_law(std::size_t n, double exponent, std::uint64_t seed);

// ---- edge-list I/O --------------------------------------------------------

struct EdgeListResult {
    Graph graph;
    BuildStats stats;
    // original id of each dense node when loaded with compaction, else empty
    std::vector<std::uint64_t> original_ids;
};

EdgeListResult load_edge_list(const std::filesystem::path& path, bool compact = false);
EdgeListResult parse_edge_list(std::string_view text, bool compact = false);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

} // namespace hotspot
