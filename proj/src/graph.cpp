#include "hotspot/graph.hpp"

#include "hotspot/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hotspot {

Graph Graph::from_edges(std::size_t num_nodes, std::span<const Edge> edges, BuildStats* stats) {
    require(num_nodes < std::numeric_limits<NodeId>::max(), "graph too large for 32-bit node ids");

    BuildStats local;
    std::vector<Edge> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        require(u < num_nodes && v < num_nodes, "edge endpoint out of range");
        if (u == v) {
            ++local.self_loops;
            continue;
        }
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    auto last = std::unique(arcs.begin(), arcs.end());
    // every dropped undirected duplicate removes two arcs
    local.duplicates = static_cast<std::size_t>(arcs.end() - last) / 2;
    arcs.erase(last, arcs.end());

    Graph g;
    g.offsets_.assign(num_nodes + 1, 0);
    for (const auto& a : arcs)
        ++g.offsets_[a.first + 1];
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.adjacency_.resize(arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i)
        g.adjacency_[i] = arcs[i].second;

    if (stats)
        *stats = local;
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

std::vector<std::uint32_t> Graph::component_labels() const {
    const std::size_t n = num_nodes();
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(n, unset);
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != unset)
            continue;
        label[s] = s;
        stack.assign(1, s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : neighbors(u))
                if (label[v] == unset) {
                    label[v] = s;
                    stack.push_back(v);
                }
        }
    }
    return label;
}

std::vector<NodeId> Graph::largest_component() const {
    auto label = component_labels();
    std::vector<std::size_t> size(num_nodes(), 0);
    for (auto l : label)
        ++size[l];
    if (size.empty())
        return {};
    // ties go to the component with the smallest member
    auto best = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<NodeId> out;
    out.reserve(size[best]);
    for (NodeId v = 0; v < label.size(); ++v)
        if (label[v] == best)
            out.push_back(v);
    return out;
}

} // namespace hotspot
