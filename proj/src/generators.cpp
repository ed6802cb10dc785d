#include "hotspot/error.hpp"
#include "hotspot/graph.hpp"
#include "hotspot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hotspot {

namespace {

constexpr std::size_t kMaxNodes = std::numeric_limits<NodeId>::max() - 1;

std::size_t checked_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > kMaxNodes / base)
            fail(ErrorCode::Overflow, "generated graph exceeds the supported node count");
        r *= base;
    }
    return r;
}

} // namespace

// Batagelj-Brandes geometric skipping over the lower triangle: O(n + m).
Graph gen_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    require(n >= 1, "erdos-renyi: n must be >= 1");
    require(p >= 0.0 && p <= 1.0, "erdos-renyi: p must lie in [0, 1]");
    require(n <= kMaxNodes, "erdos-renyi: n too large");

    std::vector<Edge> edges;
    if (p > 0.0 && n > 1) {
        edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 * 1.1) + 16);
        if (p >= 1.0) {
            for (NodeId v = 1; v < n; ++v)
                for (NodeId w = 0; w < v; ++w)
                    edges.emplace_back(v, w);
        } else {
            Rng rng(seed);
            const double log_q = std::log1p(-p);
            std::int64_t v = 1, w = -1;
            const auto nn = static_cast<std::int64_t>(n);
            while (v < nn) {
                const double r = uniform01(rng);
                w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
                while (w >= v && v < nn) {
                    w -= v;
                    ++v;
                }
                if (v < nn)
                    edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
            }
        }
    }
    return Graph::from_edges(n, edges);
}

Graph gen_grid(std::size_t dim, std::size_t side) {
    require(dim >= 1, "grid: dimension must be >= 1");
    require(side >= 2, "grid: side must be >= 2");
    const std::size_t n = checked_pow(side, dim);

    std::vector<Edge> edges;
    edges.reserve(dim * n);
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < dim; ++axis) {
        for (std::size_t v = 0; v < n; ++v) {
            const std::size_t coord = (v / stride) % side;
            if (coord + 1 < side)
                edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(v + stride));
        }
        stride *= side;
    }
    return Graph::from_edges(n, edges);
}

Graph gen_tree(std::size_t degree, std::size_t depth) {
    require(degree >= 2, "tree: degree must be >= 2");
    require(depth >= 1, "tree: depth must be >= 1");
    const std::size_t leaves = checked_pow(degree, depth + 1);
    const std::size_t n = (leaves - 1) / (degree - 1);

    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (std::size_t v = 1; v < n; ++v)
        edges.emplace_back(static_cast<NodeId>((v - 1) / degree), static_cast<NodeId>(v));
    return Graph::from_edges(n, edges);
}

// Configuration model over a discrete power-law degree sequence on
// [1, floor(sqrt(n))]. Stub pairs that form self-loops or repeat an edge are
// discarded.
Graph gen_power_law(std::size_t n, double exponent, std::uint64_t seed) {
    require(n >= 10, "power-law: n must be >= 10");
    require(exponent > 2.0, "power-law: exponent must be > 2");
    require(n <= kMaxNodes, "power-law: n too large");

    Rng rng(seed);
    const auto max_degree = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    std::vector<double> cdf(max_degree);
    double acc = 0.0;
    for (std::size_t x = 1; x <= max_degree; ++x) {
        acc += std::pow(static_cast<double>(x), -exponent);
        cdf[x - 1] = acc;
    }
    for (auto& c : cdf)
        c /= acc;

    std::vector<std::size_t> degree(n);
    std::size_t total = 0;
    for (auto& d : degree) {
        const double u = uniform01(rng);
        d = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) + 1;
        d = std::min(d, max_degree);
        total += d;
    }
    if (total % 2 == 1)
        ++degree[uniform_below(rng, n)];

    std::vector<NodeId> stubs;
    stubs.reserve(total + 1);
    for (NodeId v = 0; v < n; ++v)
        stubs.insert(stubs.end(), degree[v], v);
    for (std::size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[uniform_below(rng, i)]);

    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
        edges.emplace_back(stubs[i], stubs[i + 1]);
    return Graph::from_edges(n, edges);
}

} // namespace hotspot
