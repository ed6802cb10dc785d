#include "hotspot/error.hpp"
#include "hotspot/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <limits>

namespace hotspot {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Parses one unsigned decimal token starting at pos; advances past it.
bool next_id(std::string_view line, std::size_t& pos, std::uint64_t& out) {
    while (pos < line.size() && is_space(line[pos]))
        ++pos;
    if (pos >= line.size())
        return false;
    auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), out);
    if (ec != std::errc{} || ptr == line.data() + pos)
        return false;
    const auto end = static_cast<std::size_t>(ptr - line.data());
    if (end < line.size() && !is_space(line[end]))
        return false;
    pos = end;
    return true;
}

} // namespace

EdgeListResult parse_edge_list(std::string_view text, bool compact) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    std::size_t line_no = 0;
    std::uint64_t declared_nodes = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        std::size_t pos = 0;
        while (pos < line.size() && is_space(line[pos]))
            ++pos;
        if (pos == line.size())
            continue;
        if (line[pos] == '#') {
            // "# nodes N" pins the node count so trailing isolated nodes survive a round trip
            constexpr std::string_view tag = "# nodes ";
            if (line.substr(pos).starts_with(tag)) {
                std::size_t p = pos + tag.size();
                std::uint64_t declared = 0;
                if (next_id(line, p, declared))
                    declared_nodes = std::max(declared_nodes, declared);
            }
            continue;
        }

        std::uint64_t u = 0, v = 0;
        if (!next_id(line, pos, u) || !next_id(line, pos, v))
            fail(ErrorCode::Parse, "edge list line " + std::to_string(line_no) + ": expected two non-negative integers");
        while (pos < line.size() && is_space(line[pos]))
            ++pos;
        if (pos != line.size())
            fail(ErrorCode::Parse, "edge list line " + std::to_string(line_no) + ": trailing characters");
        raw.emplace_back(u, v);
        if (end == text.size())
            break;
    }

    EdgeListResult result;
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    std::size_t n = 0;
    if (compact) {
        std::vector<std::uint64_t> ids;
        ids.reserve(raw.size() * 2);
        for (auto [u, v] : raw) {
            ids.push_back(u);
            ids.push_back(v);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() >= std::numeric_limits<NodeId>::max())
            fail(ErrorCode::Overflow, "edge list has too many distinct nodes");
        auto index = [&](std::uint64_t id) {
            return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
        };
        for (auto [u, v] : raw)
            edges.emplace_back(index(u), index(v));
        n = ids.size();
        result.original_ids = std::move(ids);
    } else {
        std::uint64_t max_id = 0;
        for (auto [u, v] : raw) {
            max_id = std::max({max_id, u, v});
            if (max_id >= std::numeric_limits<NodeId>::max() - 1)
                fail(ErrorCode::Overflow, "node id exceeds 32-bit range (use compaction)");
            edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
        }
        n = raw.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
        if (declared_nodes > n) {
            if (declared_nodes >= std::numeric_limits<NodeId>::max() - 1)
                fail(ErrorCode::Overflow, "declared node count exceeds 32-bit range");
            n = static_cast<std::size_t>(declared_nodes);
        }
    }
    result.graph = Graph::from_edges(n, edges, &result.stats);
    return result;
}

EdgeListResult load_edge_list(const std::filesystem::path& path, bool compact) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open edge list " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        fail(ErrorCode::Io, "read failure on " + path.string());
    return parse_edge_list(buf.str(), compact);
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorCode::Io, "cannot write " + path.string());
    out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
    for (auto [u, v] : g.edges())
        out << u << ' ' << v << '\n';
    if (!out)
        fail(ErrorCode::Io, "write failure on " + path.string());
}

} // namespace hotspot
