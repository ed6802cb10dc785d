#include "hotspot/error.hpp"
#include "hotspot/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hotspot {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <class T>
bool parse_uint(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

} // namespace

std::string format_snapshot(const ReportSnapshot& snap) {
    std::ostringstream out;
    out << "truth=" << (snap.truth ? to_string(*snap.truth) : "unknown") << " n=" << snap.num_nodes << '\n';
    for (NodeId v : snap.reporting)
        out << v << '\n';
    return out.str();
}

ReportSnapshot parse_snapshot(std::string_view text) {
    ReportSnapshot snap;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty())
            continue;
        const std::string where = "snapshot line " + std::to_string(line_no) + ": ";

        if (!have_header) {
            bool have_truth = false, have_n = false;
            std::size_t pos = 0;
            while (pos < line.size()) {
                std::size_t sp = line.find_first_of(" \t", pos);
                if (sp == std::string_view::npos)
                    sp = line.size();
                std::string_view tok = line.substr(pos, sp - pos);
                pos = sp + 1;
                if (tok.empty())
                    continue;
                if (tok.starts_with("truth=")) {
                    auto label = tok.substr(6);
                    if (label != "unknown") {
                        snap.truth = parse_hypothesis(label);
                        if (!snap.truth)
                            fail(ErrorCode::Parse, where + "unknown truth label '" + std::string(label) + "'");
                    }
                    have_truth = true;
                } else if (tok.starts_with("n=")) {
                    if (!parse_uint(tok.substr(2), snap.num_nodes))
                        fail(ErrorCode::Parse, where + "bad node count");
                    have_n = true;
                } else {
                    fail(ErrorCode::Parse, where + "unexpected header token '" + std::string(tok) + "'");
                }
            }
            if (!have_truth || !have_n)
                fail(ErrorCode::Parse, where + "header must read 'truth=<label> n=<N>'");
            have_header = true;
            continue;
        }

        NodeId v = 0;
        if (!parse_uint(line, v))
            fail(ErrorCode::Parse, where + "expected a node id");
        if (v >= snap.num_nodes)
            fail(ErrorCode::Parse, where + "node id " + std::to_string(v) + " >= n");
        snap.reporting.push_back(v);
    }
    if (!have_header)
        fail(ErrorCode::Parse, "snapshot: missing header");
    std::sort(snap.reporting.begin(), snap.reporting.end());
    snap.reporting.erase(std::unique(snap.reporting.begin(), snap.reporting.end()), snap.reporting.end());
    return snap;
}

void write_snapshot(const ReportSnapshot& snap, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorCode::Io, "cannot write " + path.string());
    out << format_snapshot(snap);
    if (!out)
        fail(ErrorCode::Io, "write failure on " + path.string());
}

ReportSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open snapshot " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_snapshot(buf.str());
}

} // namespace hotspot
