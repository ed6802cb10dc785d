#pragma once

#include "hotspot/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hotspot {

enum class Hypothesis { Epidemic, UniformNull };

const char* to_string(Hypothesis h) noexcept;
std::optional<Hypothesis> parse_hypothesis(std::string_view text);

struct ScenarioParams {
    double alpha = 0.1; // infected fraction
    double q = 1.0;     // true-reporting probability
    double f = 0.0;     // extra uniform reporters per true reporter
    std::size_t num_seeds = 1;

    // ceil(alpha * n)
    std::size_t infection_size(std::size_t n) const;
    // (f + 1) q alpha, the matched null reporting probability
    double null_probability() const noexcept { return (f + 1.0) * q * alpha; }
    // Throws unless the invariants hold for an n-node graph.
    void validate(std::size_t n) const;
};

struct EpidemicOutcome {
    std::vector<NodeId> seeds;
    std::vector<NodeId> infected; // infection order, seeds first
    std::vector<double> infection_time;
    bool truncated = false; // seed components exhausted before the target

    // Rank of every node in the infection order; non-infected nodes map to
    // kNotInfected.
    static constexpr std::uint32_t kNotInfected = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> infection_rank(std::size_t n) const;
};

struct ReportSnapshot {
    std::size_t num_nodes = 0;
    std::optional<Hypothesis> truth; // empty for snapshots of unknown origin
    std::vector<NodeId> reporting;   // sorted ascending
    std::vector<NodeId> true_reporters;
    std::vector<NodeId> infected;
    bool extras_clamped = false;
};

// Sorted reporting ids plus an O(1) membership bitmap.
class ReportingSet {
public:
    ReportingSet() = default;
    ReportingSet(std::size_t num_nodes, std::span<const NodeId> ids);
    explicit ReportingSet(const ReportSnapshot& snap) : ReportingSet(snap.num_nodes, snap.reporting) {}

    std::size_t num_nodes() const noexcept { return member_.size(); }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    bool contains(NodeId v) const noexcept { return v < member_.size() && member_[v] != 0; }
    std::span<const NodeId> ids() const noexcept { return ids_; }

    void insert(NodeId v);

private:
    std::vector<NodeId> ids_;
    std::vector<std::uint8_t> member_;
};

// ---- operations -----------------------------------------------------------

// SI growth with unit-rate exponential edge clocks, i.e. first-passage
// percolation from the seed set with i.i.d. Exp(1) weights. Stops once
// target_size nodes are infected or the next infection would occur after
// max_time.
EpidemicOutcome simulate_si(const Graph& g, std::span<const NodeId> seeds, std::size_t target_size,
                            std::uint64_t seed, double max_time = std::numeric_limits<double>::infinity());

ReportSnapshot apply_reporting(const EpidemicOutcome& outcome, const Graph& g, double q, double f,
                               std::uint64_t seed);

ReportSnapshot generate_uniform_null(const Graph& g, double p, std::uint64_t seed);

std::vector<NodeId> pick_seeds(const Graph& g, std::size_t num_seeds, std::uint64_t seed);
// Uniform sample without replacement from `pool`.
std::vector<NodeId> pick_seeds_from(std::span<const NodeId> pool, std::size_t num_seeds, std::uint64_t seed);

// Round half to even.
std::size_t round_count(double x);

// ---- snapshot text format -------------------------------------------------
// "truth=<label> n=<N>" header, then one reporting id per line.

std::string format_snapshot(const ReportSnapshot& snap);
ReportSnapshot parse_snapshot(std::string_view text);
void write_snapshot(const ReportSnapshot& snap, const std::filesystem::path& path);
ReportSnapshot read_snapshot(const std::filesystem::path& path);

} // namespace hotspot
