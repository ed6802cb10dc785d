#include "hotspot/scenario.hpp"

#include "hotspot/error.hpp"
#include "hotspot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace hotspot {

const char* to_string(Hypothesis h) noexcept {
    return h == Hypothesis::Epidemic ? "Epidemic" : "UniformNull";
}

std::optional<Hypothesis> parse_hypothesis(std::string_view text) {
    if (text == "Epidemic" || text == "epidemic")
        return Hypothesis::Epidemic;
    if (text == "UniformNull" || text == "uniform" || text == "null")
        return Hypothesis::UniformNull;
    return std::nullopt;
}

std::size_t round_count(double x) {
    if (!(x > 0.0))
        return 0;
    const double fl = std::floor(x);
    const double frac = x - fl;
    auto r = static_cast<std::size_t>(fl);
    if (frac > 0.5 || (frac == 0.5 && r % 2 == 1))
        ++r;
    return r;
}

std::size_t ScenarioParams::infection_size(std::size_t n) const {
    // guard against ceil(0.3 * 1000) landing on 301 through representation error
    const double raw = alpha * static_cast<double>(n);
    const double nearest = std::round(raw);
    const double target = std::abs(raw - nearest) < 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
    return std::min(n, static_cast<std::size_t>(target));
}

void ScenarioParams::validate(std::size_t n) const {
    require(alpha > 0.0 && alpha <= 1.0, "scenario: alpha must lie in (0, 1]");
    require(q >= 0.0 && q <= 1.0, "scenario: q must lie in [0, 1]");
    require(f >= 0.0, "scenario: f must be >= 0");
    require(num_seeds >= 1, "scenario: at least one seed required");
    require(infection_size(n) >= num_seeds, "scenario: ceil(alpha N) must be >= num_seeds");
    if (null_probability() > 1.0)
        fail(ErrorCode::Infeasible, "scenario: (f+1) q alpha exceeds 1, so the matched null probability is not a probability");
}

std::vector<std::uint32_t> EpidemicOutcome::infection_rank(std::size_t n) const {
    std::vector<std::uint32_t> rank(n, kNotInfected);
    for (std::size_t i = 0; i < infected.size(); ++i)
        rank[infected[i]] = static_cast<std::uint32_t>(i);
    return rank;
}

ReportingSet::ReportingSet(std::size_t num_nodes, std::span<const NodeId> ids)
    : ids_(ids.begin(), ids.end()), member_(num_nodes, 0) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    for (NodeId v : ids_) {
        require(v < num_nodes, "reporting node id out of range");
        member_[v] = 1;
    }
}

void ReportingSet::insert(NodeId v) {
    require(v < member_.size(), "reporting node id out of range");
    if (member_[v])
        return;
    member_[v] = 1;
    ids_.insert(std::upper_bound(ids_.begin(), ids_.end(), v), v);
}

namespace {

// Floyd's algorithm: k distinct values in [0, n).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(k);
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(k * 2);
    for (std::size_t j = n - k; j < n; ++j) {
        const std::size_t t = static_cast<std::size_t>(uniform_below(rng, j + 1));
        const std::size_t pick = chosen.insert(t).second ? t : j;
        if (pick == j)
            chosen.insert(j);
        out.push_back(pick);
    }
    // Floyd's set is uniform but its order is not
    for (std::size_t i = out.size(); i > 1; --i)
        std::swap(out[i - 1], out[static_cast<std::size_t>(uniform_below(rng, i))]);
    return out;
}

} // namespace

std::vector<NodeId> pick_seeds_from(std::span<const NodeId> pool, std::size_t num_seeds, std::uint64_t seed) {
    require(num_seeds >= 1 && num_seeds <= pool.size(), "pick_seeds: need 1 <= num_seeds <= pool size");
    Rng rng(seed);
    std::vector<NodeId> out;
    out.reserve(num_seeds);
    for (auto idx : sample_indices(pool.size(), num_seeds, rng))
        out.push_back(pool[idx]);
    return out;
}

std::vector<NodeId> pick_seeds(const Graph& g, std::size_t num_seeds, std::uint64_t seed) {
    const std::size_t n = g.num_nodes();
    require(num_seeds >= 1 && num_seeds <= n, "pick_seeds: need 1 <= num_seeds <= N");
    Rng rng(seed);
    std::vector<NodeId> out;
    out.reserve(num_seeds);
    for (auto idx : sample_indices(n, num_seeds, rng))
        out.push_back(static_cast<NodeId>(idx));
    return out;
}

EpidemicOutcome simulate_si(const Graph& g, std::span<const NodeId> seeds, std::size_t target_size,
                            std::uint64_t seed, double max_time) {
    const std::size_t n = g.num_nodes();
    require(!seeds.empty(), "simulate_si: seed set must be nonempty");
    require(target_size >= seeds.size(), "simulate_si: target_size must be >= number of seeds");

    EpidemicOutcome out;
    std::vector<std::uint8_t> infected(n, 0);
    for (NodeId s : seeds) {
        require(s < n, "simulate_si: seed out of range");
        require(!infected[s], "simulate_si: seeds must be distinct");
        infected[s] = 1;
    }
    out.seeds.assign(seeds.begin(), seeds.end());
    out.infected.reserve(std::min(target_size, n));
    out.infection_time.reserve(std::min(target_size, n));

    using Event = std::pair<double, NodeId>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> clock;
    Rng rng(seed);

    auto infect = [&](NodeId u, double t) {
        out.infected.push_back(u);
        out.infection_time.push_back(t);
        for (NodeId v : g.neighbors(u))
            if (!infected[v])
                clock.emplace(t + exp1(rng), v);
    };
    for (NodeId s : seeds)
        infect(s, 0.0);

    while (out.infected.size() < target_size) {
        if (clock.empty()) {
            out.truncated = true;
            break;
        }
        auto [t, v] = clock.top();
        if (t > max_time)
            break;
        clock.pop();
        if (infected[v])
            continue;
        infected[v] = 1;
        infect(v, t);
    }
    return out;
}

ReportSnapshot apply_reporting(const EpidemicOutcome& outcome, const Graph& g, double q, double f,
                               std::uint64_t seed) {
    require(q >= 0.0 && q <= 1.0, "apply_reporting: q must lie in [0, 1]");
    require(f >= 0.0, "apply_reporting: f must be >= 0");
    const std::size_t n = g.num_nodes();
    Rng rng(seed);

    ReportSnapshot snap;
    snap.num_nodes = n;
    snap.truth = Hypothesis::Epidemic;
    snap.infected = outcome.infected;
    std::sort(snap.infected.begin(), snap.infected.end());

    std::vector<std::uint8_t> reports(n, 0);
    for (NodeId v : outcome.infected)
        if (bernoulli(rng, q)) {
            snap.true_reporters.push_back(v);
            reports[v] = 1;
        }
    std::sort(snap.true_reporters.begin(), snap.true_reporters.end());

    const std::size_t pool = n - snap.true_reporters.size();
    std::size_t extras = round_count(f * static_cast<double>(snap.true_reporters.size()));
    if (extras > pool) {
        extras = pool;
        snap.extras_clamped = true;
    }

    snap.reporting = snap.true_reporters;
    if (extras > 0) {
        if (extras * 2 <= pool) {
            std::size_t drawn = 0;
            while (drawn < extras) {
                const auto v = static_cast<NodeId>(uniform_below(rng, n));
                if (reports[v])
                    continue;
                reports[v] = 2;
                snap.reporting.push_back(v);
                ++drawn;
            }
        } else {
            std::vector<NodeId> rest;
            rest.reserve(pool);
            for (NodeId v = 0; v < n; ++v)
                if (!reports[v])
                    rest.push_back(v);
            for (auto idx : sample_indices(rest.size(), extras, rng))
                snap.reporting.push_back(rest[idx]);
        }
        std::sort(snap.reporting.begin(), snap.reporting.end());
    }
    return snap;
}

ReportSnapshot generate_uniform_null(const Graph& g, double p, std::uint64_t seed) {
    require(p >= 0.0 && p <= 1.0, "uniform null: p must lie in [0, 1]");
    Rng rng(seed);
    ReportSnapshot snap;
    snap.num_nodes = g.num_nodes();
    snap.truth = Hypothesis::UniformNull;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (bernoulli(rng, p))
            snap.reporting.push_back(v);
    return snap;
}

} // namespace hotspot
