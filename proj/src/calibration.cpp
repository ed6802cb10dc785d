#include "hotspot/calibration.hpp"

#include "hotspot/error.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hotspot {

ReportingProbabilities reporting_probabilities(double q, double alpha, double f) {
    require(q >= 0.0 && q <= 1.0, "reporting_probabilities: q must lie in [0, 1]");
    require(alpha > 0.0 && alpha < 1.0, "reporting_probabilities: alpha must lie in (0, 1)");
    require(f >= 0.0, "reporting_probabilities: f must be >= 0");
    ReportingProbabilities r;
    r.p = (f + 1.0) * q * alpha;
    if (r.p > 1.0)
        fail(ErrorCode::Infeasible, "infeasible parameters: (f+1) q alpha = " + std::to_string(r.p) +
                                        " > 1, so the null cannot match the epidemic's expected report count");
    r.p_in = q * (1.0 + (1.0 - q) * f * alpha / (1.0 - q * alpha));
    return r;
}

std::vector<double> interior_fractions(const Graph& g, std::span<const NodeId> infected,
                                       std::span<const std::size_t> ks) {
    require(!infected.empty(), "interior fraction: infected set must be nonempty");
    require(!ks.empty(), "interior fraction: no K values");
    const std::size_t k_max = *std::max_element(ks.begin(), ks.end());
    require(k_max >= 1, "interior fraction: K must be >= 1");

    std::vector<std::uint8_t> in_s(g.num_nodes(), 0);
    for (NodeId v : infected)
        in_s[v] = 1;

    // first_out histogram: how many infected nodes see their first uninfected
    // neighbor at NN position r (r = k_max means none within k_max)
    std::vector<std::size_t> first_out(k_max + 1, 0);
    Neighborhood nb;
    auto& ws = thread_workspace();
    for (NodeId i : infected) {
        nearest_neighbors(g, i, k_max, nb, ws);
        std::size_t r = 0;
        while (r < nb.size() && in_s[nb.members[r]])
            ++r;
        first_out[r == nb.size() ? k_max : r] += 1;
    }
    // boundary(k) = #{r < k}
    std::vector<std::size_t> cumulative(k_max + 1, 0);
    for (std::size_t r = 0; r < k_max; ++r)
        cumulative[r + 1] = cumulative[r] + first_out[r];

    std::vector<double> out;
    out.reserve(ks.size());
    const auto total = static_cast<double>(infected.size());
    for (auto k : ks) {
        require(k >= 1, "interior fraction: K must be >= 1");
        out.push_back(1.0 - static_cast<double>(cumulative[k]) / total);
    }
    return out;
}

std::vector<NodeId> boundary_set(const Graph& g, std::span<const NodeId> infected, std::size_t k) {
    require(!infected.empty(), "boundary_set: infected set must be nonempty");
    require(k >= 1, "boundary_set: K must be >= 1");
    std::vector<std::uint8_t> in_s(g.num_nodes(), 0);
    for (NodeId v : infected)
        in_s[v] = 1;
    std::vector<NodeId> out;
    Neighborhood nb;
    auto& ws = thread_workspace();
    for (NodeId i : infected) {
        nearest_neighbors(g, i, k, nb, ws);
        if (std::any_of(nb.members.begin(), nb.members.end(), [&](NodeId v) { return !in_s[v]; }))
            out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const GammaEntry* GammaProfile::find(std::size_t k) const {
    for (const auto& e : entries)
        if (e.k == k)
            return &e;
    return nullptr;
}

namespace {

GammaProfile summarize(std::span<const std::size_t> ks, const std::vector<std::vector<double>>& per_trial,
                       std::string topology) {
    GammaProfile prof;
    prof.topology = std::move(topology);
    const std::size_t trials = per_trial.size();
    for (std::size_t j = 0; j < ks.size(); ++j) {
        double sum = 0.0;
        for (const auto& t : per_trial)
            sum += t[j];
        const double mean = sum / static_cast<double>(trials);
        double ss = 0.0;
        for (const auto& t : per_trial)
            ss += (t[j] - mean) * (t[j] - mean);
        const double se = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
        prof.entries.push_back({ks[j], mean, se, trials});
    }
    return prof;
}

} // namespace

GammaProfile estimate_gamma(const Graph& g, const ScenarioParams& params, std::span<const std::size_t> ks,
                            std::size_t trials, std::uint64_t seed, std::span<const NodeId> seed_pool,
                            std::string topology) {
    require(trials >= 1, "estimate_gamma: trials must be >= 1");
    require(!ks.empty(), "estimate_gamma: no K values");
    const std::size_t n = g.num_nodes();
    params.validate(n);
    const std::size_t target = params.infection_size(n);

    std::vector<std::vector<double>> per_trial(trials);
    std::vector<std::uint8_t> truncated(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
        const auto seeds = seed_pool.empty() ? pick_seeds(g, params.num_seeds, derive_seed(seed, {t, 1}))
                                             : pick_seeds_from(seed_pool, params.num_seeds, derive_seed(seed, {t, 1}));
        const auto outcome = simulate_si(g, seeds, target, derive_seed(seed, {t, 2}));
        truncated[t] = outcome.truncated ? 1 : 0;
        per_trial[t] = interior_fractions(g, outcome.infected, ks);
    });

    auto prof = summarize(ks, per_trial, std::move(topology));
    prof.truncated_trials = static_cast<std::size_t>(std::count(truncated.begin(), truncated.end(), 1));
    return prof;
}

GammaProfile gamma_profile_from_infections(const Graph& g, std::span<const std::vector<NodeId>> infections,
                                           std::span<const std::size_t> ks, std::string topology) {
    require(!infections.empty(), "gamma profile: no infections supplied");
    std::vector<std::vector<double>> per_trial;
    per_trial.reserve(infections.size());
    for (const auto& s : infections)
        per_trial.push_back(interior_fractions(g, s, ks));
    return summarize(ks, per_trial, std::move(topology));
}

ErrorBounds error_bounds(double gamma, double q, double alpha, double f, std::size_t k, std::size_t n_reporting) {
    require(gamma > 0.0 && gamma <= 1.0, "error_bounds: gamma must lie in (0, 1]");
    require(k >= 1, "error_bounds: K must be >= 1");
    const auto probs = reporting_probabilities(q, alpha, f);
    const auto kk = static_cast<double>(k);

    ErrorBounds b;
    b.p_big = std::pow(probs.p, kk);
    b.p_in_big = gamma * std::pow(probs.p_in, kk) / (f + 1.0);
    b.separated = b.p_in_big > b.p_big;
    if (!b.separated) {
        b.diagnostic = "separation condition violated (P_in <= P); increase K so that K >= log((f+1)/gamma)";
        return b;
    }
    const double gap = b.p_in_big - b.p_big;
    const double scale = static_cast<double>(n_reporting) * gap * gap / (16.0 * (kk * kk + 1.0));
    b.e1_exponent = scale / (b.p_big + gap / 6.0);
    b.e2_exponent = scale / b.p_in_big;
    // keep the bounds strictly positive when the exponent underflows
    constexpr double tiny = std::numeric_limits<double>::min();
    b.e1_bound = std::clamp(std::exp(-b.e1_exponent), tiny, 1.0);
    b.e2_bound = std::clamp(std::exp(-b.e2_exponent), tiny, 1.0);
    return b;
}

std::size_t tree_rule_k(double f, double log_base) {
    require(f >= 0.0, "tree_rule_k: f must be >= 0");
    const double denom = log_base > 0.0 ? std::log(log_base) : 1.0;
    for (std::size_t k = 1; k < 4096; ++k)
        if (static_cast<double>(k) >= std::log(static_cast<double>(k) * (f + 1.0)) / denom)
            return k;
    fail(ErrorCode::Infeasible, "tree rule: no K satisfies K >= log(K (f+1))");
}

SolveKResult solve_k(const GammaProfile& profile, double f, double log_base) {
    require(!profile.entries.empty(), "solve_k: empty gamma profile");
    require(f >= 0.0, "solve_k: f must be >= 0");
    auto entries = profile.entries;
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    const double denom = log_base > 0.0 ? std::log(log_base) : 1.0;
    for (const auto& e : entries) {
        if (!(e.gamma > 0.0))
            continue;
        const double need = std::log((f + 1.0) / e.gamma) / denom;
        if (static_cast<double>(e.k) >= need)
            return {e.k, true};
    }
    return {entries.back().k, false};
}

std::string format_gamma_csv(const GammaProfile& profile) {
    std::ostringstream out;
    out.precision(17);
    out << "K,gamma,stderr,trials,topology\n";
    for (const auto& e : profile.entries)
        out << e.k << ',' << e.gamma << ',' << e.std_error << ',' << e.trials << ',' << profile.topology << '\n';
    return out.str();
}

GammaProfile parse_gamma_csv(std::string_view text) {
    GammaProfile prof;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (!header) {
            if (line != "K,gamma,stderr,trials,topology")
                fail(ErrorCode::Parse, "gamma profile: expected header K,gamma,stderr,trials,topology");
            header = true;
            continue;
        }
        std::vector<std::string> cols;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ','))
            cols.push_back(cell);
        if (cols.size() != 5)
            fail(ErrorCode::Parse, "gamma profile line " + std::to_string(line_no) + ": expected 5 columns");
        GammaEntry e;
        try {
            std::size_t used = 0;
            e.k = std::stoul(cols[0], &used);
            if (used != cols[0].size())
                throw std::invalid_argument("k");
            e.gamma = std::stod(cols[1]);
            e.std_error = std::stod(cols[2]);
            e.trials = std::stoul(cols[3]);
        } catch (const std::logic_error&) {
            fail(ErrorCode::Parse, "gamma profile line " + std::to_string(line_no) + ": bad number");
        }
        if (e.k < 1 || e.gamma < 0.0 || e.gamma > 1.0)
            fail(ErrorCode::Parse, "gamma profile line " + std::to_string(line_no) + ": K >= 1 and gamma in [0,1] required");
        prof.topology = cols[4];
        prof.entries.push_back(e);
    }
    if (!header)
        fail(ErrorCode::Parse, "gamma profile: missing header");
    return prof;
}

void write_gamma_csv(const GammaProfile& profile, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorCode::Io, "cannot write " + path.string());
    out << format_gamma_csv(profile);
}

GammaProfile read_gamma_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open gamma profile " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_gamma_csv(buf.str());
}

} // namespace hotspot
