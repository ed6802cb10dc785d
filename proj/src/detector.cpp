#include "hotspot/detector.hpp"

#include "hotspot/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hotspot {

void DetectorConfig::validate() const {
    require(s >= 1, "detector: s must be >= 1");
    require(mode == NeighborhoodMode::Ball || k_or_l >= 1, "detector: K must be >= 1");
    require(!std::isnan(t), "detector: threshold is NaN");
}

std::string verdict_csv_header() {
    return "truth,label,hotspot_count,threshold,K,mode";
}

std::string verdict_csv_row(const Verdict& v, std::optional<Hypothesis> truth) {
    // shortest text that round-trips the threshold
    char t[64];
    const auto end = std::to_chars(t, t + sizeof t, v.threshold).ptr;
    std::ostringstream out;
    out << (truth ? to_string(*truth) : "") << ',' << to_string(v.label) << ',' << v.hotspot_count << ','
        << std::string_view(t, static_cast<std::size_t>(end - t)) << ',' << v.k_or_l << ',' << to_string(v.mode);
    return out.str();
}

std::size_t count_reporting(const Neighborhood& nb, const ReportingSet& reporting) {
    std::size_t c = 0;
    for (NodeId v : nb.members)
        c += reporting.contains(v) ? 1 : 0;
    return c;
}

bool hotspot_indicator(const NeighborhoodSource& src, NodeId i, const DetectorConfig& cfg,
                       const ReportingSet& reporting) {
    cfg.validate();
    thread_local Neighborhood nb;
    src.query(cfg.mode, i, cfg.k_or_l, nb);
    if (nb.size() < cfg.s)
        return false;
    return count_reporting(nb, reporting) >= cfg.s;
}

bool hotspot_indicator(const Graph& g, NodeId i, const DetectorConfig& cfg, const ReportingSet& reporting) {
    return hotspot_indicator(ExactNeighborhoods(g), i, cfg, reporting);
}

Verdict classify(const NeighborhoodSource& src, const ReportingSet& reporting, const DetectorConfig& cfg,
                 const ClassifyOptions& opts) {
    cfg.validate();
    const bool retain = opts.retain_indicators.value_or(src.graph().num_nodes() <= 1'000'000);

    Verdict v;
    v.threshold = cfg.t;
    v.mode = cfg.mode;
    v.k_or_l = cfg.k_or_l;
    v.s = cfg.s;
    v.note = cfg.note;
    if (retain)
        v.indicators.emplace();

    Neighborhood nb;
    for (NodeId i : reporting.ids()) {
        src.query(cfg.mode, i, cfg.k_or_l, nb);
        const bool hot = nb.size() >= cfg.s && count_reporting(nb, reporting) >= cfg.s;
        v.hotspot_count += hot ? 1 : 0;
        if (retain)
            v.indicators->push_back(hot ? 1 : 0);
    }
    v.label = static_cast<double>(v.hotspot_count) > cfg.t ? Hypothesis::Epidemic : Hypothesis::UniformNull;
    return v;
}

Verdict classify(const Graph& g, const ReportingSet& reporting, const DetectorConfig& cfg,
                 const ClassifyOptions& opts) {
    return classify(ExactNeighborhoods(g), reporting, cfg, opts);
}

std::vector<std::size_t> hotspot_counts_by_k(const NeighborhoodSource& src, const ReportingSet& reporting,
                                             std::size_t k_max) {
    require(k_max >= 1, "hotspot_counts_by_k: k_max must be >= 1");
    std::vector<std::size_t> counts(k_max, 0);
    Neighborhood nb;
    for (NodeId i : reporting.ids()) {
        src.nearest(i, k_max, nb);
        // NN(K) is the length-K prefix of NN(k_max); node i is a hotspot for
        // every K up to the length of the reporting prefix.
        std::size_t prefix = 0;
        while (prefix < nb.size() && reporting.contains(nb.members[prefix]))
            ++prefix;
        for (std::size_t k = 1; k <= prefix; ++k)
            ++counts[k - 1];
    }
    return counts;
}

std::vector<std::size_t> hotspot_counts_by_s(const NeighborhoodSource& src, const ReportingSet& reporting,
                                             NeighborhoodMode mode, std::size_t k_or_l, std::size_t s_max) {
    require(s_max >= 1, "hotspot_counts_by_s: s_max must be >= 1");
    std::vector<std::size_t> counts(s_max, 0);
    Neighborhood nb;
    for (NodeId i : reporting.ids()) {
        src.query(mode, i, k_or_l, nb);
        const std::size_t c = std::min(count_reporting(nb, reporting), s_max);
        for (std::size_t s = 1; s <= c; ++s)
            ++counts[s - 1];
    }
    return counts;
}

double binomial_upper_tail(std::size_t n, double p, std::size_t s) {
    if (s == 0)
        return 1.0;
    if (s > n || p <= 0.0)
        return 0.0;
    if (p >= 1.0)
        return 1.0;
    const double nn = static_cast<double>(n);
    const double lp = std::log(p), lq = std::log1p(-p), lfact_n = std::lgamma(nn + 1.0);
    auto pmf = [&](std::size_t x) {
        const double xx = static_cast<double>(x);
        return std::exp(lfact_n - std::lgamma(xx + 1.0) - std::lgamma(nn - xx + 1.0) + xx * lp + (nn - xx) * lq);
    };
    // sum whichever side is shorter in expectation to limit cancellation
    if (static_cast<double>(s) <= nn * p) {
        double lower = 0.0;
        for (std::size_t x = 0; x < s; ++x)
            lower += pmf(x);
        return std::clamp(1.0 - lower, 0.0, 1.0);
    }
    double upper = 0.0;
    for (std::size_t x = s; x <= n; ++x) {
        const double term = pmf(x);
        upper += term;
        if (term < upper * 1e-17)
            break;
    }
    return std::clamp(upper, 0.0, 1.0);
}

double null_hotspot_expectation(const NeighborhoodSource& src, const ReportingSet& reporting,
                                NeighborhoodMode mode, std::size_t k_or_l, std::size_t s, double p) {
    Neighborhood nb;
    double total = 0.0;
    for (NodeId i : reporting.ids()) {
        src.query(mode, i, k_or_l, nb);
        total += binomial_upper_tail(nb.size(), p, s);
    }
    return total;
}

namespace {

double log_with_base(double x, double base) {
    return base > 0.0 ? std::log(x) / std::log(base) : std::log(x);
}

} // namespace

double dense_threshold(double gamma, double f, double p_in, double p, std::size_t n_reporting, std::size_t k) {
    const auto kk = static_cast<double>(k);
    return static_cast<double>(n_reporting) / 2.0 * (gamma * std::pow(p_in, kk) / (f + 1.0) + std::pow(p, kk));
}

DenseSelection select_params_dense(double gamma, double f, double p_in, double p, std::size_t n_reporting,
                                   double log_base) {
    if (!(gamma > 0.0))
        fail(ErrorCode::Infeasible, "gamma = 0: boundary covers infection; the dense-regime rule is inapplicable");
    require(gamma <= 1.0, "select_params_dense: gamma must lie in (0, 1]");
    require(f >= 0.0, "select_params_dense: f must be >= 0");
    require(p > 0.0 && p_in > p, "select_params_dense: need p_in > p > 0");
    require(log_base <= 0.0 || (log_base > 1.0), "select_params_dense: log base must exceed 1");

    DenseSelection sel;
    sel.log_base = log_base > 0.0 ? log_base : std::exp(1.0);
    sel.raw_k = log_with_base((f + 1.0) / gamma, log_base);
    // tolerate representation error so log(e) stays 1, not 2
    const double k = std::max(1.0, std::ceil(sel.raw_k - 1e-12));
    const auto kk = static_cast<std::size_t>(k);
    sel.config = DetectorConfig::canonical(kk, dense_threshold(gamma, f, p_in, p, n_reporting, kk));
    std::ostringstream note;
    note << "dense rule K=ceil(log_" << (log_base > 0.0 ? std::to_string(log_base) : std::string("e"))
         << "((f+1)/gamma))";
    sel.config.note = note.str();
    return sel;
}

SmallSelection select_params_small(const SmallRegimeParams& params) {
    require(params.beta > 0.0 && params.beta < 1.0, "select_params_small: beta must lie in (0, 1)");
    SmallSelection sel;
    const double k = std::ceil(1.0 / params.beta - 1e-12) - 1.0;
    const auto kk = static_cast<std::size_t>(std::max(1.0, k));
    sel.config = DetectorConfig::canonical(kk, 0.5);
    sel.config.note = "small-regime rule: fires on count >= 1 (t=0.5)";
    sel.feasible = static_cast<double>(kk) * params.mu <= params.rho;
    return sel;
}

MultiKResult multi_k_test(const NeighborhoodSource& src, const ReportingSet& reporting,
                          std::span<const std::size_t> k_range, std::span<const double> null_expectations,
                          double deviation_factor) {
    if (k_range.empty())
        fail(ErrorCode::InvalidArgument, "multi_k_test: empty K range");
    require(null_expectations.size() == k_range.size(), "multi_k_test: one expectation per K required");
    require(deviation_factor >= 0.0, "multi_k_test: deviation factor must be >= 0");
    auto allowed = [&](double e) { return deviation_factor * std::sqrt(std::max(e, 0.0)); };
    const double n = static_cast<double>(std::max<std::size_t>(src.graph().num_nodes(), 2));
    const auto k_limit = static_cast<std::size_t>(std::ceil(std::log(n)));
    for (auto k : k_range)
        require(k >= 1 && k <= std::max<std::size_t>(1, k_limit), "multi_k_test: K must lie in [1, ceil(ln N)]");

    const std::size_t k_max = *std::max_element(k_range.begin(), k_range.end());
    const auto by_k = hotspot_counts_by_k(src, reporting, k_max);

    MultiKResult r;
    r.k_values.assign(k_range.begin(), k_range.end());
    r.expectations.assign(null_expectations.begin(), null_expectations.end());
    r.verdict.mode = NeighborhoodMode::NearestNeighbors;
    r.verdict.label = Hypothesis::UniformNull;
    r.verdict.note = "multi-K deviation test";
    for (std::size_t j = 0; j < k_range.size(); ++j) {
        const std::size_t k = k_range[j];
        const std::size_t c = by_k[k - 1];
        r.counts.push_back(c);
        const double e = null_expectations[j];
        const double bound = allowed(e);
        if (std::abs(static_cast<double>(c) - e) > bound && !r.firing_k) {
            r.firing_k = k;
            if (static_cast<double>(c) < e)
                r.verdict.note += " (fired on a deficit below the null expectation)";
            r.verdict.label = Hypothesis::Epidemic;
            r.verdict.hotspot_count = c;
            r.verdict.threshold = e + bound;
            r.verdict.k_or_l = k;
            r.verdict.s = k;
        }
    }
    if (!r.firing_k) {
        r.verdict.hotspot_count = r.counts.front();
        r.verdict.threshold = r.expectations.front() + allowed(r.expectations.front());
        r.verdict.k_or_l = r.k_values.front();
        r.verdict.s = r.k_values.front();
    }
    return r;
}

} // namespace hotspot
