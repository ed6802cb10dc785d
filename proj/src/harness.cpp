#include "hotspot/harness.hpp"

#include "hotspot/calibration.hpp"
#include "hotspot/error.hpp"
#include "hotspot/parallel.hpp"
#include "hotspot/rng.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace hotspot {

namespace {

enum Stream : std::uint64_t { kGraph = 1, kSeeds = 2, kSpread = 3, kReport = 4, kNull = 5, kNoise = 6 };

std::shared_ptr<const Graph> build_graph(const TopologySpec& t, std::uint64_t seed) {
    switch (t.kind) {
    case TopologyKind::ErdosRenyi: {
        require(t.n >= 1, "topology: n must be >= 1");
        const double p = t.er_p ? *t.er_p : t.er_mean_degree / static_cast<double>(t.n);
        return std::make_shared<const Graph>(gen_erdos_renyi(t.n, std::min(p, 1.0), seed));
    }
    case TopologyKind::Grid:
        return std::make_shared<const Graph>(gen_grid(t.grid_dim, t.grid_side));
    case TopologyKind::Tree:
        return std::make_shared<const Graph>(gen_tree(t.tree_degree, t.tree_depth));
    case TopologyKind::PowerLaw:
        return std::make_shared<const Graph>(gen_power_law(t.n, t.powerlaw_exponent, seed));
    case TopologyKind::File:
        return std::make_shared<const Graph>(load_edge_list(t.path, t.compact).graph);
    }
    fail(ErrorCode::InvalidArgument, "topology: unknown kind");
}

std::shared_ptr<const std::vector<NodeId>> seed_pool(const Graph& g, SeedPlacement placement) {
    if (placement == SeedPlacement::Uniform)
        return nullptr;
    return std::make_shared<const std::vector<NodeId>>(g.largest_component());
}

ScenarioParams scenario_at(const ExperimentSpec& s, std::size_t n) {
    ScenarioParams p;
    p.alpha = s.alpha.at(n);
    p.q = s.q.at(n);
    p.f = s.f.at(n);
    p.num_seeds = s.num_seeds;
    return p;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double mean_of(const std::vector<std::size_t>& xs) {
    if (xs.empty())
        return 0.0;
    double s = 0.0;
    for (auto x : xs)
        s += static_cast<double>(x);
    return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<std::size_t>& xs) {
    if (xs.size() < 2)
        return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (auto x : xs)
        ss += (static_cast<double>(x) - m) * (static_cast<double>(x) - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace

Experiment::Experiment(ExperimentSpec spec, std::shared_ptr<const Graph> fixed_graph)
    : spec_(std::move(spec)), fixed_graph_(std::move(fixed_graph)) {
    spec_.validate();
    if (!fixed_graph_ && !spec_.topology.random())
        fixed_graph_ = build_graph(spec_.topology, 0);
    if (fixed_graph_)
        fixed_pool_ = seed_pool(*fixed_graph_, spec_.seed_placement);
}

std::uint64_t Experiment::stream_seed(std::uint64_t stream, std::size_t trial, std::optional<Hypothesis> label) const {
    const std::uint64_t tag = label ? static_cast<std::uint64_t>(*label) + 1 : 0;
    if (spec_.common_random_numbers || !spec_.current_sweep_value)
        return derive_seed(spec_.master_seed, {stream, trial, tag});
    return derive_seed(spec_.master_seed, {std::bit_cast<std::uint64_t>(*spec_.current_sweep_value), stream, trial, tag});
}

std::shared_ptr<const Graph> Experiment::graph_for_trial(std::size_t trial) const {
    if (fixed_graph_)
        return fixed_graph_;
    return build_graph(spec_.topology, stream_seed(kGraph, trial, std::nullopt));
}

ReportSnapshot Experiment::snapshot(const Graph& g, Hypothesis label, std::size_t trial, bool* truncated) const {
    const std::size_t n = g.num_nodes();
    const ScenarioParams params = scenario_at(spec_, n);
    if (truncated)
        *truncated = false;
    if (label == Hypothesis::UniformNull) {
        double p = 0.0;
        if (spec_.null_p) {
            p = *spec_.null_p;
        } else {
            params.validate(n);
            p = (params.f + 1.0) * params.q * static_cast<double>(params.infection_size(n)) / static_cast<double>(n);
        }
        require(p >= 0.0, "null: reporting probability must be >= 0");
        if (p > 1.0)
            fail(ErrorCode::Infeasible, "null: reporting probability " + std::to_string(p) + " exceeds 1");
        return generate_uniform_null(g, p, stream_seed(kNull, trial, label));
    }

    std::vector<NodeId> seeds;
    const auto seed_rng = stream_seed(kSeeds, trial, label);
    if (spec_.seed_placement == SeedPlacement::Uniform) {
        seeds = pick_seeds(g, params.num_seeds, seed_rng);
    } else {
        const auto pool = fixed_pool_ && fixed_graph_.get() == &g ? fixed_pool_ : seed_pool(g, spec_.seed_placement);
        seeds = pick_seeds_from(*pool, params.num_seeds, seed_rng);
    }
    EpidemicOutcome outcome;
    if (spec_.stop == StopRule::FixedSize) {
        params.validate(n);
        outcome = simulate_si(g, seeds, params.infection_size(n), stream_seed(kSpread, trial, label));
    } else {
        outcome = simulate_si(g, seeds, n, stream_seed(kSpread, trial, label), spec_.time_budget);
        outcome.truncated = false;
    }
    if (truncated)
        *truncated = outcome.truncated;
    return apply_reporting(outcome, g, params.q, params.f, stream_seed(kReport, trial, label));
}

DetectorConfig Experiment::detector_for(const Graph& g, const ReportSnapshot& snap) const {
    const DetectorSpec& d = spec_.detector;
    const std::size_t n = g.num_nodes();
    const ScenarioParams params = scenario_at(spec_, n);
    switch (d.kind) {
    case DetectorKind::Fixed:
        return d.fixed;
    case DetectorKind::Dense: {
        const double alpha = static_cast<double>(params.infection_size(n)) / static_cast<double>(n);
        const auto probs = reporting_probabilities(params.q, std::min(alpha, std::nextafter(1.0, 0.0)), params.f);
        const std::size_t n_rep = snap.reporting.size();
        if (d.gamma_source == GammaSource::Tree) {
            const std::size_t k = tree_rule_k(params.f, d.log_base);
            const double gamma = 1.0 / static_cast<double>(k);
            DetectorConfig cfg = DetectorConfig::canonical(k, dense_threshold(gamma, params.f, probs.p_in, probs.p, n_rep, k));
            cfg.note = "tree rule gamma=1/K";
            return cfg;
        }
        double gamma = d.gamma;
        if (d.gamma_source == GammaSource::Fallback)
            gamma = gamma_lower_bound(params.infection_size(n));
        else if (d.gamma_source == GammaSource::Grid)
            gamma = 1.0;
        return select_params_dense(gamma, params.f, probs.p_in, probs.p, n_rep, d.log_base).config;
    }
    case DetectorKind::Small: {
        SmallRegimeParams sp;
        const double n_rep = static_cast<double>(std::max<std::size_t>(snap.reporting.size(), 1));
        sp.beta = std::clamp(1.0 - std::log(n_rep) / std::log(static_cast<double>(std::max<std::size_t>(n, 2))),
                             1e-9, 1.0);
        return select_params_small(sp).config;
    }
    }
    fail(ErrorCode::InvalidArgument, "detector: unknown kind");
}

std::unique_ptr<NeighborhoodSource> Experiment::neighborhoods(const Graph& g, std::size_t trial) const {
    if (spec_.noise && spec_.noise->flip_prob > 0.0)
        return std::make_unique<NoisyNeighborhoods>(g, *spec_.noise, stream_seed(kNoise, trial, std::nullopt));
    return std::make_unique<ExactNeighborhoods>(g);
}

TrialResult Experiment::run_trial(Hypothesis label, std::size_t trial) const {
    TrialResult r;
    r.truth = label;
    try {
        const auto g = graph_for_trial(trial);
        bool truncated = false;
        const auto snap = snapshot(*g, label, trial, &truncated);
        r.truncated = truncated;
        r.n_reporting = snap.reporting.size();
        const auto cfg = detector_for(*g, snap);
        const auto src = neighborhoods(*g, trial);
        r.verdict = classify(*src, ReportingSet(snap), cfg, ClassifyOptions{false});
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

TrialResult run_trial(const ExperimentSpec& spec, Hypothesis label, std::size_t trial) {
    return Experiment(spec).run_trial(label, trial);
}

std::string sweep_csv_header() {
    return "sweep_value,trials,type1,type2,mean_error,mean_hotspots_epi,sd_epi,mean_hotspots_null,sd_null";
}

std::string format_sweep_csv(const SweepResult& result) {
    std::string out = sweep_csv_header() + "\n";
    for (const auto& r : result.rows) {
        out += fmt(r.sweep_value) + ',' + std::to_string(r.trials) + ',' + fmt(r.type1) + ',' + fmt(r.type2) + ',' +
               fmt(r.mean_error) + ',' + fmt(r.mean_hotspots_epi) + ',' + fmt(r.sd_epi) + ',' +
               fmt(r.mean_hotspots_null) + ',' + fmt(r.sd_null) + '\n';
    }
    return out;
}

namespace {

std::vector<TrialResult> run_all(const Experiment& exp) {
    const std::size_t trials = exp.spec().trials;
    std::vector<TrialResult> results(2 * trials);
    parallel_for(
        2 * trials,
        [&](std::size_t j) {
            const auto label = j < trials ? Hypothesis::Epidemic : Hypothesis::UniformNull;
            results[j] = exp.run_trial(label, j % trials);
        },
        exp.spec().threads);
    return results;
}

SweepRow score_results(const std::vector<TrialResult>& results, double sweep_value, std::size_t trials) {
    SweepRow row;
    row.sweep_value = sweep_value;
    row.trials = trials;
    std::vector<std::size_t> epi, null;
    std::size_t missed = 0, false_alarm = 0;
    for (const auto& r : results) {
        if (r.error) {
            ++row.failures;
            continue;
        }
        row.truncated += r.truncated ? 1 : 0;
        const bool fired = r.verdict.label == Hypothesis::Epidemic;
        if (r.truth == Hypothesis::Epidemic) {
            epi.push_back(r.verdict.hotspot_count);
            missed += fired ? 0 : 1;
        } else {
            null.push_back(r.verdict.hotspot_count);
            false_alarm += fired ? 1 : 0;
        }
    }
    row.type1 = null.empty() ? 0.0 : static_cast<double>(false_alarm) / static_cast<double>(null.size());
    row.type2 = epi.empty() ? 0.0 : static_cast<double>(missed) / static_cast<double>(epi.size());
    row.mean_error = 0.5 * (row.type1 + row.type2);
    row.mean_hotspots_epi = mean_of(epi);
    row.sd_epi = sd_of(epi);
    row.mean_hotspots_null = mean_of(null);
    row.sd_null = sd_of(null);
    return row;
}

} // namespace

SweepResult run_sweep(const ExperimentSpec& spec, std::shared_ptr<const Graph> fixed_graph) {
    spec.validate();
    SweepResult out;
    std::vector<double> values = spec.sweep_values;
    if (spec.sweep_var.empty())
        values = {0.0};
    for (double v : values) {
        const ExperimentSpec point = spec.sweep_var.empty() ? spec : spec.at_sweep_value(v);
        // an N sweep needs a fresh graph per point
        const bool reuse = fixed_graph && spec.sweep_var != "n";
        const Experiment exp(point, reuse ? fixed_graph : nullptr);
        out.rows.push_back(score_results(run_all(exp), v, point.trials));
    }
    return out;
}

TrialCounts collect_counts(const Experiment& exp) {
    TrialCounts c;
    const auto results = run_all(exp);
    for (const auto& r : results) {
        if (r.error) {
            ++c.failures;
            continue;
        }
        c.truncated += r.truncated ? 1 : 0;
        (r.truth == Hypothesis::Epidemic ? c.epidemic : c.null).push_back(r.verdict.hotspot_count);
    }
    return c;
}

SweepRow score_counts(const TrialCounts& counts, double t, double sweep_value, std::size_t trials) {
    SweepRow row;
    row.sweep_value = sweep_value;
    row.trials = trials;
    row.failures = counts.failures;
    row.truncated = counts.truncated;
    const auto above = [t](const std::vector<std::size_t>& xs) {
        return static_cast<std::size_t>(
            std::count_if(xs.begin(), xs.end(), [t](std::size_t x) { return static_cast<double>(x) > t; }));
    };
    const std::size_t n_epi = counts.epidemic.size(), n_null = counts.null.size();
    row.type1 = n_null ? static_cast<double>(above(counts.null)) / static_cast<double>(n_null) : 0.0;
    row.type2 = n_epi ? static_cast<double>(n_epi - above(counts.epidemic)) / static_cast<double>(n_epi) : 0.0;
    row.mean_error = 0.5 * (row.type1 + row.type2);
    row.mean_hotspots_epi = mean_of(counts.epidemic);
    row.sd_epi = sd_of(counts.epidemic);
    row.mean_hotspots_null = mean_of(counts.null);
    row.sd_null = sd_of(counts.null);
    return row;
}

namespace {

SweepResult score_thresholds(const ExperimentSpec& spec, std::shared_ptr<const Graph> g,
                             std::span<const double> t_values) {
    require(!t_values.empty(), "threshold_sweep: no thresholds");
    ExperimentSpec point = spec;
    point.sweep_var.clear();
    point.sweep_values.clear();
    // the hotspot count does not depend on t, so any fixed detector works
    point.detector.kind = DetectorKind::Fixed;
    const auto counts = collect_counts(Experiment(point, std::move(g)));
    SweepResult out;
    for (double t : t_values)
        out.rows.push_back(score_counts(counts, t, t, spec.trials));
    return out;
}

} // namespace

SweepResult threshold_sweep(const Graph& g, const ExperimentSpec& spec, std::span<const double> t_values) {
    return score_thresholds(spec, std::shared_ptr<const Graph>(&g, [](const Graph*) {}), t_values);
}

SweepResult threshold_sweep(const ExperimentSpec& spec, std::span<const double> t_values) {
    return score_thresholds(spec, nullptr, t_values);
}

} // namespace hotspot
