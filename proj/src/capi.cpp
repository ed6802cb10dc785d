#include "hotspot/hotspot.h"

#include "hotspot/calibration.hpp"
#include "hotspot/detector.hpp"
#include "hotspot/error.hpp"
#include "hotspot/harness.hpp"
#include "hotspot/noise.hpp"
#include "hotspot/rng.hpp"

#include <cmath>
#include <memory>
#include <string>

using namespace hotspot;

struct hs_graph {
    std::shared_ptr<const Graph> g;
};

struct hs_snapshot {
    ReportSnapshot snap;
    bool truncated = false;
};

struct hs_gamma_profile {
    GammaProfile profile;
    std::string csv;
};

struct hs_experiment {
    ExperimentSpec spec;
    std::shared_ptr<const Graph> graph;
    std::string text;
};

struct hs_sweep_result {
    SweepResult result;
    std::string csv;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_scratch;

hs_status to_status(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidArgument: return HS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io: return HS_ERR_IO;
    case ErrorCode::Parse: return HS_ERR_PARSE;
    case ErrorCode::Infeasible: return HS_ERR_INFEASIBLE;
    case ErrorCode::Overflow: return HS_ERR_OVERFLOW;
    }
    return HS_ERR_INTERNAL;
}

template <class F>
hs_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return HS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return HS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HS_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p)
        fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

hs_hypothesis to_c(std::optional<Hypothesis> h) {
    if (!h)
        return HS_UNKNOWN;
    return *h == Hypothesis::Epidemic ? HS_EPIDEMIC : HS_UNIFORM_NULL;
}

hs_verdict to_c(const Verdict& v) {
    hs_verdict out;
    out.label = to_c(std::optional(v.label));
    out.hotspot_count = v.hotspot_count;
    out.threshold = v.threshold;
    out.mode = v.mode == NeighborhoodMode::Ball ? HS_MODE_BALL : HS_MODE_NN;
    out.k_or_l = v.k_or_l;
    out.s = v.s;
    return out;
}

DetectorConfig to_cpp(const hs_detector& d) {
    DetectorConfig c;
    c.mode = d.mode == HS_MODE_BALL ? NeighborhoodMode::Ball : NeighborhoodMode::NearestNeighbors;
    c.k_or_l = d.k_or_l;
    c.s = d.s == 0 ? d.k_or_l : d.s;
    c.t = d.t;
    c.validate();
    return c;
}

ScenarioParams to_cpp(const hs_scenario& s) {
    ScenarioParams p;
    p.alpha = s.alpha;
    p.q = s.q;
    p.f = s.f;
    p.num_seeds = s.num_seeds;
    return p;
}

Verdict run_classify(const Graph& g, const ReportSnapshot& snap, const DetectorConfig& cfg, const hs_noise* noise) {
    require(snap.num_nodes == g.num_nodes(), "snapshot node count " + std::to_string(snap.num_nodes) +
                                                 " does not match graph node count " + std::to_string(g.num_nodes()));
    const ReportingSet reporting(snap);
    if (noise && noise->flip_prob > 0.0) {
        const NoisyNeighborhoods src(g, DistanceNoise{noise->flip_prob, noise->magnitude}, noise->seed);
        return classify(src, reporting, cfg);
    }
    return classify(ExactNeighborhoods(g), reporting, cfg);
}

} // namespace

extern "C" {

const char* hs_last_error(void) { return g_last_error.c_str(); }

const char* hs_status_name(hs_status status) {
    switch (status) {
    case HS_OK: return "ok";
    case HS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HS_ERR_IO: return "i/o error";
    case HS_ERR_PARSE: return "parse error";
    case HS_ERR_INFEASIBLE: return "infeasible parameters";
    case HS_ERR_OVERFLOW: return "overflow";
    case HS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void hs_topology_defaults(hs_topology* t) {
    if (!t)
        return;
    *t = hs_topology{HS_TOPO_ER, 8000, 2.0 / 8000.0, 2, 100, 3, 10, 2.5};
}

hs_status hs_graph_generate(const hs_topology* t, uint64_t seed, hs_graph** out) {
    return guarded([&] {
        need(t, "topology");
        need(out, "out");
        Graph g;
        switch (t->kind) {
        case HS_TOPO_ER: g = gen_erdos_renyi(t->n, t->p, seed); break;
        case HS_TOPO_GRID: g = gen_grid(t->dim, t->side); break;
        case HS_TOPO_TREE: g = gen_tree(t->degree, t->depth); break;
        case HS_TOPO_POWERLAW: g = gen_power_law(t->n, t->exponent, seed); break;
        default: fail(ErrorCode::InvalidArgument, "unknown topology kind");
        }
        *out = new hs_graph{std::make_shared<const Graph>(std::move(g))};
    });
}

hs_status hs_graph_load(const char* path, int compact, hs_graph** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hs_graph{std::make_shared<const Graph>(load_edge_list(path, compact != 0).graph)};
    });
}

hs_status hs_graph_from_edges(size_t num_nodes, const uint32_t* endpoints, size_t num_edges, hs_graph** out) {
    return guarded([&] {
        need(out, "out");
        if (num_edges)
            need(endpoints, "endpoints");
        std::vector<Edge> edges(num_edges);
        for (size_t i = 0; i < num_edges; ++i)
            edges[i] = {endpoints[2 * i], endpoints[2 * i + 1]};
        *out = new hs_graph{std::make_shared<const Graph>(Graph::from_edges(num_nodes, edges))};
    });
}

hs_status hs_graph_save(const hs_graph* g, const char* path) {
    return guarded([&] {
        need(g, "graph");
        need(path, "path");
        write_edge_list(*g->g, path);
    });
}

size_t hs_graph_num_nodes(const hs_graph* g) { return g ? g->g->num_nodes() : 0; }
size_t hs_graph_num_edges(const hs_graph* g) { return g ? g->g->num_edges() : 0; }
void hs_graph_free(hs_graph* g) { delete g; }

void hs_scenario_defaults(hs_scenario* s) {
    if (s)
        *s = hs_scenario{0.1, 1.0, 0.0, 1, 1, 0.0};
}

hs_status hs_simulate_epidemic(const hs_graph* g, const hs_scenario* s, uint64_t seed, hs_snapshot** out) {
    return guarded([&] {
        need(g, "graph");
        need(s, "scenario");
        need(out, "out");
        const Graph& graph = *g->g;
        const ScenarioParams params = to_cpp(*s);
        params.validate(graph.num_nodes());
        const auto seed_rng = derive_seed(seed, {2});
        const auto seeds = s->seeds_in_giant ? pick_seeds_from(graph.largest_component(), params.num_seeds, seed_rng)
                                             : pick_seeds(graph, params.num_seeds, seed_rng);
        EpidemicOutcome outcome;
        if (s->time_budget > 0.0) {
            outcome = simulate_si(graph, seeds, graph.num_nodes(), derive_seed(seed, {3}), s->time_budget);
            outcome.truncated = false;
        } else {
            outcome = simulate_si(graph, seeds, params.infection_size(graph.num_nodes()), derive_seed(seed, {3}));
        }
        auto h = std::make_unique<hs_snapshot>();
        h->snap = apply_reporting(outcome, graph, params.q, params.f, derive_seed(seed, {4}));
        h->truncated = outcome.truncated;
        *out = h.release();
    });
}

hs_status hs_simulate_null(const hs_graph* g, double p, uint64_t seed, hs_snapshot** out) {
    return guarded([&] {
        need(g, "graph");
        need(out, "out");
        *out = new hs_snapshot{generate_uniform_null(*g->g, p, derive_seed(seed, {5})), false};
    });
}

hs_status hs_snapshot_from_ids(size_t num_nodes, const uint32_t* ids, size_t count, hs_snapshot** out) {
    return guarded([&] {
        need(out, "out");
        if (count)
            need(ids, "ids");
        ReportingSet set(num_nodes, std::span<const NodeId>(ids, count));
        ReportSnapshot snap;
        snap.num_nodes = num_nodes;
        snap.reporting.assign(set.ids().begin(), set.ids().end());
        *out = new hs_snapshot{std::move(snap), false};
    });
}

hs_status hs_snapshot_read(const char* path, hs_snapshot** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hs_snapshot{read_snapshot(path), false};
    });
}

hs_status hs_snapshot_write(const hs_snapshot* s, const char* path) {
    return guarded([&] {
        need(s, "snapshot");
        need(path, "path");
        write_snapshot(s->snap, path);
    });
}

size_t hs_snapshot_num_nodes(const hs_snapshot* s) { return s ? s->snap.num_nodes : 0; }
size_t hs_snapshot_size(const hs_snapshot* s) { return s ? s->snap.reporting.size() : 0; }
const uint32_t* hs_snapshot_ids(const hs_snapshot* s) { return s ? s->snap.reporting.data() : nullptr; }
size_t hs_snapshot_infected_count(const hs_snapshot* s) { return s ? s->snap.infected.size() : 0; }
int hs_snapshot_truncated(const hs_snapshot* s) { return s && s->truncated ? 1 : 0; }
hs_hypothesis hs_snapshot_truth(const hs_snapshot* s) { return s ? to_c(s->snap.truth) : HS_UNKNOWN; }
void hs_snapshot_free(hs_snapshot* s) { delete s; }

hs_status hs_classify(const hs_graph* g, const hs_snapshot* s, const hs_detector* d, const hs_noise* noise,
                      hs_verdict* out) {
    return guarded([&] {
        need(g, "graph");
        need(s, "snapshot");
        need(d, "detector");
        need(out, "out");
        *out = to_c(run_classify(*g->g, s->snap, to_cpp(*d), noise));
    });
}

const char* hs_verdict_csv_header(void) {
    g_scratch = verdict_csv_header();
    return g_scratch.c_str();
}

const char* hs_verdict_csv_row(const hs_verdict* v, hs_hypothesis truth) {
    if (!v)
        return "";
    Verdict cpp;
    cpp.label = v->label == HS_EPIDEMIC ? Hypothesis::Epidemic : Hypothesis::UniformNull;
    cpp.hotspot_count = v->hotspot_count;
    cpp.threshold = v->threshold;
    cpp.mode = v->mode == HS_MODE_BALL ? NeighborhoodMode::Ball : NeighborhoodMode::NearestNeighbors;
    cpp.k_or_l = v->k_or_l;
    cpp.s = v->s;
    std::optional<Hypothesis> t;
    if (truth == HS_EPIDEMIC)
        t = Hypothesis::Epidemic;
    else if (truth == HS_UNIFORM_NULL)
        t = Hypothesis::UniformNull;
    g_scratch = verdict_csv_row(cpp, t);
    return g_scratch.c_str();
}

void hs_auto_params_defaults(hs_auto_params* p) {
    if (!p)
        return;
    *p = hs_auto_params{};
    p->q = 1.0;
    p->alpha = 0.1;
    p->f = 0.0;
    p->regime = HS_REGIME_AUTO;
    p->density_cutoff = 0.01;
    p->gamma_source = HS_GAMMA_FALLBACK;
    p->gamma = 1.0;
}

hs_status hs_auto_detect(const hs_graph* g, const hs_snapshot* s, const hs_auto_params* p, hs_verdict* out,
                         hs_auto_choice* choice) {
    return guarded([&] {
        need(g, "graph");
        need(s, "snapshot");
        need(p, "params");
        need(out, "out");
        const Graph& graph = *g->g;
        const std::size_t n = graph.num_nodes();
        require(n >= 1, "auto-detect: empty graph");
        const std::size_t n_rep = s->snap.reporting.size();
        const auto probs = reporting_probabilities(p->q, p->alpha, p->f);

        hs_auto_choice c{};
        c.p = probs.p;
        c.p_in = probs.p_in;
        c.regime = p->regime;
        if (c.regime == HS_REGIME_AUTO)
            c.regime = static_cast<double>(n_rep) / static_cast<double>(n) > p->density_cutoff ? HS_REGIME_DENSE
                                                                                                : HS_REGIME_SMALL;
        DetectorConfig cfg;
        if (c.regime == HS_REGIME_SMALL) {
            SmallRegimeParams sp{p->beta, p->rho, p->mu};
            if (!(p->beta > 0.0)) {
                const double reps = static_cast<double>(std::max<std::size_t>(n_rep, 1));
                sp.beta = std::clamp(1.0 - std::log(reps) / std::log(static_cast<double>(std::max<std::size_t>(n, 2))),
                                     1e-9, 1.0);
            }
            const auto sel = select_params_small(sp);
            cfg = sel.config;
            c.beta = sp.beta;
            c.feasible = sel.feasible ? 1 : 0;
        } else {
            c.feasible = 1;
            switch (p->gamma_source) {
            case HS_GAMMA_PROFILE: {
                need(p->profile, "gamma profile");
                const auto solved = solve_k(p->profile->profile, p->f, p->log_base);
                c.gamma = p->profile->profile.find(solved.k)->gamma;
                if (!(c.gamma > 0.0))
                    fail(ErrorCode::Infeasible, "gamma profile yields gamma = 0 at K = " + std::to_string(solved.k));
                c.feasible = solved.qualified ? 1 : 0;
                cfg = DetectorConfig::canonical(solved.k,
                                                dense_threshold(c.gamma, p->f, probs.p_in, probs.p, n_rep, solved.k));
                cfg.note = solved.qualified ? "K from gamma profile" : "K from gamma profile (unqualified: K < log((f+1)/gamma))";
                break;
            }
            case HS_GAMMA_TREE: {
                const std::size_t k = tree_rule_k(p->f, p->log_base);
                c.gamma = gamma_analytic_tree(k);
                cfg = DetectorConfig::canonical(k, dense_threshold(c.gamma, p->f, probs.p_in, probs.p, n_rep, k));
                cfg.note = "tree rule gamma=1/K";
                break;
            }
            default: {
                if (p->gamma_source == HS_GAMMA_GRID) {
                    c.gamma = 1.0;
                } else if (p->gamma_source == HS_GAMMA_FALLBACK) {
                    const std::size_t size =
                        p->infection_size ? p->infection_size : ScenarioParams{p->alpha, p->q, p->f, 1}.infection_size(n);
                    c.gamma = gamma_lower_bound(size);
                } else {
                    c.gamma = p->gamma;
                }
                if (!(c.gamma > 0.0))
                    fail(ErrorCode::Infeasible, "gamma must be > 0");
                cfg = select_params_dense(c.gamma, p->f, probs.p_in, probs.p, n_rep, p->log_base).config;
            }
            }
        }
        c.k = cfg.k_or_l;
        c.t = cfg.t;
        *out = to_c(run_classify(graph, s->snap, cfg, nullptr));
        if (choice)
            *choice = c;
    });
}

hs_status hs_reporting_probabilities(double q, double alpha, double f, double* p, double* p_in) {
    return guarded([&] {
        const auto r = reporting_probabilities(q, alpha, f);
        if (p)
            *p = r.p;
        if (p_in)
            *p_in = r.p_in;
    });
}

hs_status hs_gamma_estimate(const hs_graph* g, const hs_scenario* s, const size_t* ks, size_t num_ks, size_t trials,
                            uint64_t seed, const char* topology_label, hs_gamma_profile** out) {
    return guarded([&] {
        need(g, "graph");
        need(s, "scenario");
        need(ks, "ks");
        need(out, "out");
        const std::vector<NodeId> pool = s->seeds_in_giant ? g->g->largest_component() : std::vector<NodeId>{};
        auto prof = estimate_gamma(*g->g, to_cpp(*s), std::span<const std::size_t>(ks, num_ks), trials, seed, pool,
                                   topology_label ? topology_label : "unknown");
        *out = new hs_gamma_profile{std::move(prof), {}};
    });
}

hs_status hs_gamma_read(const char* path, hs_gamma_profile** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hs_gamma_profile{read_gamma_csv(path), {}};
    });
}

hs_status hs_gamma_write(const hs_gamma_profile* p, const char* path) {
    return guarded([&] {
        need(p, "profile");
        need(path, "path");
        write_gamma_csv(p->profile, path);
    });
}

const char* hs_gamma_csv(hs_gamma_profile* p) {
    if (!p)
        return "";
    p->csv = format_gamma_csv(p->profile);
    return p->csv.c_str();
}

size_t hs_gamma_count(const hs_gamma_profile* p) { return p ? p->profile.entries.size() : 0; }

hs_status hs_gamma_entry(const hs_gamma_profile* p, size_t index, size_t* k, double* gamma, double* std_error) {
    return guarded([&] {
        need(p, "profile");
        require(index < p->profile.entries.size(), "gamma entry index out of range");
        const auto& e = p->profile.entries[index];
        if (k)
            *k = e.k;
        if (gamma)
            *gamma = e.gamma;
        if (std_error)
            *std_error = e.std_error;
    });
}

hs_status hs_gamma_solve_k(const hs_gamma_profile* p, double f, double log_base, size_t* k, int* qualified) {
    return guarded([&] {
        need(p, "profile");
        const auto r = solve_k(p->profile, f, log_base);
        if (k)
            *k = r.k;
        if (qualified)
            *qualified = r.qualified ? 1 : 0;
    });
}

void hs_gamma_free(hs_gamma_profile* p) { delete p; }

hs_status hs_error_bounds(double gamma, double q, double alpha, double f, size_t k, size_t n_reporting,
                          hs_bounds* out) {
    return guarded([&] {
        need(out, "out");
        const auto b = error_bounds(gamma, q, alpha, f, k, n_reporting);
        *out = hs_bounds{b.e1_bound, b.e2_bound, b.p_big, b.p_in_big, b.separated ? 1 : 0};
    });
}

hs_status hs_experiment_new(hs_experiment** out) {
    return guarded([&] {
        need(out, "out");
        *out = new hs_experiment{};
    });
}

hs_status hs_experiment_load(const char* path, hs_experiment** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new hs_experiment{load_experiment_config(path), nullptr, {}};
    });
}

hs_status hs_experiment_parse(const char* text, hs_experiment** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new hs_experiment{parse_experiment_config(text), nullptr, {}};
    });
}

hs_status hs_experiment_set(hs_experiment* e, const char* key, const char* value) {
    return guarded([&] {
        need(e, "experiment");
        need(key, "key");
        need(value, "value");
        set_config_value(e->spec, key, value);
    });
}

hs_status hs_experiment_use_graph(hs_experiment* e, const hs_graph* g) {
    return guarded([&] {
        need(e, "experiment");
        e->graph = g ? g->g : nullptr;
    });
}

const char* hs_experiment_format(hs_experiment* e) {
    if (!e)
        return "";
    e->text = format_experiment_config(e->spec);
    return e->text.c_str();
}

hs_status hs_experiment_run(const hs_experiment* e, hs_sweep_result** out) {
    return guarded([&] {
        need(e, "experiment");
        need(out, "out");
        *out = new hs_sweep_result{run_sweep(e->spec, e->graph), {}};
    });
}

hs_status hs_experiment_threshold_sweep(const hs_experiment* e, const double* t_values, size_t count,
                                        hs_sweep_result** out) {
    return guarded([&] {
        need(e, "experiment");
        need(out, "out");
        require(count > 0 && t_values, "threshold sweep: no thresholds");
        const std::span<const double> ts(t_values, count);
        *out = new hs_sweep_result{e->graph ? threshold_sweep(*e->graph, e->spec, ts) : threshold_sweep(e->spec, ts), {}};
    });
}

void hs_experiment_free(hs_experiment* e) { delete e; }

size_t hs_sweep_rows(const hs_sweep_result* r) { return r ? r->result.rows.size() : 0; }

hs_status hs_sweep_row_at(const hs_sweep_result* r, size_t index, hs_sweep_row* out) {
    return guarded([&] {
        need(r, "result");
        need(out, "out");
        require(index < r->result.rows.size(), "sweep row index out of range");
        const auto& s = r->result.rows[index];
        *out = hs_sweep_row{s.sweep_value, s.trials, s.type1, s.type2, s.mean_error, s.mean_hotspots_epi,
                            s.sd_epi, s.mean_hotspots_null, s.sd_null, s.failures, s.truncated};
    });
}

const char* hs_sweep_csv(hs_sweep_result* r) {
    if (!r)
        return "";
    r->csv = format_sweep_csv(r->result);
    return r->csv.c_str();
}

void hs_sweep_free(hs_sweep_result* r) { delete r; }

const char* hs_describe_defaults(void) {
    static const std::string text = describe_defaults();
    return text.c_str();
}

} // extern "C"
