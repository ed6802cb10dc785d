// hotspot: command-line front end over the C API.
//
// detect exits 0 for UniformNull, 2 for Epidemic and 1 on any error.

#include "hotspot/hotspot.h"

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Failure {
    std::string message;
};

void check(hs_status s, const std::string& context) {
    if (s != HS_OK)
        throw Failure{context + ": " + hs_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Graph = std::unique_ptr<hs_graph, Deleter<hs_graph, hs_graph_free>>;
using Snapshot = std::unique_ptr<hs_snapshot, Deleter<hs_snapshot, hs_snapshot_free>>;
using Profile = std::unique_ptr<hs_gamma_profile, Deleter<hs_gamma_profile, hs_gamma_free>>;
using Experiment = std::unique_ptr<hs_experiment, Deleter<hs_experiment, hs_experiment_free>>;
using Sweep = std::unique_ptr<hs_sweep_result, Deleter<hs_sweep_result, hs_sweep_free>>;

Graph load_graph(const std::string& path, bool compact) {
    hs_graph* g = nullptr;
    check(hs_graph_load(path.c_str(), compact ? 1 : 0, &g), "loading graph " + path);
    return Graph(g);
}

Snapshot load_snapshot(const std::string& path) {
    hs_snapshot* s = nullptr;
    check(hs_snapshot_read(path.c_str(), &s), "loading snapshot " + path);
    return Snapshot(s);
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f)
        throw Failure{"cannot write " + out};
    f << text;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Common {
    std::uint64_t seed = 0;
    std::string out;
};

struct TopologyFlags {
    std::string kind = "er";
    std::size_t n = 8000;
    std::optional<double> p;
    std::size_t dim = 2, side = 100, degree = 3, depth = 10;
    double exponent = 2.5;
};

void add_topology(CLI::App* app, TopologyFlags& t) {
    app->add_option("--topology", t.kind, "er, grid, tree or powerlaw")
        ->check(CLI::IsMember({"er", "grid", "tree", "powerlaw", "file"}));
    app->add_option("--n", t.n, "node count (er, powerlaw)");
    app->add_option("--p", t.p, "edge probability (er; default 2/n)");
    app->add_option("--grid-dim", t.dim, "grid dimension");
    app->add_option("--grid-side", t.side, "grid side length");
    app->add_option("--tree-degree", t.degree, "tree branching factor");
    app->add_option("--tree-depth", t.depth, "tree depth");
    app->add_option("--exponent", t.exponent, "power-law exponent");
}

Graph make_graph(const TopologyFlags& t, std::uint64_t seed) {
    hs_topology topo;
    hs_topology_defaults(&topo);
    if (t.kind == "er")
        topo.kind = HS_TOPO_ER;
    else if (t.kind == "grid")
        topo.kind = HS_TOPO_GRID;
    else if (t.kind == "tree")
        topo.kind = HS_TOPO_TREE;
    else if (t.kind == "powerlaw")
        topo.kind = HS_TOPO_POWERLAW;
    else
        throw Failure{"--topology file needs --graph"};
    topo.n = t.n;
    topo.p = t.p ? *t.p : 2.0 / static_cast<double>(t.n);
    topo.dim = t.dim;
    topo.side = t.side;
    topo.degree = t.degree;
    topo.depth = t.depth;
    topo.exponent = t.exponent;
    hs_graph* g = nullptr;
    check(hs_graph_generate(&topo, seed, &g), "generating graph");
    return Graph(g);
}

struct ScenarioFlags {
    double alpha = 0.1, q = 1.0, f = 0.0;
    std::size_t seeds = 1;
    double time_budget = 0.0;
    bool uniform_seeds = false;
};

void add_scenario(CLI::App* app, ScenarioFlags& s) {
    app->add_option("--alpha", s.alpha, "infected fraction");
    app->add_option("--q", s.q, "true-reporting probability");
    app->add_option("--f", s.f, "extra uniform reporters per true reporter");
    app->add_option("--seeds", s.seeds, "epidemic sources");
    app->add_option("--time-budget", s.time_budget, "stop the epidemic at this time instead of ceil(alpha N)");
    app->add_flag("--uniform-seeds", s.uniform_seeds, "draw sources from all nodes, not the largest component");
}

hs_scenario to_scenario(const ScenarioFlags& f) {
    hs_scenario s;
    hs_scenario_defaults(&s);
    s.alpha = f.alpha;
    s.q = f.q;
    s.f = f.f;
    s.num_seeds = f.seeds;
    s.seeds_in_giant = f.uniform_seeds ? 0 : 1;
    s.time_budget = f.time_budget;
    return s;
}

struct DetectFlags {
    std::string graph, snapshot, mode = "nn";
    std::size_t k = 1;
    std::optional<std::size_t> l, s;
    double t = 0.0;
    std::optional<std::string> regime;
    double q = 1.0, alpha = 0.1, f = 0.0;
    double beta = 0.0, rho = 0.0, mu = 0.0;
    std::string gamma_profile, gamma_source;
    std::optional<double> gamma;
    std::size_t infection_size = 0;
    double cutoff = 0.01, log_base = 0.0;
    double noise_prob = 0.0;
    std::uint32_t noise_d = 1;
    bool compact = false, header = false;
};

int run_detect(const DetectFlags& d, const Common& c) {
    const Graph g = load_graph(d.graph, d.compact);
    const Snapshot s = load_snapshot(d.snapshot);
    hs_verdict v{};
    if (!d.regime) {
        hs_detector det{d.mode == "ball" ? HS_MODE_BALL : HS_MODE_NN, d.mode == "ball" ? d.l.value_or(d.k) : d.k,
                        d.s.value_or(0), d.t};
        const hs_noise noise{d.noise_prob, d.noise_d, c.seed};
        check(hs_classify(g.get(), s.get(), &det, &noise, &v), "detect");
    } else {
        hs_auto_params p;
        hs_auto_params_defaults(&p);
        p.q = d.q;
        p.alpha = d.alpha;
        p.f = d.f;
        p.regime = *d.regime == "dense" ? HS_REGIME_DENSE : *d.regime == "small" ? HS_REGIME_SMALL : HS_REGIME_AUTO;
        p.density_cutoff = d.cutoff;
        p.beta = d.beta;
        p.rho = d.rho;
        p.mu = d.mu;
        p.infection_size = d.infection_size;
        p.log_base = d.log_base;
        Profile prof;
        if (!d.gamma_profile.empty()) {
            hs_gamma_profile* raw = nullptr;
            check(hs_gamma_read(d.gamma_profile.c_str(), &raw), "loading gamma profile");
            prof.reset(raw);
            p.gamma_source = HS_GAMMA_PROFILE;
            p.profile = prof.get();
        } else if (d.gamma) {
            p.gamma_source = HS_GAMMA_VALUE;
            p.gamma = *d.gamma;
        } else if (d.gamma_source == "tree") {
            p.gamma_source = HS_GAMMA_TREE;
        } else if (d.gamma_source == "grid") {
            p.gamma_source = HS_GAMMA_GRID;
        } else {
            p.gamma_source = HS_GAMMA_FALLBACK;
        }
        hs_auto_choice choice{};
        check(hs_auto_detect(g.get(), s.get(), &p, &v, &choice), "auto-detect");
        std::cerr << "regime=" << (choice.regime == HS_REGIME_DENSE ? "dense" : "small") << " K=" << choice.k
                  << " T=" << num(choice.t) << " gamma=" << num(choice.gamma) << " p=" << num(choice.p)
                  << " p_in=" << num(choice.p_in);
        if (choice.regime == HS_REGIME_SMALL)
            std::cerr << " beta=" << num(choice.beta);
        std::cerr << " feasible=" << (choice.feasible ? "yes" : "no") << '\n';
    }
    std::string text;
    if (d.header)
        text = std::string(hs_verdict_csv_header()) + "\n";
    text += std::string(hs_verdict_csv_row(&v, hs_snapshot_truth(s.get()))) + "\n";
    emit(text, c.out);
    return v.label == HS_EPIDEMIC ? 2 : 0;
}

struct SweepFlags {
    std::string config;
    std::vector<std::string> sets;
    std::string graph;
    std::string t_values;
};

// CLI flag -> config key, applied after the config file.
struct Override {
    const char* flag;
    const char* key;
    std::optional<std::string> value;
};

Experiment build_experiment(const SweepFlags& f, std::vector<Override>& overrides, const CLI::App* app,
                            const Common& c) {
    hs_experiment* raw = nullptr;
    if (!f.config.empty())
        check(hs_experiment_load(f.config.c_str(), &raw), "loading config " + f.config);
    else
        check(hs_experiment_new(&raw), "creating experiment");
    Experiment e(raw);
    if (!f.graph.empty())
        check(hs_experiment_set(e.get(), "graph", f.graph.c_str()), "--graph");
    for (const auto& o : overrides)
        if (o.value)
            check(hs_experiment_set(e.get(), o.key, o.value->c_str()), o.flag);
    if (app->count("--seed") || std::getenv("HOTSPOT_SEED") || f.config.empty())
        check(hs_experiment_set(e.get(), "seed", std::to_string(c.seed).c_str()), "--seed");
    for (const auto& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Failure{"--set expects key=value, got '" + kv + "'"};
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        check(hs_experiment_set(e.get(), key.c_str(), value.c_str()), "--set " + key);
    }
    return e;
}

std::vector<Override> make_overrides() {
    return {{"--topology", "topology", {}}, {"--n", "n", {}},         {"--p", "er_p", {}},
            {"--alpha", "alpha", {}},       {"--q", "q", {}},         {"--f", "f", {}},
            {"--seeds", "seeds", {}},       {"--mode", "mode", {}},   {"--k", "k", {}},
            {"--l", "l", {}},               {"--s", "s", {}},         {"--t", "t", {}},
            {"--regime", "detector", {}},   {"--trials", "trials", {}}, {"--noise-prob", "noise_prob", {}},
            {"--noise-d", "noise_d", {}},   {"--log-base", "log_base", {}}, {"--threads", "threads", {}},
            {"--sweep", "sweep", {}},       {"--values", "values", {}}};
}

void add_overrides(CLI::App* app, std::vector<Override>& overrides) {
    for (auto& o : overrides)
        app->add_option(o.flag, o.value, std::string("sets config key '") + o.key + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epidemic-versus-uniform-reporting hotspot detector"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "master RNG seed (default 0)")->envname("HOTSPOT_SEED");
        sub->add_option("--out", common.out, "output file (default stdout)");
    };

    // generate
    TopologyFlags gen_topo;
    auto* generate = app.add_subcommand("generate", "write a synthetic graph as an edge list");
    add_topology(generate, gen_topo);
    add_common(generate);

    // simulate
    TopologyFlags sim_topo;
    ScenarioFlags sim;
    std::string sim_graph;
    bool sim_null = false, sim_compact = false;
    std::optional<double> sim_null_p;
    auto* simulate = app.add_subcommand("simulate", "simulate one epidemic or null snapshot");
    simulate->add_option("--graph", sim_graph, "edge-list file")->required();
    simulate->add_flag("--compact", sim_compact, "remap sparse node ids to 0..n-1");
    add_scenario(simulate, sim);
    simulate->add_flag("--null", sim_null, "draw the uniform-reporting null instead");
    simulate->add_option("--null-p", sim_null_p, "null reporting probability (default (f+1) q |S|/N)");
    add_common(simulate);

    // detect
    DetectFlags det;
    auto* detect = app.add_subcommand("detect", "classify a snapshot; exit 0 UniformNull, 2 Epidemic, 1 error");
    detect->add_option("--graph", det.graph, "edge-list file")->required();
    detect->add_option("--snapshot", det.snapshot, "snapshot file")->required();
    detect->add_flag("--compact", det.compact, "remap sparse node ids to 0..n-1");
    detect->add_option("--mode", det.mode, "nn or ball")->check(CLI::IsMember({"nn", "ball"}));
    detect->add_option("--k", det.k, "nearest-neighbor count");
    detect->add_option("--l", det.l, "ball radius");
    detect->add_option("--s", det.s, "reporting members required (default K or l)");
    detect->add_option("--t", det.t, "threshold; Epidemic iff count > t");
    detect->add_option("--regime", det.regime, "derive K and T: dense, small or auto")
        ->check(CLI::IsMember({"dense", "small", "auto"}));
    detect->add_option("--q", det.q, "true-reporting probability");
    detect->add_option("--alpha", det.alpha, "infected fraction");
    detect->add_option("--f", det.f, "extra reporters per true reporter");
    detect->add_option("--beta", det.beta, "small regime: N_reporting = N^(1-beta); default from the snapshot");
    detect->add_option("--rho", det.rho, "small regime: |S_r| = N^rho");
    detect->add_option("--mu", det.mu, "small regime: q = N^-mu");
    detect->add_option("--gamma-profile", det.gamma_profile, "gamma CSV from the gamma command");
    detect->add_option("--gamma", det.gamma, "use this gamma for every K");
    detect->add_option("--gamma-source", det.gamma_source, "fallback (1/|S|), tree (1/K) or grid (1)")
        ->check(CLI::IsMember({"fallback", "tree", "grid"}));
    detect->add_flag("--gamma-fallback", [&](std::int64_t) { det.gamma_source = "fallback"; }, "gamma = 1/|S|");
    detect->add_option("--infection-size", det.infection_size, "|S| for the fallback (default ceil(alpha N))");
    detect->add_option("--density-cutoff", det.cutoff, "auto regime: dense iff N_reporting/N exceeds this");
    detect->add_option("--log-base", det.log_base, "log base for K (default e)");
    detect->add_option("--noise-prob", det.noise_prob, "distance misperception probability");
    detect->add_option("--noise-d", det.noise_d, "distance misperception magnitude");
    detect->add_flag("--header", det.header, "print the CSV header first");
    add_common(detect);

    // gamma
    TopologyFlags gam_topo;
    ScenarioFlags gam;
    std::string gam_graph, gam_ks = "1,2,3,4,5,6,7,8,9,10";
    std::size_t gam_trials = 200;
    auto* gamma = app.add_subcommand("gamma", "estimate the interior fraction gamma(K) by simulation");
    gamma->add_option("--graph", gam_graph, "edge-list file (else generate from --topology)");
    add_topology(gamma, gam_topo);
    add_scenario(gamma, gam);
    gamma->add_option("--ks", gam_ks, "comma-separated K values");
    gamma->add_option("--trials", gam_trials, "simulated epidemics");
    add_common(gamma);

    // bounds
    double b_q = 1.0, b_alpha = 0.1, b_f = 0.0;
    std::optional<double> b_gamma;
    std::optional<std::size_t> b_k;
    std::string b_profile;
    std::size_t b_nrep = 0;
    auto* bounds = app.add_subcommand("bounds", "print the type I and type II error bounds");
    bounds->add_option("--q", b_q, "true-reporting probability");
    bounds->add_option("--alpha", b_alpha, "infected fraction");
    bounds->add_option("--f", b_f, "extra reporters per true reporter");
    bounds->add_option("--gamma", b_gamma, "interior fraction at K");
    bounds->add_option("--gamma-profile", b_profile, "gamma CSV; K solved from it unless --k is given");
    bounds->add_option("--k", b_k, "neighborhood size");
    bounds->add_option("--n-reporting", b_nrep, "number of reporting nodes")->required();
    add_common(bounds);

    // sweep and threshold-sweep
    SweepFlags sw;
    auto sw_over = make_overrides();
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo error rates over a parameter sweep");
    sweep->add_option("--config", sw.config, "key = value experiment file");
    sweep->add_option("--set", sw.sets, "extra key=value overrides");
    sweep->add_option("--graph", sw.graph, "edge-list file (sets topology = file)");
    add_overrides(sweep, sw_over);
    add_common(sweep);

    SweepFlags ts;
    auto ts_over = make_overrides();
    auto* tsweep = app.add_subcommand("threshold-sweep", "error rates for many thresholds on shared snapshots");
    tsweep->add_option("--config", ts.config, "key = value experiment file");
    tsweep->add_option("--set", ts.sets, "extra key=value overrides");
    tsweep->add_option("--graph", ts.graph, "edge-list file (sets topology = file)");
    tsweep->add_option("--t-values", ts.t_values, "comma-separated thresholds")->required();
    add_overrides(tsweep, ts_over);
    add_common(tsweep);

    auto* describe = app.add_subcommand("describe", "print every default and modelling convention");
    (void)describe;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*generate) {
            if (common.out.empty())
                throw Failure{"generate: --out is required"};
            const Graph g = make_graph(gen_topo, common.seed);
            check(hs_graph_save(g.get(), common.out.c_str()), "writing " + common.out);
            std::cerr << "nodes=" << hs_graph_num_nodes(g.get()) << " edges=" << hs_graph_num_edges(g.get()) << '\n';
        } else if (*simulate) {
            if (common.out.empty())
                throw Failure{"simulate: --out is required"};
            const Graph g = load_graph(sim_graph, sim_compact);
            hs_snapshot* raw = nullptr;
            if (sim_null) {
                double p = 0.0;
                if (sim_null_p) {
                    p = *sim_null_p;
                } else {
                    const double n = static_cast<double>(hs_graph_num_nodes(g.get()));
                    const double size = std::ceil(sim.alpha * n - 1e-9);
                    p = (sim.f + 1.0) * sim.q * size / n;
                }
                check(hs_simulate_null(g.get(), p, common.seed, &raw), "simulate");
            } else {
                const hs_scenario s = to_scenario(sim);
                check(hs_simulate_epidemic(g.get(), &s, common.seed, &raw), "simulate");
            }
            const Snapshot snap(raw);
            check(hs_snapshot_write(snap.get(), common.out.c_str()), "writing " + common.out);
            std::cerr << "reporting=" << hs_snapshot_size(snap.get())
                      << " infected=" << hs_snapshot_infected_count(snap.get());
            if (hs_snapshot_truncated(snap.get()))
                std::cerr << " truncated=yes";
            std::cerr << '\n';
        } else if (*detect) {
            return run_detect(det, common);
        } else if (*gamma) {
            const Graph g = gam_graph.empty() ? make_graph(gam_topo, common.seed) : load_graph(gam_graph, false);
            std::vector<std::size_t> ks;
            for (double k : parse_list(gam_ks))
                ks.push_back(static_cast<std::size_t>(k));
            const hs_scenario s = to_scenario(gam);
            hs_gamma_profile* raw = nullptr;
            const std::string label = gam_graph.empty() ? gam_topo.kind : "file";
            check(hs_gamma_estimate(g.get(), &s, ks.data(), ks.size(), gam_trials, common.seed, label.c_str(), &raw),
                  "gamma");
            const Profile prof(raw);
            emit(hs_gamma_csv(prof.get()), common.out);
        } else if (*bounds) {
            double g_val = 0.0;
            std::size_t k = 0;
            if (!b_profile.empty()) {
                hs_gamma_profile* raw = nullptr;
                check(hs_gamma_read(b_profile.c_str(), &raw), "loading gamma profile");
                const Profile prof(raw);
                int qualified = 1;
                if (b_k)
                    k = *b_k;
                else
                    check(hs_gamma_solve_k(prof.get(), b_f, 0.0, &k, &qualified), "solving K");
                bool found = false;
                for (std::size_t i = 0; i < hs_gamma_count(prof.get()); ++i) {
                    std::size_t ki = 0;
                    double gi = 0.0;
                    check(hs_gamma_entry(prof.get(), i, &ki, &gi, nullptr), "gamma profile");
                    if (ki == k) {
                        g_val = gi;
                        found = true;
                    }
                }
                if (!found)
                    throw Failure{"gamma profile has no entry for K=" + std::to_string(k)};
                if (!qualified)
                    std::cerr << "warning: no K in the profile satisfies K >= log((f+1)/gamma)\n";
            } else {
                if (!b_gamma || !b_k)
                    throw Failure{"bounds: give --gamma-profile, or both --gamma and --k"};
                g_val = *b_gamma;
                k = *b_k;
            }
            hs_bounds b{};
            check(hs_error_bounds(g_val, b_q, b_alpha, b_f, k, b_nrep, &b), "bounds");
            std::ostringstream o;
            o << "K=" << k << "\ngamma=" << num(g_val) << "\nP=" << num(b.p_big) << "\nP_in=" << num(b.p_in_big)
              << "\nseparated=" << (b.separated ? "yes" : "no") << "\ntype1_bound=" << num(b.e1)
              << "\ntype2_bound=" << num(b.e2) << '\n';
            emit(o.str(), common.out);
        } else if (*sweep) {
            const Experiment e = build_experiment(sw, sw_over, sweep, common);
            hs_sweep_result* raw = nullptr;
            check(hs_experiment_run(e.get(), &raw), "sweep");
            const Sweep r(raw);
            emit(hs_sweep_csv(r.get()), common.out);
        } else if (*tsweep) {
            const Experiment e = build_experiment(ts, ts_over, tsweep, common);
            const auto t_values = parse_list(ts.t_values);
            hs_sweep_result* raw = nullptr;
            check(hs_experiment_threshold_sweep(e.get(), t_values.data(), t_values.size(), &raw), "threshold-sweep");
            const Sweep r(raw);
            emit(hs_sweep_csv(r.get()), common.out);
        } else {
            std::cout << hs_describe_defaults();
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
