#include <doctest.h>

#include "hotspot/error.hpp"
#include "hotspot/harness.hpp"
#include "hotspot/noise.hpp"
#include "oracle.hpp"

#include <cmath>
#include <set>

using namespace hotspot;

namespace {

ExperimentSpec small_er(std::size_t n = 1000) {
    ExperimentSpec s;
    s.topology.n = n;
    s.trials = 20;
    s.master_seed = 11;
    return s;
}

} // namespace

TEST_CASE("noise: zero flip probability matches exact queries") {
    const Graph g = gen_erdos_renyi(400, 3.0 / 400, 1);
    const NoisyNeighborhoods noisy(g, DistanceNoise{0.0, 1}, 5);
    const ExactNeighborhoods exact(g);
    Neighborhood a, b;
    for (NodeId i = 0; i < 400; i += 3) {
        noisy.nearest(i, 7, a);
        exact.nearest(i, 7, b);
        CHECK(a.members == b.members);
        noisy.ball(i, 3, a);
        exact.ball(i, 3, b);
        CHECK(a.members == b.members);
    }
}

TEST_CASE("noise: perturbations are stable, bounded and asymmetric") {
    const Graph g = gen_grid(2, 20);
    const NoisyNeighborhoods noisy(g, DistanceNoise{0.5, 2}, 9);
    std::size_t flipped = 0, asymmetric = 0, pairs = 0;
    for (NodeId i = 0; i < 60; ++i)
        for (NodeId j = 200; j < 260; ++j) {
            const std::uint32_t d = 5;
            const auto a = noisy.perceived_distance(i, j, d);
            CHECK(a == noisy.perceived_distance(i, j, d));
            CHECK((a == 3 || a == 5 || a == 7));
            const auto b = noisy.perceived_distance(j, i, d);
            flipped += a != d ? 1 : 0;
            asymmetric += (a != d) != (b != d) ? 1 : 0;
            ++pairs;
            CHECK(noisy.perceived_distance(i, j, 2) == 2);
        }
    CHECK(std::abs(static_cast<double>(flipped) / pairs - 0.5) < 0.05);
    CHECK(asymmetric > 0);
}

TEST_CASE("noise: queries agree with a brute-force perceived-distance sort") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const Graph g = oracle::random_graph(25, 0.12, rng);
        const auto d = oracle::all_pairs(g);
        const NoisyNeighborhoods noisy(g, DistanceNoise{0.4, 1 + static_cast<std::uint32_t>(trial % 2)}, rng());
        Neighborhood nb;
        for (NodeId i = 0; i < 25; ++i) {
            std::vector<std::pair<std::uint32_t, NodeId>> order;
            for (NodeId j = 0; j < 25; ++j)
                if (j != i && d[i][j] < oracle::kInf)
                    order.push_back({noisy.perceived_distance(i, j, static_cast<std::uint32_t>(d[i][j])), j});
            std::sort(order.begin(), order.end());
            for (std::size_t k : {1u, 3u, 6u}) {
                noisy.nearest(i, k, nb);
                std::vector<NodeId> want;
                for (std::size_t r = 0; r < std::min(k, order.size()); ++r)
                    want.push_back(order[r].second);
                REQUIRE(nb.members == want);
            }
            for (std::uint32_t l : {1u, 2u, 3u}) {
                noisy.ball(i, l, nb);
                std::vector<NodeId> want;
                for (const auto& [pd, v] : order)
                    if (pd <= l)
                        want.push_back(v);
                REQUIRE(nb.members == want);
            }
        }
    }
}

TEST_CASE("noise: validation") {
    CHECK_THROWS_AS((DistanceNoise{1.5, 1}.validate()), Error);
    CHECK_THROWS_AS((DistanceNoise{0.5, 0}.validate()), Error);
}

TEST_CASE("run_trial: full reporting with K = 1 always fires on a connected graph") {
    ExperimentSpec s;
    s.topology.kind = TopologyKind::Grid;
    s.topology.grid_side = 30;
    s.alpha = {0.3, 0};
    s.detector.fixed = DetectorConfig::canonical(1, 0);
    const Experiment exp(s);
    for (std::size_t t = 0; t < 100; ++t) {
        const auto r = exp.run_trial(Hypothesis::Epidemic, t);
        REQUIRE_FALSE(r.error.has_value());
        CHECK(r.verdict.label == Hypothesis::Epidemic);
        CHECK(r.verdict.hotspot_count > 0);
    }
}

TEST_CASE("run_trial: connected ER variant") {
    ExperimentSpec s = small_er(500);
    s.topology.er_mean_degree = 12.0;
    s.alpha = {0.3, 0};
    s.detector.fixed = DetectorConfig::canonical(1, 0);
    for (std::size_t t = 0; t < 100; ++t) {
        const auto r = run_trial(s, Hypothesis::Epidemic, t);
        REQUIRE_FALSE(r.error.has_value());
        CHECK(r.verdict.hotspot_count > 0);
    }
}

TEST_CASE("run_trial: null with p = 0 is never an epidemic") {
    ExperimentSpec s = small_er();
    s.null_p = 0.0;
    for (double t : {0.0, 1.0, 5.0}) {
        s.detector.fixed.t = t;
        const auto r = run_trial(s, Hypothesis::UniformNull, 3);
        CHECK(r.verdict.label == Hypothesis::UniformNull);
        CHECK(r.n_reporting == 0);
    }
}

TEST_CASE("run_trial: deterministic and errors are captured") {
    ExperimentSpec s = small_er();
    s.q = {0.5, 0};
    s.f = {1.0, 0};
    const auto a = run_trial(s, Hypothesis::Epidemic, 4);
    const auto b = run_trial(s, Hypothesis::Epidemic, 4);
    CHECK(a.verdict.hotspot_count == b.verdict.hotspot_count);
    CHECK(a.n_reporting == b.n_reporting);

    ExperimentSpec bad = small_er();
    bad.alpha = {0.6, 0};
    bad.f = {3.0, 0};
    const auto r = run_trial(bad, Hypothesis::UniformNull, 0);
    REQUIRE(r.error.has_value());
    CHECK(r.error->find("exceeds 1") != std::string::npos);
}

TEST_CASE("run_sweep: degenerate always-epidemic detector") {
    ExperimentSpec s = small_er(200);
    s.trials = 1;
    s.null_p = 0.5;
    s.detector.fixed.t = -1.0;
    const auto res = run_sweep(s);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].type1 == 1.0);
    CHECK(res.rows[0].type2 == 0.0);
    CHECK(res.rows[0].mean_error == 0.5);
}

TEST_CASE("run_sweep: rates are integer fractions and the mean is their average") {
    ExperimentSpec s = small_er(800);
    s.trials = 30;
    s.q = {0.5, 0};
    s.detector.fixed = DetectorConfig::canonical(1, 20);
    s.sweep_var = "seeds";
    s.sweep_values = {1, 5};
    const auto res = run_sweep(s);
    REQUIRE(res.rows.size() == 2);
    for (const auto& r : res.rows) {
        CHECK(r.failures == 0);
        const double a = r.type1 * 30, b = r.type2 * 30;
        CHECK(std::abs(a - std::round(a)) < 1e-9);
        CHECK(std::abs(b - std::round(b)) < 1e-9);
        CHECK(r.mean_error == doctest::Approx((r.type1 + r.type2) / 2));
        CHECK(r.type1 >= 0.0);
        CHECK(r.type1 <= 1.0);
    }
    CHECK(res.rows[1].sweep_value == 5.0);
}

TEST_CASE("run_sweep: byte-identical CSV and thread independence") {
    ExperimentSpec s = small_er(600);
    s.trials = 15;
    s.q = {0.6, 0};
    s.f = {1.0, 0};
    s.detector.fixed = {NeighborhoodMode::Ball, 2, 2, 3, {}};
    s.sweep_var = "n";
    s.sweep_values = {400, 600};
    s.threads = 1;
    const auto serial = format_sweep_csv(run_sweep(s));
    s.threads = 4;
    const auto parallel = format_sweep_csv(run_sweep(s));
    CHECK(serial == parallel);
    CHECK(serial == format_sweep_csv(run_sweep(s)));
    CHECK(serial.rfind(sweep_csv_header() + "\n", 0) == 0);
    s.master_seed = 12;
    CHECK(serial != format_sweep_csv(run_sweep(s)));
}

TEST_CASE("threshold sweep matches fixed-threshold sweeps on shared snapshots") {
    const Graph g = gen_erdos_renyi(1500, 2.0 / 1500, 3);
    ExperimentSpec s = small_er(1500);
    s.trials = 25;
    s.alpha = {0.13, 0};
    s.q = {0.5, 0};
    s.f = {1.0, 0};
    s.detector.fixed = {NeighborhoodMode::Ball, 3, 3, 0, {}};
    const std::vector<double> ts{-1.0, 2.0, 10.0, 30.0, 1e9};
    const auto swept = threshold_sweep(g, s, ts);
    REQUIRE(swept.rows.size() == ts.size());
    CHECK(swept.rows.front().type1 == 1.0);
    CHECK(swept.rows.front().type2 == 0.0);
    CHECK(swept.rows.back().type1 == 0.0);
    CHECK(swept.rows.back().type2 == 1.0);

    const auto shared = std::shared_ptr<const Graph>(&g, [](const Graph*) {});
    ExperimentSpec by_t = s;
    by_t.sweep_var = "t";
    by_t.sweep_values = ts;
    const auto direct = run_sweep(by_t, shared);
    for (std::size_t j = 0; j < ts.size(); ++j) {
        CHECK(direct.rows[j].type1 == swept.rows[j].type1);
        CHECK(direct.rows[j].type2 == swept.rows[j].type2);
        CHECK(direct.rows[j].mean_hotspots_epi == swept.rows[j].mean_hotspots_epi);
    }

    // without a graph, trials draw their own random graphs just like run_sweep
    const auto fresh = threshold_sweep(s, ts);
    const auto fresh_direct = run_sweep(by_t);
    for (std::size_t j = 0; j < ts.size(); ++j) {
        CHECK(fresh_direct.rows[j].type1 == fresh.rows[j].type1);
        CHECK(fresh_direct.rows[j].mean_hotspots_null == fresh.rows[j].mean_hotspots_null);
    }
}

TEST_CASE("derived detectors") {
    ExperimentSpec s = small_er(2000);
    s.alpha = {0.13, 0};
    s.q = {0.22, 0};
    s.f = {1.0, 0};
    s.detector.kind = DetectorKind::Dense;
    s.detector.gamma_source = GammaSource::Grid;
    const Experiment exp(s);
    const auto g = exp.graph_for_trial(0);
    const auto snap = exp.snapshot(*g, Hypothesis::Epidemic, 0);
    const auto cfg = exp.detector_for(*g, snap);
    CHECK(cfg.k_or_l == 1);
    CHECK(cfg.s == 1);

    s.detector.gamma_source = GammaSource::Tree;
    CHECK(Experiment(s).detector_for(*g, snap).k_or_l == 1);

    s.detector.kind = DetectorKind::Small;
    const auto small = Experiment(s).detector_for(*g, snap);
    CHECK(small.t == 0.5);
    CHECK(small.k_or_l >= 1);
}

TEST_CASE("config: parse, format and round trip") {
    const auto spec = parse_experiment_config(
        "# comment\n"
        "topology = grid\n"
        "grid_side = 40\n"
        "alpha = 1\nalpha_exp = -0.7\n"
        "mode = ball\nl = 2\ns = 1\nt = 1.5\n"
        "noise_prob = 0.1  # trailing comment\n"
        "noise_d = 2\n"
        "sweep = n\nvalues = 1000, 2000,4000\n"
        "trials = 7\nseed = 99\ncrn = false\n");
    CHECK(spec.topology.kind == TopologyKind::Grid);
    CHECK(spec.topology.grid_side == 40);
    CHECK(spec.alpha.exponent == doctest::Approx(-0.7));
    CHECK(spec.detector.fixed.mode == NeighborhoodMode::Ball);
    CHECK(spec.detector.fixed.k_or_l == 2);
    CHECK(spec.noise->magnitude == 2);
    CHECK(spec.sweep_values == std::vector<double>{1000, 2000, 4000});
    CHECK(spec.master_seed == 99);
    CHECK_FALSE(spec.common_random_numbers);
    const auto text = format_experiment_config(spec);
    CHECK(format_experiment_config(parse_experiment_config(text)) == text);

    CHECK_THROWS_AS(parse_experiment_config("bogus = 1\n"), Error);
    CHECK_THROWS_AS(parse_experiment_config("n = -3\n"), Error);
    CHECK_THROWS_AS(parse_experiment_config("alpha\n"), Error);
    CHECK_THROWS_AS(parse_experiment_config("topology = moon\n"), Error);
    CHECK_THROWS_AS(parse_experiment_config("sweep = color\nvalues = 1\n").validate(), Error);
    CHECK_THROWS_AS(parse_experiment_config("trials = 0\n").validate(), Error);
}

TEST_CASE("describe lists defaults and conventions") {
    const auto text = describe_defaults();
    for (const char* key : {"log_base", "nn_tie_break", "extras_rounding", "auto_regime_cutoff", "trials = 200",
                            "small_regime", "seed_placement", "exit_codes"})
        CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("scaling rules") {
    const ScalingRule r{1.0, -0.7};
    CHECK(r.at(1000) == doctest::Approx(std::pow(1000.0, -0.7)));
    ExperimentSpec s;
    s.sweep_var = "q";
    CHECK(s.at_sweep_value(0.3).q.coef == 0.3);
    s.sweep_var = "seeds";
    CHECK_THROWS_AS(s.at_sweep_value(2.5), Error);
}
