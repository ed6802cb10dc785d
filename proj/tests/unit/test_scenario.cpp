#include <doctest.h>

#include "hotspot/error.hpp"
#include "hotspot/rng.hpp"
#include "hotspot/scenario.hpp"
#include "oracle.hpp"

#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>

using namespace hotspot;

TEST_CASE("simulate_si: target equal to seed count infects exactly the seeds") {
    const Graph g = gen_grid(2, 10);
    const std::vector<NodeId> seeds{3, 40, 77};
    const auto out = simulate_si(g, seeds, 3, 1);
    CHECK(out.infected == seeds);
    CHECK_FALSE(out.truncated);
}

TEST_CASE("simulate_si: connected graph to full size infects everything") {
    const Graph g = gen_grid(2, 8);
    const auto out = simulate_si(g, std::vector<NodeId>{0}, g.num_nodes(), 9);
    CHECK(out.infected.size() == g.num_nodes());
    CHECK(std::set<NodeId>(out.infected.begin(), out.infected.end()).size() == g.num_nodes());
    CHECK_FALSE(out.truncated);
    CHECK(std::is_sorted(out.infection_time.begin(), out.infection_time.end()));
}

TEST_CASE("simulate_si: growth on a path is a contiguous interval") {
    const Graph g = oracle::path(5);
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto inf = simulate_si(g, std::vector<NodeId>{2}, 3, s).infected;
        std::sort(inf.begin(), inf.end());
        CHECK(inf.size() == 3);
        CHECK(inf.back() - inf.front() == 2);
        CHECK(std::find(inf.begin(), inf.end(), 2u) != inf.end());
    }
}

TEST_CASE("simulate_si: every non-seed has an earlier-infected neighbor") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const Graph g = gen_erdos_renyi(400, 3.0 / 400, static_cast<std::uint64_t>(trial));
        const auto seeds = pick_seeds_from(g.largest_component(), 3, static_cast<std::uint64_t>(trial));
        const auto out = simulate_si(g, seeds, 150, static_cast<std::uint64_t>(trial) + 100);
        const auto rank = out.infection_rank(g.num_nodes());
        CHECK(std::equal(seeds.begin(), seeds.end(), out.infected.begin()));
        for (std::size_t r = seeds.size(); r < out.infected.size(); ++r) {
            const NodeId v = out.infected[r];
            bool ok = false;
            for (NodeId u : g.neighbors(v))
                ok = ok || rank[u] < r;
            CHECK(ok);
        }
    }
}

TEST_CASE("simulate_si: disconnected target is truncated to the seed component") {
    const Graph g = Graph::from_edges(6, std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}});
    const auto out = simulate_si(g, std::vector<NodeId>{0}, 5, 1);
    CHECK(out.truncated);
    CHECK(out.infected.size() == 3);
}

TEST_CASE("simulate_si: time budget stops early") {
    const Graph g = gen_grid(2, 30);
    const auto out = simulate_si(g, std::vector<NodeId>{465}, g.num_nodes(), 4, 2.0);
    CHECK(out.infected.size() < g.num_nodes());
    for (double t : out.infection_time)
        CHECK(t <= 2.0);
}

TEST_CASE("simulate_si: precondition violations") {
    const Graph g = oracle::path(4);
    CHECK_THROWS_AS(simulate_si(g, std::vector<NodeId>{}, 2, 0), Error);
    CHECK_THROWS_AS(simulate_si(g, std::vector<NodeId>{1, 1}, 3, 0), Error);
    CHECK_THROWS_AS(simulate_si(g, std::vector<NodeId>{1, 2}, 1, 0), Error);
    CHECK_THROWS_AS(simulate_si(g, std::vector<NodeId>{9}, 1, 0), Error);
}

TEST_CASE("simulate_si: K4 exchangeability of the last uninfected node") {
    const Graph g = oracle::complete(4);
    std::array<int, 4> last{};
    const int runs = 3000;
    for (int s = 0; s < runs; ++s) {
        const auto inf = simulate_si(g, std::vector<NodeId>{0}, 3, static_cast<std::uint64_t>(s));
        int missing = 6 - static_cast<int>(std::accumulate(inf.infected.begin(), inf.infected.end(), 0u));
        ++last[static_cast<std::size_t>(missing)];
    }
    CHECK(last[0] == 0);
    const double sd = std::sqrt(runs * (1.0 / 3) * (2.0 / 3));
    for (int v = 1; v < 4; ++v)
        CHECK(std::abs(last[static_cast<std::size_t>(v)] - runs / 3.0) < 3 * sd);
}

TEST_CASE("apply_reporting: q = 0, f = 0 and exact extra counts") {
    const Graph g = gen_grid(2, 20);
    const auto out = simulate_si(g, std::vector<NodeId>{210}, 80, 5);
    CHECK(apply_reporting(out, g, 0.0, 3.0, 1).reporting.empty());

    const auto exact = apply_reporting(out, g, 0.5, 0.0, 2);
    CHECK(exact.reporting == exact.true_reporters);

    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto snap = apply_reporting(out, g, 0.3, 1.5, s);
        CHECK(snap.truth == Hypothesis::Epidemic);
        CHECK(snap.reporting.size() == snap.true_reporters.size() + round_count(1.5 * snap.true_reporters.size()));
        CHECK(std::includes(snap.reporting.begin(), snap.reporting.end(), snap.true_reporters.begin(),
                            snap.true_reporters.end()));
        CHECK(std::includes(snap.infected.begin(), snap.infected.end(), snap.true_reporters.begin(),
                            snap.true_reporters.end()));
        CHECK(std::is_sorted(snap.reporting.begin(), snap.reporting.end()));
    }
}

TEST_CASE("apply_reporting: two true reporters with f = 1 draw two extras") {
    const Graph g = gen_grid(2, 10);
    EpidemicOutcome out;
    out.seeds = {44};
    out.infected = {44, 45};
    out.infection_time = {0.0, 0.5};
    const auto snap = apply_reporting(out, g, 1.0, 1.0, 3);
    CHECK(snap.true_reporters == std::vector<NodeId>{44, 45});
    CHECK(snap.reporting.size() == 4);
}

TEST_CASE("apply_reporting: extras clamp to the remaining nodes") {
    const Graph g = oracle::path(6);
    const auto out = simulate_si(g, std::vector<NodeId>{0}, 3, 1);
    const auto snap = apply_reporting(out, g, 1.0, 10.0, 1);
    CHECK(snap.extras_clamped);
    CHECK(snap.reporting.size() == 6);
}

TEST_CASE("apply_reporting: mean true reporters is q |S|") {
    const Graph g = gen_grid(2, 30);
    const auto out = simulate_si(g, std::vector<NodeId>{0}, 200, 8);
    double total = 0;
    const int runs = 400;
    for (int s = 0; s < runs; ++s)
        total += static_cast<double>(apply_reporting(out, g, 0.3, 0.0, static_cast<std::uint64_t>(s)).true_reporters.size());
    const double sd = std::sqrt(200 * 0.3 * 0.7 / runs);
    CHECK(std::abs(total / runs - 60.0) < 4 * sd);
}

TEST_CASE("uniform null: extremes and binomial concentration") {
    const Graph g = gen_erdos_renyi(8000, 2.0 / 8000, 1);
    CHECK(generate_uniform_null(g, 0.0, 1).reporting.empty());
    CHECK(generate_uniform_null(g, 1.0, 1).reporting.size() == 8000);
    const double sigma = std::sqrt(8000 * 0.2 * 0.8);
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto snap = generate_uniform_null(g, 0.2, s);
        CHECK(snap.truth == Hypothesis::UniformNull);
        CHECK(snap.true_reporters.empty());
        CHECK(std::abs(static_cast<double>(snap.reporting.size()) - 1600.0) < 3.5 * sigma);
    }
    CHECK_THROWS_AS(generate_uniform_null(g, 1.2, 1), Error);
}

TEST_CASE("scenario params: null probability and feasibility") {
    ScenarioParams p{0.25, 0.4, 1.0, 1};
    CHECK(p.null_probability() == doctest::Approx(0.2));
    CHECK(p.infection_size(1000) == 250);
    CHECK(ScenarioParams{0.13, 1, 0, 1}.infection_size(8000) == 1040);
    CHECK(ScenarioParams{0.06, 1, 0, 1}.infection_size(8000) == 480);
    CHECK_NOTHROW(p.validate(100));
    ScenarioParams bad{0.5, 1.0, 2.0, 1};
    try {
        bad.validate(100);
        FAIL("expected infeasible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Infeasible);
    }
    CHECK_THROWS_AS((ScenarioParams{0.01, 1.0, 0.0, 5}.validate(100)), Error);
}

TEST_CASE("expected report count matches between epidemic and null") {
    const Graph g = gen_grid(2, 40);
    const ScenarioParams params{0.25, 0.4, 1.0, 1};
    const std::size_t size = params.infection_size(g.num_nodes());
    double epi = 0, null = 0;
    const int runs = 300;
    for (int s = 0; s < runs; ++s) {
        const auto out = simulate_si(g, pick_seeds(g, 1, static_cast<std::uint64_t>(s)), size, static_cast<std::uint64_t>(s));
        epi += static_cast<double>(apply_reporting(out, g, params.q, params.f, static_cast<std::uint64_t>(s)).reporting.size());
        null += static_cast<double>(generate_uniform_null(g, params.null_probability(), static_cast<std::uint64_t>(s)).reporting.size());
    }
    // both are 320 in expectation; sd of the epidemic count is 2 sqrt(400 * .24) ~ 19.6
    CHECK(std::abs(epi / runs - 320.0) < 4 * 19.6 / std::sqrt(runs));
    CHECK(std::abs(null / runs - 320.0) < 4 * 16.0 / std::sqrt(runs));
}

TEST_CASE("pick_seeds: distinct uniform samples") {
    const Graph g = gen_erdos_renyi(33696, 1e-4, 2);
    CHECK(pick_seeds(g, 1, 3).size() == 1);
    const auto s = pick_seeds(g, 200, 4);
    CHECK(std::set<NodeId>(s.begin(), s.end()).size() == 200);
    const Graph small = oracle::path(7);
    auto all = pick_seeds(small, 7, 5);
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(pick_seeds(small, 8, 1), Error);
    CHECK_THROWS_AS(pick_seeds(small, 0, 1), Error);

    std::array<int, 5> hits{};
    for (std::uint64_t r = 0; r < 5000; ++r)
        ++hits[pick_seeds(oracle::path(5), 2, r)[0]];
    for (int h : hits)
        CHECK(std::abs(h - 1000) < 4 * std::sqrt(5000 * 0.2 * 0.8));
}

TEST_CASE("round_count: half to even") {
    CHECK(round_count(0.5) == 0);
    CHECK(round_count(1.5) == 2);
    CHECK(round_count(2.5) == 2);
    CHECK(round_count(2.4999) == 2);
    CHECK(round_count(2.6) == 3);
    CHECK(round_count(0.0) == 0);
}

TEST_CASE("snapshot text format round trip and errors") {
    ReportSnapshot s;
    s.num_nodes = 10;
    s.truth = Hypothesis::Epidemic;
    s.reporting = {1, 4, 9};
    const auto text = format_snapshot(s);
    CHECK(text.rfind("truth=Epidemic n=10\n", 0) == 0);
    const auto back = parse_snapshot(text);
    CHECK(back.num_nodes == 10);
    CHECK(back.truth == Hypothesis::Epidemic);
    CHECK(back.reporting == s.reporting);

    const auto unknown = parse_snapshot("truth=unknown n=5\n3\n1\n3\n\n");
    CHECK_FALSE(unknown.truth.has_value());
    CHECK(unknown.reporting == std::vector<NodeId>{1, 3});

    CHECK_THROWS_AS(parse_snapshot("truth=UniformNull n=5\n7\n"), Error);
    CHECK_THROWS_AS(parse_snapshot("n=5\n1\n"), Error);
    CHECK_THROWS_AS(parse_snapshot("truth=UniformNull n=5\nabc\n"), Error);
    CHECK_THROWS_AS(parse_snapshot(""), Error);

    const auto path = std::filesystem::temp_directory_path() / "hotspot_test_snap.txt";
    write_snapshot(s, path);
    CHECK(read_snapshot(path).reporting == s.reporting);
    std::filesystem::remove(path);
}

TEST_CASE("seed derivation is stable and spreads nearby inputs") {
    static_assert(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(0, {1}) != derive_seed(0, {2}));
    CHECK(derive_seed(0, {1, 2}) != derive_seed(0, {2, 1}));
    CHECK(derive_seed(0, {1}) != derive_seed(1, {1}));
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform01(rng);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(uniform_below(rng, 7) < 7);
    }
}
