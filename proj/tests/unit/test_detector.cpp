#include <doctest.h>

#include "hotspot/detector.hpp"
#include "hotspot/error.hpp"
#include "oracle.hpp"

#include <cmath>
#include <optional>

using namespace hotspot;

namespace {

ReportingSet reporting_of(std::size_t n, std::vector<NodeId> ids) { return ReportingSet(n, ids); }

double tail_by_summation(std::size_t n, double p, std::size_t s) {
    double total = 0.0;
    for (std::size_t j = s; j <= n; ++j) {
        double c = 1.0;
        for (std::size_t r = 0; r < j; ++r)
            c = c * static_cast<double>(n - r) / static_cast<double>(r + 1);
        total += c * std::pow(p, static_cast<double>(j)) * std::pow(1 - p, static_cast<double>(n - j));
    }
    return total;
}

} // namespace

TEST_CASE("indicator: worked examples") {
    const Graph p3 = oracle::path(3);
    const auto all = reporting_of(3, {0, 1, 2});
    CHECK(hotspot_indicator(p3, 1, DetectorConfig::canonical(2, 0), all));

    const Graph p5 = oracle::path(5);
    DetectorConfig big{NeighborhoodMode::NearestNeighbors, 2, 3, 0, {}};
    CHECK_FALSE(hotspot_indicator(p5, 2, big, reporting_of(5, {0, 1, 2, 3, 4})));
    CHECK_FALSE(hotspot_indicator(p5, 2, DetectorConfig::canonical(1, 0), reporting_of(5, {2})));
}

TEST_CASE("classify: worked examples and strict boundary") {
    const Graph p5 = oracle::path(5);
    const auto empty = classify(p5, reporting_of(5, {}), DetectorConfig::canonical(2, 0));
    CHECK(empty.hotspot_count == 0);
    CHECK(empty.label == Hypothesis::UniformNull);

    const auto v = classify(p5, reporting_of(5, {1, 2, 3}), DetectorConfig::canonical(2, 0));
    CHECK(v.hotspot_count == 1);
    CHECK(v.label == Hypothesis::Epidemic);
    REQUIRE(v.indicators.has_value());
    CHECK(*v.indicators == std::vector<std::uint8_t>{0, 1, 0});

    const auto tie = classify(p5, reporting_of(5, {1, 2, 3}), DetectorConfig::canonical(2, 1.0));
    CHECK(tie.label == Hypothesis::UniformNull);
    const auto below = classify(p5, reporting_of(5, {1, 2, 3}), DetectorConfig::canonical(2, std::nextafter(1.0, 0.0)));
    CHECK(below.label == Hypothesis::Epidemic);
}

TEST_CASE("classify: indicator retention can be switched off") {
    const Graph p5 = oracle::path(5);
    const auto v = classify(p5, reporting_of(5, {1, 2}), DetectorConfig::canonical(1, 0), ClassifyOptions{false});
    CHECK_FALSE(v.indicators.has_value());
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS((DetectorConfig{NeighborhoodMode::NearestNeighbors, 2, 0, 0, {}}.validate()), Error);
    CHECK_THROWS_AS((DetectorConfig{NeighborhoodMode::NearestNeighbors, 0, 1, 0, {}}.validate()), Error);
    CHECK_NOTHROW((DetectorConfig{NeighborhoodMode::Ball, 3, 4, 2.5, {}}.validate()));
}

TEST_CASE("oracle equivalence: 500 random graphs up to 15 nodes") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> size(1, 15), kdist(1, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = size(rng);
        const Graph g = oracle::random_graph(n, 0.05 + 0.5 * unit(rng), rng);
        const double rate = unit(rng);
        std::vector<bool> member(n);
        std::vector<NodeId> ids;
        for (std::size_t v = 0; v < n; ++v)
            if ((member[v] = unit(rng) < rate))
                ids.push_back(static_cast<NodeId>(v));
        const ReportingSet rep(n, ids);
        const std::size_t k = kdist(rng);
        REQUIRE(classify(g, rep, DetectorConfig::canonical(k, 0)).hotspot_count ==
                oracle::hotspots(g, member, NeighborhoodMode::NearestNeighbors, k, k));
        const std::size_t s = kdist(rng);
        REQUIRE(classify(g, rep, {NeighborhoodMode::Ball, k, s, 0, {}}).hotspot_count ==
                oracle::hotspots(g, member, NeighborhoodMode::Ball, k, s));
    }
}

TEST_CASE("batch counts agree with one classify per parameter") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = oracle::random_graph(60, 0.05, rng);
        std::vector<NodeId> ids;
        for (NodeId v = 0; v < 60; ++v)
            if (rng() % 3 == 0)
                ids.push_back(v);
        const ReportingSet rep(60, ids);
        const ExactNeighborhoods src(g);
        const auto by_k = hotspot_counts_by_k(src, rep, 6);
        REQUIRE(by_k.size() == 6);
        for (std::size_t k = 1; k <= 6; ++k)
            CHECK(by_k[k - 1] == classify(g, rep, DetectorConfig::canonical(k, 0)).hotspot_count);
        const auto by_s = hotspot_counts_by_s(src, rep, NeighborhoodMode::Ball, 2, 5);
        REQUIRE(by_s.size() == 5);
        for (std::size_t s = 1; s <= 5; ++s)
            CHECK(by_s[s - 1] == classify(g, rep, {NeighborhoodMode::Ball, 2, s, 0, {}}).hotspot_count);
    }
}

TEST_CASE("monotonicity: adding a reporter never lowers the count") {
    std::mt19937_64 rng(5);
    const Graph g = gen_erdos_renyi(300, 4.0 / 300, 2);
    std::vector<NodeId> ids;
    std::size_t prev = 0;
    for (int step = 0; step < 120; ++step) {
        ids.push_back(static_cast<NodeId>(rng() % 300));
        const ReportingSet rep(300, ids);
        const auto c = classify(g, rep, DetectorConfig::canonical(3, 0)).hotspot_count;
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("locality: edits far from every reporter leave the count unchanged") {
    // two grids joined by a long path; reporters only in the first grid
    const std::size_t side = 8, cells = side * side, path_len = 12;
    std::vector<Edge> edges;
    for (const auto& e : gen_grid(2, side).edges()) {
        edges.push_back(e);
        edges.push_back({e.first + static_cast<NodeId>(cells + path_len), e.second + static_cast<NodeId>(cells + path_len)});
    }
    for (std::size_t i = 0; i <= path_len; ++i)
        edges.push_back({static_cast<NodeId>(i == 0 ? cells - 1 : cells + i - 1), static_cast<NodeId>(cells + i)});
    const std::size_t n = 2 * cells + path_len;
    const Graph base = Graph::from_edges(n, edges);
    std::vector<NodeId> ids;
    for (NodeId v = 0; v < 20; ++v)
        ids.push_back(v);
    const ReportingSet rep(n, ids);
    const auto cfg = DetectorConfig::canonical(3, 0);
    const auto before = classify(base, rep, cfg).hotspot_count;

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        auto edited = edges;
        const NodeId far_lo = static_cast<NodeId>(cells + path_len);
        for (int e = 0; e < 30; ++e)
            edited.push_back({static_cast<NodeId>(far_lo + rng() % cells), static_cast<NodeId>(far_lo + rng() % cells)});
        CHECK(classify(Graph::from_edges(n, edited), rep, cfg).hotspot_count == before);
    }
}

TEST_CASE("dense parameter rule") {
    const auto a = select_params_dense(1.0, 1.0, 0.5, 0.1, 1000);
    CHECK(a.config.k_or_l == 1);
    CHECK(a.config.s == 1);
    CHECK(a.config.mode == NeighborhoodMode::NearestNeighbors);
    CHECK(a.raw_k == doctest::Approx(std::log(2.0)));

    const auto b = select_params_dense(1.0, 0.0, 0.5, 0.1, 1000);
    CHECK(b.config.k_or_l == 1);
    CHECK(b.config.t == doctest::Approx(300.0));

    // grid special case: K = ceil(ln(f+1)), T = (N/2)(p_in^K/(f+1) + p^K)
    const auto c = select_params_dense(1.0, 19.0, 0.6, 0.3, 500);
    CHECK(c.config.k_or_l == 3);
    CHECK(c.config.t == doctest::Approx(250.0 * (std::pow(0.6, 3) / 20.0 + std::pow(0.3, 3))));

    // fallback gamma 1/|S| with |S| = 2022
    const auto d = select_params_dense(1.0 / 2022, 1.0, 0.5, 0.1, 1000);
    CHECK(d.config.k_or_l == static_cast<std::size_t>(std::ceil(std::log(2.0 * 2022))));

    // base-10 override
    CHECK(select_params_dense(0.01, 9.0, 0.5, 0.1, 100, 10.0).config.k_or_l == 3);

    try {
        select_params_dense(0.0, 1.0, 0.5, 0.1, 100);
        FAIL("expected an error for gamma = 0");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("boundary covers infection") != std::string::npos);
    }
    CHECK_THROWS_AS(select_params_dense(1.0, 1.0, 0.1, 0.5, 100), Error);
}

TEST_CASE("small-regime parameter rule") {
    const auto a = select_params_small({0.6, 0.5, 0.1});
    CHECK(a.config.k_or_l == 1);
    CHECK(a.config.t == 0.5);
    CHECK(a.feasible);
    CHECK(select_params_small({0.25, 0.0, 0.0}).config.k_or_l == 3);
    CHECK(select_params_small({0.999999, 0.0, 0.0}).config.k_or_l == 1);
    CHECK(select_params_small({0.5, 0.0, 0.0}).config.k_or_l == 1);
    const auto infeasible = select_params_small({0.25, 0.2, 0.1});
    CHECK_FALSE(infeasible.feasible);
    CHECK_THROWS_AS(select_params_small({0.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(select_params_small({1.0, 0.0, 0.0}), Error);
}

TEST_CASE("binomial upper tail matches direct summation") {
    for (std::size_t n : {1u, 3u, 10u, 25u})
        for (double p : {0.0, 0.05, 0.3, 0.9, 1.0})
            for (std::size_t s = 0; s <= n + 1; ++s)
                CHECK(binomial_upper_tail(n, p, s) == doctest::Approx(tail_by_summation(n, p, s)).epsilon(1e-9));
    CHECK(binomial_upper_tail(1000, 0.001, 900) >= 0.0);
}

TEST_CASE("null expectation equals N_rep p^K on a graph without short neighborhoods") {
    const Graph g = gen_grid(2, 30);
    std::vector<NodeId> ids;
    for (NodeId v = 0; v < g.num_nodes(); v += 7)
        ids.push_back(v);
    const ReportingSet rep(g.num_nodes(), ids);
    const ExactNeighborhoods src(g);
    CHECK(null_hotspot_expectation(src, rep, NeighborhoodMode::NearestNeighbors, 2, 2, 0.3) ==
          doctest::Approx(static_cast<double>(ids.size()) * 0.09));
}

TEST_CASE("multi-K test") {
    const Graph g = gen_erdos_renyi(2000, 2.0 / 2000, 4);
    const ExactNeighborhoods src(g);
    const std::vector<std::size_t> ks{1, 2, 3};
    const std::vector<double> zero(3, 0.0);
    const auto none = multi_k_test(src, ReportingSet(2000, std::vector<NodeId>{}), ks, zero, 3.0);
    CHECK(none.verdict.label == Hypothesis::UniformNull);
    CHECK_FALSE(none.firing_k.has_value());

    // plant a 10-clique of reporters
    std::vector<Edge> edges = g.edges();
    for (NodeId a = 100; a < 110; ++a)
        for (NodeId b = a + 1; b < 110; ++b)
            edges.push_back({a, b});
    const Graph planted = Graph::from_edges(2000, edges);
    std::vector<NodeId> clique;
    for (NodeId a = 100; a < 110; ++a)
        clique.push_back(a);
    const double p = 10.0 / 2000;
    const std::vector<double> two{10 * p * p};
    const auto fired = multi_k_test(ExactNeighborhoods(planted), ReportingSet(2000, clique),
                                    std::vector<std::size_t>{2}, two, 3.0);
    CHECK(fired.verdict.label == Hypothesis::Epidemic);
    CHECK(fired.firing_k == 2u);
    // a member counts unless a lower-id outside neighbor displaces a clique peer
    std::size_t inside = 0;
    for (NodeId a : clique) {
        const auto nb = nearest_neighbors(planted, a, 2).members;
        inside += std::all_of(nb.begin(), nb.end(), [](NodeId v) { return v >= 100 && v < 110; });
    }
    CHECK(inside >= 8);
    CHECK(fired.counts == std::vector<std::size_t>{inside});

    CHECK_THROWS_AS(multi_k_test(src, ReportingSet(2000, clique), std::vector<std::size_t>{}, {}, 3.0), Error);
    CHECK_THROWS_AS(multi_k_test(src, ReportingSet(2000, clique), std::vector<std::size_t>{9}, std::vector<double>{0}, 3.0),
                    Error);
}

TEST_CASE("multi-K test on null snapshots: firing rule and overdispersion") {
    // Null hotspot counts are positively correlated (overlapping neighborhoods),
    // and for large K the expectation is far below 1/16 so one hotspot fires.
    // Both push the false-alarm rate well above what a Poisson bound suggests.
    const std::size_t n = 4000;
    const double p = 0.2, factor = 4.0;
    const Graph g = gen_erdos_renyi(n, 2.0 / n, 17);
    const ExactNeighborhoods src(g);
    const std::size_t k_max = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n))));
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k <= k_max; ++k)
        ks.push_back(k);
    int alarms = 0;
    const int trials = 500;
    std::vector<double> dev(k_max), dev2(k_max), mean(k_max);
    for (int t = 0; t < trials; ++t) {
        const auto snap = generate_uniform_null(g, p, static_cast<std::uint64_t>(t));
        const ReportingSet rep(snap);
        std::vector<double> expect;
        for (auto k : ks)
            expect.push_back(null_hotspot_expectation(src, rep, NeighborhoodMode::NearestNeighbors, k, k, p));
        const auto r = multi_k_test(src, rep, ks, expect, factor);
        std::optional<std::size_t> first;
        for (std::size_t j = 0; j < ks.size(); ++j) {
            REQUIRE(r.counts[j] == classify(src, rep, DetectorConfig::canonical(ks[j], 0)).hotspot_count);
            const double d = static_cast<double>(r.counts[j]) - expect[j];
            if (!first && std::abs(d) > factor * std::sqrt(expect[j]))
                first = ks[j];
            dev[j] += d;
            dev2[j] += d * d;
            mean[j] += expect[j];
        }
        REQUIRE(r.firing_k == first);
        alarms += r.verdict.label == Hypothesis::Epidemic ? 1 : 0;
    }
    for (std::size_t j = 0; j < k_max; ++j)
        CHECK(std::abs(dev[j] / trials) < 0.1 * std::max(1.0, mean[j] / trials));
    for (std::size_t j = 1; j < 5; ++j)
        CHECK(dev2[j] / trials > 1.3 * mean[j] / trials);
    CHECK(alarms > trials / 100);
}

TEST_CASE("verdict CSV row") {
    Verdict v;
    v.label = Hypothesis::Epidemic;
    v.hotspot_count = 12;
    v.threshold = 0.5;
    v.k_or_l = 3;
    v.mode = NeighborhoodMode::Ball;
    CHECK(verdict_csv_header() == "truth,label,hotspot_count,threshold,K,mode");
    CHECK(verdict_csv_row(v, Hypothesis::UniformNull) == "UniformNull,Epidemic,12,0.5,3,ball");
    CHECK(verdict_csv_row(v, std::nullopt) == ",Epidemic,12,0.5,3,ball");
}
