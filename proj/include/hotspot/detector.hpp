#pragma once

#include "hotspot/neighborhood.hpp"
#include "hotspot/scenario.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hotspot {

struct DetectorConfig {
    NeighborhoodMode mode = NeighborhoodMode::NearestNeighbors;
    std::size_t k_or_l = 1; // K for nearest-neighbor mode, radius l for balls
    std::size_t s = 1;      // reporting members needed for a hotspot
    double t = 0.0;         // Epidemic iff hotspot count > t
    std::string note;       // carried into the verdict

    // Canonical form: all K nearest neighbors must report.
    static DetectorConfig canonical(std::size_t k, double t) {
        return {NeighborhoodMode::NearestNeighbors, k, k, t, {}};
    }
    void validate() const;
};

struct Verdict {
    Hypothesis label = Hypothesis::UniformNull;
    std::size_t hotspot_count = 0;
    double threshold = 0.0;
    NeighborhoodMode mode = NeighborhoodMode::NearestNeighbors;
    std::size_t k_or_l = 0;
    std::size_t s = 0;
    std::string note;
    // indicator per reporting node, parallel to the reporting id list
    std::optional<std::vector<std::uint8_t>> indicators;
};

// CSV row "truth,label,hotspot_count,threshold,K,mode"; truth left empty
// when unknown.
std::string verdict_csv_header();
std::string verdict_csv_row(const Verdict& v, std::optional<Hypothesis> truth);

struct SmallRegimeParams {
    double beta = 0.5; // N_reporting = N^(1 - beta)
    double rho = 0.0;  // |S_r| = N^rho
    double mu = 0.0;   // q = N^-mu
};

struct ClassifyOptions {
    // Defaults to on for graphs with at most 10^6 nodes.
    std::optional<bool> retain_indicators;
};

// Number of members of `nb` that report (the center never counts).
std::size_t count_reporting(const Neighborhood& nb, const ReportingSet& reporting);

bool hotspot_indicator(const NeighborhoodSource& src, NodeId i, const DetectorConfig& cfg, const ReportingSet& reporting);
bool hotspot_indicator(const Graph& g, NodeId i, const DetectorConfig& cfg, const ReportingSet& reporting);

// Sums indicators over reporting nodes; runtime scales with the reporting
// set times neighborhood size.
Verdict classify(const NeighborhoodSource& src, const ReportingSet& reporting, const DetectorConfig& cfg,
                 const ClassifyOptions& opts = {});
Verdict classify(const Graph& g, const ReportingSet& reporting, const DetectorConfig& cfg,
                 const ClassifyOptions& opts = {});

// Hotspot counts of the canonical detector for K = 1..k_max from one BFS per
// reporting node; element K-1 holds the count for K.
std::vector<std::size_t> hotspot_counts_by_k(const NeighborhoodSource& src, const ReportingSet& reporting,
                                             std::size_t k_max);
// Counts for thresholds s = 1..s_max over a fixed neighborhood definition.
std::vector<std::size_t> hotspot_counts_by_s(const NeighborhoodSource& src, const ReportingSet& reporting,
                                             NeighborhoodMode mode, std::size_t k_or_l, std::size_t s_max);

// Expected hotspot count if the same reporting centers were surrounded by
// independent reporters at rate p: sum over centers of P(Bin(|nbhd|, p) >= s).
// For full K-neighborhoods and s = K each term is p^K.
double null_hotspot_expectation(const NeighborhoodSource& src, const ReportingSet& reporting,
                                NeighborhoodMode mode, std::size_t k_or_l, std::size_t s, double p);

// P(Bin(n, p) >= s)
double binomial_upper_tail(std::size_t n, double p, std::size_t s);

struct DenseSelection {
    DetectorConfig config;
    double raw_k = 0.0; // log(gamma^-1 (f+1)) before ceiling and flooring
    double log_base = 0.0;
};

// K = max(1, ceil(log_b(gamma^-1 (f+1)))), T = (n_rep/2)(gamma p_in^K/(f+1) + p^K).
// log_base <= 0 selects the natural logarithm.
DenseSelection select_params_dense(double gamma, double f, double p_in, double p, std::size_t n_reporting,
                                   double log_base = 0.0);
// Threshold for a given K with the same formula.
double dense_threshold(double gamma, double f, double p_in, double p, std::size_t n_reporting, std::size_t k);

struct SmallSelection {
    DetectorConfig config;
    bool feasible = false; // K mu <= rho
};

// K = max(1, ceil(1/beta) - 1), fires on any single hotspot (t = 0.5).
SmallSelection select_params_small(const SmallRegimeParams& params);

struct MultiKResult {
    Verdict verdict;
    std::vector<std::size_t> k_values;
    std::vector<std::size_t> counts;
    std::vector<double> expectations;
    std::optional<std::size_t> firing_k; // first K whose deviation exceeded the bound
};

// Epidemic iff for some K |count_K - E_K| > deviation_factor * sqrt(E_K).
// A single hotspot fires whenever E_K < 1 / deviation_factor^2.
MultiKResult multi_k_test(const NeighborhoodSource& src, const ReportingSet& reporting,
                          std::span<const std::size_t> k_range, std::span<const double> null_expectations,
                          double deviation_factor);

} // namespace hotspot
