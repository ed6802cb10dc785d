#pragma once

#include "hotspot/graph.hpp"
#include "hotspot/neighborhood.hpp"
#include "hotspot/scenario.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hotspot {

struct ReportingProbabilities {
    double p_in = 0.0; // reporting probability of an infected node under the epidemic
    double p = 0.0;    // per-node reporting probability under the matched null
};

// p = (f+1) q alpha, p_in = q (1 + (1-q) f alpha / (1 - q alpha)).
// Throws Infeasible when p > 1.
ReportingProbabilities reporting_probabilities(double q, double alpha, double f);

// Infected nodes whose k-nearest-neighbor set contains a non-infected node.
std::vector<NodeId> boundary_set(const Graph& g, std::span<const NodeId> infected, std::size_t k);

// 1 - |DS(k)|/|S| for k = ks[j], from one BFS per infected node.
std::vector<double> interior_fractions(const Graph& g, std::span<const NodeId> infected,
                                       std::span<const std::size_t> ks);

struct GammaEntry {
    std::size_t k = 0;
    double gamma = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

struct GammaProfile {
    std::vector<GammaEntry> entries;
    std::string topology = "unknown";
    std::size_t truncated_trials = 0;

    const GammaEntry* find(std::size_t k) const;
};

// Mean of per-trial interior fractions over simulated epidemics with seeds
// drawn from `seed_pool` (all nodes when empty).
GammaProfile estimate_gamma(const Graph& g, const ScenarioParams& params, std::span<const std::size_t> ks,
                            std::size_t trials, std::uint64_t seed, std::span<const NodeId> seed_pool = {},
                            std::string topology = "unknown");

// Same estimator over caller-supplied infection sets.
GammaProfile gamma_profile_from_infections(const Graph& g, std::span<const std::vector<NodeId>> infections,
                                           std::span<const std::size_t> ks, std::string topology = "unknown");

inline double gamma_analytic_tree(std::size_t k) { return 1.0 / static_cast<double>(k); }
inline double gamma_lower_bound(std::size_t infection_size) { return 1.0 / static_cast<double>(infection_size); }
// Smallest K >= 1 with K >= log(K (f+1)), the self-consistent choice when gamma(K) = 1/K.
std::size_t tree_rule_k(double f, double log_base = 0.0);

struct ErrorBounds {
    double e1_bound = 1.0;
    double e2_bound = 1.0;
    double e1_exponent = 0.0; // bound = exp(-exponent)
    double e2_exponent = 0.0;
    double p_big = 0.0;    // p^K
    double p_in_big = 0.0; // gamma p_in^K / (f+1)
    bool separated = false;
    std::string diagnostic;
};

// Type I / type II upper bounds for the dense-regime detector:
//   E_I  <= exp(-n (P_in-P)^2 / (16 (K^2+1) (P + (P_in-P)/6)))
//   E_II <= exp(-n (P_in-P)^2 / (16 (K^2+1) P_in))
ErrorBounds error_bounds(double gamma, double q, double alpha, double f, std::size_t k, std::size_t n_reporting);

struct SolveKResult {
    std::size_t k = 0;
    bool qualified = false; // false: no profiled K met the condition, largest K returned
};

// Minimal profiled K with K >= log((f+1)/gamma(K)).
SolveKResult solve_k(const GammaProfile& profile, double f, double log_base = 0.0);

// CSV with header K,gamma,stderr,trials,topology.
std::string format_gamma_csv(const GammaProfile& profile);
GammaProfile parse_gamma_csv(std::string_view text);
void write_gamma_csv(const GammaProfile& profile, const std::filesystem::path& path);
GammaProfile read_gamma_csv(const std::filesystem::path& path);

} // namespace hotspot
