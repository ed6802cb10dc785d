#pragma once

#include "hotspot/detector.hpp"
#include "hotspot/graph.hpp"
#include "hotspot/noise.hpp"
#include "hotspot/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hotspot {

enum class TopologyKind { ErdosRenyi, Grid, Tree, PowerLaw, File };

struct TopologySpec {
    TopologyKind kind = TopologyKind::ErdosRenyi;
    std::size_t n = 8000;
    double er_mean_degree = 2.0; // edge probability = mean_degree / n unless er_p is set
    std::optional<double> er_p;
    std::size_t grid_dim = 2;
    std::size_t grid_side = 100;
    std::size_t tree_degree = 3;
    std::size_t tree_depth = 10;
    double powerlaw_exponent = 2.5;
    std::filesystem::path path;
    bool compact = false;

    bool random() const noexcept { return kind == TopologyKind::ErdosRenyi || kind == TopologyKind::PowerLaw; }
};

// value(N) = coef * N^exponent
struct ScalingRule {
    double coef = 0.0;
    double exponent = 0.0;
    double at(std::size_t n) const { return coef * std::pow(static_cast<double>(n), exponent); }
};

enum class StopRule { FixedSize, FixedTime };
enum class SeedPlacement { LargestComponent, Uniform };
enum class DetectorKind { Fixed, Dense, Small };
enum class GammaSource { Value, Fallback, Tree, Grid };

struct DetectorSpec {
    DetectorKind kind = DetectorKind::Fixed;
    DetectorConfig fixed = DetectorConfig::canonical(1, 0.0);
    GammaSource gamma_source = GammaSource::Fallback;
    double gamma = 1.0;
    double log_base = 0.0; // <= 0: natural log
};

struct ExperimentSpec {
    TopologySpec topology;
    ScalingRule alpha{0.1, 0.0};
    ScalingRule q{1.0, 0.0};
    ScalingRule f{0.0, 0.0};
    std::size_t num_seeds = 1;
    StopRule stop = StopRule::FixedSize;
    double time_budget = 1.0;
    SeedPlacement seed_placement = SeedPlacement::LargestComponent;
    std::optional<double> null_p; // default: matched (f+1) q |S|/N
    DetectorSpec detector;
    std::optional<DistanceNoise> noise;

    std::string sweep_var;            // empty: a single point
    std::vector<double> sweep_values; // values of sweep_var
    std::size_t trials = 200;
    std::uint64_t master_seed = 0;
    unsigned threads = 0;
    bool common_random_numbers = true; // trial streams independent of the sweep value

    // Copy with sweep_var set to `value`; remembers the value for seeding.
    ExperimentSpec at_sweep_value(double value) const;
    std::optional<double> current_sweep_value;

    void validate() const;
};

// Names accepted as sweep variables.
const std::vector<std::string>& sweep_variables();

// Flat "key = value" config. Unknown keys are errors.
ExperimentSpec parse_experiment_config(std::string_view text);
ExperimentSpec load_experiment_config(const std::filesystem::path& path);
// Applies one config key; same keys and errors as the file format.
void set_config_value(ExperimentSpec& spec, const std::string& key, const std::string& value);
std::string format_experiment_config(const ExperimentSpec& spec);
// Every default plus the modelling conventions, printed by `describe`.
std::string describe_defaults();

struct TrialResult {
    Hypothesis truth = Hypothesis::UniformNull;
    Verdict verdict;
    std::size_t n_reporting = 0;
    bool truncated = false;
    std::optional<std::string> error;
};

// One sweep point. Each trial index maps deterministically to its own
// graph and snapshots.
class Experiment {
public:
    explicit Experiment(ExperimentSpec spec, std::shared_ptr<const Graph> fixed_graph = nullptr);

    const ExperimentSpec& spec() const noexcept { return spec_; }

    std::shared_ptr<const Graph> graph_for_trial(std::size_t trial) const;
    ReportSnapshot snapshot(const Graph& g, Hypothesis label, std::size_t trial, bool* truncated = nullptr) const;
    DetectorConfig detector_for(const Graph& g, const ReportSnapshot& snap) const;
    std::unique_ptr<NeighborhoodSource> neighborhoods(const Graph& g, std::size_t trial) const;

    TrialResult run_trial(Hypothesis label, std::size_t trial) const;

    std::uint64_t stream_seed(std::uint64_t stream, std::size_t trial, std::optional<Hypothesis> label) const;

private:
    ExperimentSpec spec_;
    std::shared_ptr<const Graph> fixed_graph_;
    std::shared_ptr<const std::vector<NodeId>> fixed_pool_;
};

TrialResult run_trial(const ExperimentSpec& spec, Hypothesis label, std::size_t trial);

struct SweepRow {
    double sweep_value = 0.0;
    std::size_t trials = 0;
    double type1 = 0.0;
    double type2 = 0.0;
    double mean_error = 0.0;
    double mean_hotspots_epi = 0.0;
    double sd_epi = 0.0;
    double mean_hotspots_null = 0.0;
    double sd_null = 0.0;
    std::size_t failures = 0;
    std::size_t truncated = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

std::string sweep_csv_header();
std::string format_sweep_csv(const SweepResult& result);

// trials epidemic + trials null runs per sweep value.
SweepResult run_sweep(const ExperimentSpec& spec, std::shared_ptr<const Graph> fixed_graph = nullptr);

// Hotspot counts of an entire sweep point, kept so thresholds can be varied
// without re-simulating.
struct TrialCounts {
    std::vector<std::size_t> epidemic;
    std::vector<std::size_t> null;
    std::size_t failures = 0;
    std::size_t truncated = 0;
};
TrialCounts collect_counts(const Experiment& exp);
SweepRow score_counts(const TrialCounts& counts, double t, double sweep_value, std::size_t trials);

// Error rates for every threshold from one set of simulated snapshots on g;
// row sweep_value holds the threshold.
SweepResult threshold_sweep(const Graph& g, const ExperimentSpec& spec, std::span<const double> t_values);
// Same, with graphs built per trial exactly as run_sweep does.
SweepResult threshold_sweep(const ExperimentSpec& spec, std::span<const double> t_values);

} // namespace hotspot
