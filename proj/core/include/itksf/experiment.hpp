#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itksf/fitting.hpp"
#include "itksf/metrics.hpp"
#include "itksf/models.hpp"
#include "itksf/sampler.hpp"
#include "itksf/synthetic.hpp"

namespace itksf {

struct ExperimentConfig {
    std::vector<SamplerStrategy> strategies = {SamplerStrategy{}};
    ModelKind kind = ModelKind::Line2D;
    Budget budget = Budget::seconds(5.0);
    int b = 100;
    double k_fraction = 0.1;
    double h_fraction = 0.1;
    int runs = 1;
    std::uint64_t seed = 0;
    ClusteringConfig clustering;
    std::optional<double> inlier_threshold;
    /// Dataset file; empty means "generate the synthetic scene below".
    std::string input;
    LineSceneSpec synthetic;

    SamplingConfig sampling_for(const SamplerStrategy& strategy) const;
};

/// Flat key=value text, one pair per line, # comments. Keys follow the config
/// field names (strategy, kind, budget.cpu_seconds, budget.hypothesis_count,
/// b, k_fraction, h_fraction, runs, seed, cluster_count, min_cluster_size,
/// inlier_threshold, proximity_sigma, input, synthetic.*).
ExperimentConfig parse_experiment_config_text(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

/// One line per config key, parseable back; used for provenance echoing.
std::string experiment_config_text(const ExperimentConfig& config);

struct StrategySummary {
    SamplerStrategy strategy;
    std::vector<RunMetrics> runs;
    std::vector<std::string> failures;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<int> structure_ids;
    std::vector<StrategySummary> strategies;
};

/// Table-shaped sampling comparison: for each strategy x run, execute the
/// block loop on the shared dataset and collect ground-truth metrics. Per-run
/// seeds derive from (seed, run index), so every strategy sees the same
/// schedule. Run failures are recorded, not fatal.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// The dataset an experiment config denotes (loaded or generated).
DataSet experiment_dataset(const ExperimentConfig& config);

std::string render_report_markdown(const ExperimentReport& report);
std::string render_report_csv(const ExperimentReport& report);

}  // namespace itksf
