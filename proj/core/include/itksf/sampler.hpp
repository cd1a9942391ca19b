#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itksf/dataset.hpp"
#include "itksf/models.hpp"
#include "itksf/preference.hpp"
#include "itksf/random.hpp"
#include "itksf/similarity.hpp"

namespace itksf {

enum class SamplerTag { Uniform, Proximity, ITKSF, ITKSFS };

std::string to_string(SamplerTag tag);
SamplerTag sampler_tag_from_string(const std::string& name);

struct SamplerStrategy {
    SamplerTag tag = SamplerTag::Uniform;
    /// Gaussian length scale for proximity sampling. Non-positive means
    /// "resolve to 10% of the data bounding-box diagonal" before use.
    double proximity_sigma = 0.0;
};

struct Hypothesis {
    Model model;
    /// Datum indices in the order they were drawn.
    std::vector<int> minimal_subset;
    int block_index = 0;
    double cpu_time_at_creation = 0.0;
};

struct HypothesisStore {
    std::vector<Hypothesis> hypotheses;
    /// Hypothesis indices currently labeled good, ascending.
    std::vector<int> good_set;

    int size() const { return static_cast<int>(hypotheses.size()); }
};

/// Stopping condition for the sampling loop: exactly one of the two is set.
struct Budget {
    std::optional<double> cpu_seconds;
    std::optional<long> hypothesis_count;

    static Budget seconds(double s) { return Budget{s, std::nullopt}; }
    static Budget count(long c) { return Budget{std::nullopt, c}; }
    bool by_count() const { return hypothesis_count.has_value(); }
};

struct SamplingConfig {
    SamplerStrategy strategy;
    Budget budget = Budget::count(1000);
    int block_size = 100;
    double k_fraction = 0.1;
    double h_fraction = 0.1;
};

/// Process CPU time in seconds.
double cpu_seconds_now();

/// Element-wise product of the K rows of the already-selected data, with every
/// selected position zeroed. All entries non-negative; all-zero is legal.
Eigen::VectorXd conditional_weights(const Eigen::MatrixXd& k_mat, std::span<const int> selected);

/// Draw one minimal subset of `subset_size` distinct datum indices under the
/// given strategy. A collapsed weight vector falls back to a uniform draw over
/// the not-yet-selected indices.
std::vector<int> sample_minimal_subset(const Eigen::MatrixXd& k_mat,
                                       const SamplerStrategy& strategy, const DataSet& data,
                                       int subset_size, const HypothesisStore& store, Rng& rng);

struct SamplingResult {
    HypothesisStore store;
    PreferenceState preference;
    SimilarityState similarity;
    /// True if any filter pass had to subsample an oversized support pair set.
    bool feature_pairs_capped = false;
};

/// The block loop: generate hypotheses (block 1 uniform, later blocks by
/// strategy), extend the residual ranking, update pairwise similarity, and
/// refresh the good set through the hypothesis filter.
SamplingResult run_sampling(const DataSet& data, ModelKind kind, const SamplingConfig& config,
                            Rng& rng);

}  // namespace itksf
