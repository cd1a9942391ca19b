#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "itksf/dataset.hpp"
#include "itksf/models.hpp"
#include "itksf/preference.hpp"
#include "itksf/random.hpp"
#include "itksf/sampler.hpp"

namespace itksf {

/// Per-hypothesis aggregate of the similarity rows of its best-ranked data.
struct HypothesisSignature {
    Eigen::VectorXd alpha;
};

/// Sum of the K rows indexed by `top_h`.
HypothesisSignature signature(const Eigen::MatrixXd& k_mat, const std::vector<int>& top_h);

/// Euclidean distance between signatures.
double hypothesis_distance(const HypothesisSignature& a, const HypothesisSignature& b);

struct ClusteringConfig {
    /// Fixed cluster count; empty selects the cut before the largest relative
    /// gap in the merge-distance sequence.
    std::optional<int> cluster_count;
    int min_cluster_size = 3;
};

/// Average-linkage hierarchical clustering of the signatures. Returns clusters
/// as ascending index lists into `signatures`, ordered by smallest member;
/// clusters below min_cluster_size are dropped.
std::vector<std::vector<int>> agglomerate(const std::vector<HypothesisSignature>& signatures,
                                          const ClusteringConfig& config);

/// Cluster member minimizing the sum of squared residuals over its own top-h
/// data; ties go to the lower hypothesis index.
int select_representative(const std::vector<int>& cluster, const PreferenceState& state, int h);

struct StructureEstimate {
    Model model;
    std::vector<int> member_hypotheses;
    int representative = -1;
    std::optional<std::vector<int>> inliers;
};

struct FitConfig {
    SamplingConfig sampling;
    ClusteringConfig clustering;
    /// When set, each datum is assigned to its best structure if the residual
    /// stays below this, otherwise labeled an outlier.
    std::optional<double> inlier_threshold;
};

struct FitReport {
    std::vector<StructureEstimate> structures;
    SamplingResult sampling;
};

/// Full pipeline: guided sampling, good-set signatures, clustering, and one
/// representative model per cluster. An empty good set yields a report with no
/// structures.
FitReport fit_multi_structure(const DataSet& data, ModelKind kind, const FitConfig& config,
                              Rng& rng);

}  // namespace itksf
