#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "itksf/preference.hpp"
#include "itksf/random.hpp"
#include "itksf/similarity.hpp"

namespace itksf {

/// 2D descriptor of one hypothesis: mean pairwise data similarity over its
/// supporters (f1) and over its best-ranked data (f2).
struct HypothesisFeature {
    double f1 = 0.0;
    double f2 = 0.0;
    int support = 0;
};

/// For each hypothesis j, the ascending list of data whose top-k window
/// contains j.
std::vector<std::vector<int>> reverse_index(const PreferenceState& state, int k);

/// f1 = mean K over unordered pairs of `support`, f2 = likewise over `top_h`.
/// A set with fewer than two members scores 0. A set larger than `size_cap`
/// is estimated from 10^4 sampled pairs; `capped` reports that this happened.
HypothesisFeature hypothesis_features(const Eigen::MatrixXd& k_mat,
                                      const std::vector<int>& support,
                                      const std::vector<int>& top_h, long size_cap, Rng& rng,
                                      bool* capped = nullptr);

/// Deterministic 2-means on the (f1, f2) points; the cluster whose center has
/// the larger norm is good. All-identical features label everything good.
std::vector<char> split_good_bad(const std::vector<HypothesisFeature>& features);

struct FilterResult {
    std::vector<HypothesisFeature> features;
    std::vector<char> good;
    std::vector<int> good_indices;
    bool capped = false;
};

/// One full filter pass over the current hypothesis set: features from the
/// live rankings, then the good/bad split. `h` is the top-h length for f2.
FilterResult filter_pass(const PreferenceState& pref, const SimilarityState& sim, int h, Rng& rng);

/// CSV dump with header f1,f2,support,good for scatter plotting.
void write_features_csv(const std::string& path, const FilterResult& result);

}  // namespace itksf
