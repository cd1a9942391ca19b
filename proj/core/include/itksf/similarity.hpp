#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "itksf/preference.hpp"

namespace itksf {

/// Spearman Footrule distance between two top-k lists, direct form: sum of
/// absolute rank displacements over the union of members, with non-members
/// placed at location ell. Requires ell = k+1.
long sf_distance(const TopKList& a, const TopKList& b, int ell);

/// Same distance via the intersection/left-only/right-only set decomposition.
long sf_distance_set_form(const TopKList& a, const TopKList& b, int ell);

/// Same distance evaluated from the shared members alone (valid only at
/// ell = k+1): (k+1)(k - 2|Z|) + sum over shared m of |ra-rb| + ra + rb.
long sf_distance_intersection_form(const TopKList& a, const TopKList& b, int ell);

/// Normalized similarity in [0, 1]: 1 - F / (k * (k+1)).
double similarity(const TopKList& a, const TopKList& b, int k);

/// All-pairs data similarity, maintained incrementally.
///
/// shared_count(i,j) counts the common members of the two top-k windows;
/// rank_sum(i,j) accumulates |ra-rb| + ra + rb over those members. Both are
/// exact integers; the real matrix K is derived from them, so the incremental
/// path cannot drift from a scratch rebuild.
class SimilarityState {
public:
    explicit SimilarityState(int n);

    /// Advance the state across one block boundary using the change records
    /// emitted by PreferenceState::append_block. Pairs untouched by the block
    /// are skipped. Result is exactly what rebuild_from_scratch would produce.
    void apply_changes(const PreferenceState& pref, const ChangeSet& changes);

    /// Oracle path: recompute every pair from the current top-k lists.
    static SimilarityState rebuild_from_scratch(const PreferenceState& pref, int k);

    int datum_count() const { return n_; }
    int top_k_len() const { return k_; }
    int location() const { return k_ + 1; }

    std::int32_t shared_count(int i, int j) const { return a_(i, j); }
    std::int64_t rank_sum(int i, int j) const { return b_(i, j); }
    double sim(int i, int j) const { return k_mat_(i, j); }
    const Eigen::MatrixXd& matrix() const { return k_mat_; }

    /// Dense CSV dump of K (one row per line), for visual inspection.
    void write_csv(const std::string& path) const;

private:
    void refresh_k();

    int n_ = 0;
    int k_ = 0;
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic> a_;
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> b_;
    Eigen::MatrixXd k_mat_;
};

}  // namespace itksf
