#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace itksf {

/// ceil(fraction * n) with a guard against IEEE products like 0.1 * 30
/// landing a hair above the exact value, clamped to [1, n].
int scaled_count(double fraction, int n);

/// The k hypothesis indices best ranked by one datum, rank order.
struct TopKList {
    std::vector<int> entries;
    std::unordered_map<int, int> rank1;  // hypothesis -> 1-based rank

    int k() const { return static_cast<int>(entries.size()); }
    /// 1-based rank of `hyp`, 0 if absent.
    int rank_of(int hyp) const {
        auto it = rank1.find(hyp);
        return it == rank1.end() ? 0 : it->second;
    }
    static TopKList from_entries(std::vector<int> e);
};

/// The h datum indices best ranked by one hypothesis, rank order.
struct TopHData {
    std::vector<int> entries;
};

/// One datum's top-k membership/rank transition for one hypothesis.
/// Ranks are 1-based; 0 means "not in the top-k window on that side".
struct ChangeRecord {
    std::int32_t hyp = 0;
    std::int32_t old_rank = 0;
    std::int32_t new_rank = 0;
};

/// Everything the similarity update needs to move from one block boundary to
/// the next: per datum, every hypothesis whose top-k membership or rank
/// changed, sorted by hypothesis index.
struct ChangeSet {
    int old_t = 0, new_t = 0;
    int old_k = 0, new_k = 0;
    std::vector<std::vector<ChangeRecord>> per_datum;

    bool empty_diff() const {
        for (const auto& v : per_datum)
            if (!v.empty()) return false;
        return old_k == new_k;
    }
};

/// Residual bookkeeping for N data against a growing hypothesis set.
///
/// Maintains, per datum, the permutation sorting its residuals ascending
/// (ties by ascending hypothesis index) and, per hypothesis, the permutation
/// sorting the data residuals ascending (ties by ascending datum index).
/// Blocks of new hypotheses are merged into the per-datum permutations rather
/// than re-sorted.
class PreferenceState {
public:
    explicit PreferenceState(int n);

    /// Merge a block of b new hypothesis residual columns (block is N x b) and
    /// set the top-k window length to `new_k`. Returns the exact membership and
    /// rank changes of every datum's top-k window.
    ChangeSet append_block(const Eigen::MatrixXd& block, int new_k);

    TopKList top_k_list(int datum, int k) const;
    TopHData top_h_data(int hyp, int h) const;

    int datum_count() const { return n_; }
    int hypothesis_count() const { return t_; }
    /// Current top-k window length (as of the last append).
    int top_k_len() const { return k_; }

    double residual_at(int datum, int hyp) const { return residuals_[datum][hyp]; }
    const std::vector<std::int32_t>& datum_perm(int datum) const { return perm_[datum]; }
    const std::vector<std::int32_t>& hyp_perm(int hyp) const { return hyp_perm_[hyp]; }

    /// 1-based rank of `hyp` in datum's full sorted permutation.
    int rank1(int datum, int hyp) const { return inv_[datum][hyp]; }
    /// 1-based rank if `hyp` is inside datum's current top-k window, else 0.
    int top_k_rank1(int datum, int hyp) const {
        const std::int32_t r = inv_[datum][hyp];
        return r <= k_ ? r : 0;
    }

private:
    int n_ = 0;
    int t_ = 0;
    int k_ = 0;
    std::vector<std::vector<double>> residuals_;      // [datum][hyp]
    std::vector<std::vector<std::int32_t>> perm_;     // [datum] -> hyp ids ascending residual
    std::vector<std::vector<std::int32_t>> inv_;      // [datum][hyp] -> 1-based rank in perm_
    std::vector<std::vector<std::int32_t>> hyp_perm_; // [hyp] -> datum ids ascending residual
};

}  // namespace itksf
