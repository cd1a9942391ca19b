#include "itksf/preference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "itksf/error.hpp"

namespace {
// Ranking treats NaN like +inf so comparators stay a strict weak order.
inline double sanitized(double r) {
    return std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
}
}  // namespace

namespace itksf {

int scaled_count(double fraction, int n) {
    if (n <= 0) return 0;
    const int raw = static_cast<int>(std::ceil(fraction * n - 1e-9));
    return std::clamp(raw, 1, n);
}

TopKList TopKList::from_entries(std::vector<int> e) {
    TopKList out;
    out.entries = std::move(e);
    out.rank1.reserve(out.entries.size());
    for (int r = 0; r < static_cast<int>(out.entries.size()); ++r)
        out.rank1.emplace(out.entries[r], r + 1);
    if (out.rank1.size() != out.entries.size())
        throw InconsistentChangeSet("top-k list has duplicate entries");
    return out;
}

PreferenceState::PreferenceState(int n) : n_(n) {
    if (n <= 0) throw DimensionMismatch("datum count must be positive");
    residuals_.resize(n);
    perm_.resize(n);
    inv_.resize(n);
}

ChangeSet PreferenceState::append_block(const Eigen::MatrixXd& block, int new_k) {
    const int b = static_cast<int>(block.cols());
    if (static_cast<int>(block.rows()) != n_)
        throw DimensionMismatch("residual block row count does not match datum count");
    if (b < 1) throw DimensionMismatch("residual block must contain at least one column");
    const int new_t = t_ + b;
    if (new_k < 1 || new_k > new_t) throw OutOfRange("top-k length outside [1, t]");

    ChangeSet changes;
    changes.old_t = t_;
    changes.new_t = new_t;
    changes.old_k = k_;
    changes.new_k = new_k;
    changes.per_datum.resize(n_);

    // New hypothesis columns: data sorted ascending by residual, ties by index.
    hyp_perm_.reserve(new_t);
    for (int c = 0; c < b; ++c) {
        std::vector<std::int32_t> order(n_);
        for (int i = 0; i < n_; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::int32_t x, std::int32_t y) {
            return sanitized(block(x, c)) < sanitized(block(y, c));
        });
        hyp_perm_.push_back(std::move(order));
    }

    std::vector<std::int32_t> incoming(b);
    std::vector<std::int32_t> merged;
    std::vector<char> in_new;  // scratch membership of the new top-k window

    for (int i = 0; i < n_; ++i) {
        auto& res = residuals_[i];
        res.reserve(new_t);
        for (int c = 0; c < b; ++c) res.push_back(sanitized(block(i, c)));

        // Sort the incoming ids, then merge with the existing permutation.
        for (int c = 0; c < b; ++c) incoming[c] = t_ + c;
        std::stable_sort(incoming.begin(), incoming.end(),
                         [&](std::int32_t x, std::int32_t y) { return res[x] < res[y]; });

        const auto& old = perm_[i];
        merged.clear();
        merged.reserve(new_t);
        std::size_t a = 0, c = 0;
        while (a < old.size() && c < incoming.size()) {
            // Existing ids are always smaller, so they win ties.
            if (res[old[a]] <= res[incoming[c]]) merged.push_back(old[a++]);
            else merged.push_back(incoming[c++]);
        }
        merged.insert(merged.end(), old.begin() + a, old.end());
        merged.insert(merged.end(), incoming.begin() + c, incoming.end());

        // Diff the old and new top-k windows against the old inverse ranks.
        auto& inv = inv_[i];
        auto& delta = changes.per_datum[i];
        in_new.assign(new_t, 0);
        for (int r = 0; r < new_k; ++r) {
            const std::int32_t hyp = merged[r];
            in_new[hyp] = 1;
            const std::int32_t old_rank = (hyp < t_ && inv[hyp] <= k_) ? inv[hyp] : 0;
            if (old_rank != r + 1) delta.push_back({hyp, old_rank, r + 1});
        }
        for (int r = 0; r < k_; ++r) {
            const std::int32_t hyp = old[r];
            if (!in_new[hyp]) delta.push_back({hyp, static_cast<std::int32_t>(r + 1), 0});
        }
        std::sort(delta.begin(), delta.end(),
                  [](const ChangeRecord& x, const ChangeRecord& y) { return x.hyp < y.hyp; });

        perm_[i] = merged;
        inv.resize(new_t);
        for (int r = 0; r < new_t; ++r) inv[merged[r]] = r + 1;
    }

    t_ = new_t;
    k_ = new_k;
    return changes;
}

TopKList PreferenceState::top_k_list(int datum, int k) const {
    if (datum < 0 || datum >= n_) throw OutOfRange("datum index out of range");
    if (k < 1 || k > t_) throw OutOfRange("top-k length outside [1, t]");
    return TopKList::from_entries(
        std::vector<int>(perm_[datum].begin(), perm_[datum].begin() + k));
}

TopHData PreferenceState::top_h_data(int hyp, int h) const {
    if (hyp < 0 || hyp >= t_) throw OutOfRange("hypothesis index out of range");
    if (h < 1 || h > n_) throw OutOfRange("top-h length outside [1, N]");
    return TopHData{std::vector<int>(hyp_perm_[hyp].begin(), hyp_perm_[hyp].begin() + h)};
}

}  // namespace itksf
