#pragma once

#include <optional>
#include <span>
#include <vector>

#include "itksf/dataset.hpp"
#include "itksf/sampler.hpp"

namespace itksf {

/// The structure id shared by every subset member, if all carry the same
/// nonzero label; nullopt for any outlier member or mixed labels.
std::optional<int> is_all_inlier(std::span<const int> subset, const std::vector<int>& labels);

struct RunMetrics {
    long m = 0;
    /// Process time when the last structure got its first all-inlier subset;
    /// the full budget when that never happens under a time budget.
    double hit_seconds = 0.0;
    /// 1-based creation index of the same event; the full count when it never
    /// happens under a count budget.
    long hit_index = 0;
    bool hit = false;
    /// All-inlier subset counts, one entry per structure id ascending.
    std::vector<int> per_structure;
    double is_percent = 0.0;
    /// Same counts restricted to the good set, when one exists.
    std::vector<int> good_per_structure;
    double good_is_percent = 0.0;
    long good_count = 0;
};

/// Ground-truth sampling metrics for one finished run.
RunMetrics evaluate_run(const HypothesisStore& store, const DataSet& data, const Budget& budget);

}  // namespace itksf
