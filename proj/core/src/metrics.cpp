#include "itksf/metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "itksf/error.hpp"

namespace itksf {

std::optional<int> is_all_inlier(std::span<const int> subset, const std::vector<int>& labels) {
    if (subset.empty()) return std::nullopt;
    int id = 0;
    for (int i : subset) {
        if (i < 0 || i >= static_cast<int>(labels.size()))
            throw OutOfRange("subset index " + std::to_string(i) + " outside label vector");
        const int lab = labels[static_cast<std::size_t>(i)];
        if (lab <= 0) return std::nullopt;
        if (id == 0)
            id = lab;
        else if (lab != id)
            return std::nullopt;
    }
    return id;
}

RunMetrics evaluate_run(const HypothesisStore& store, const DataSet& data, const Budget& budget) {
    if (!data.has_labels())
        throw NoLabels("ground-truth metrics need a fully labeled dataset");
    const std::vector<int> labels = data.labels();
    const std::vector<int> ids = data.structure_ids();
    std::unordered_map<int, std::size_t> slot;
    for (std::size_t s = 0; s < ids.size(); ++s) slot[ids[s]] = s;

    RunMetrics out;
    out.m = store.size();
    out.per_structure.assign(ids.size(), 0);
    out.good_per_structure.assign(ids.size(), 0);

    std::vector<char> covered(ids.size(), 0);
    std::size_t n_covered = 0;
    for (int j = 0; j < store.size(); ++j) {
        const Hypothesis& hyp = store.hypotheses[static_cast<std::size_t>(j)];
        const auto id = is_all_inlier(hyp.minimal_subset, labels);
        if (!id) continue;
        const std::size_t s = slot.at(*id);
        ++out.per_structure[s];
        if (!covered[s]) {
            covered[s] = 1;
            if (++n_covered == ids.size()) {
                out.hit = true;
                out.hit_index = j + 1;
                out.hit_seconds = hyp.cpu_time_at_creation;
            }
        }
    }

    long total = 0;
    for (int c : out.per_structure) total += c;
    out.is_percent = out.m > 0 ? 100.0 * static_cast<double>(total) / static_cast<double>(out.m)
                               : 0.0;

    if (!out.hit) {
        if (budget.by_count()) {
            out.hit_index = *budget.hypothesis_count;
            out.hit_seconds = store.size() > 0
                                  ? store.hypotheses.back().cpu_time_at_creation
                                  : 0.0;
        } else {
            out.hit_index = store.size();
            out.hit_seconds = *budget.cpu_seconds;
        }
    } else if (!budget.by_count()) {
        out.hit_seconds = std::min(out.hit_seconds, *budget.cpu_seconds);
    }

    out.good_count = static_cast<long>(store.good_set.size());
    for (int g : store.good_set) {
        const auto id =
            is_all_inlier(store.hypotheses[static_cast<std::size_t>(g)].minimal_subset, labels);
        if (id) ++out.good_per_structure[slot.at(*id)];
    }
    long good_total = 0;
    for (int c : out.good_per_structure) good_total += c;
    out.good_is_percent =
        out.good_count > 0
            ? 100.0 * static_cast<double>(good_total) / static_cast<double>(out.good_count)
            : 0.0;
    return out;
}

}  // namespace itksf
