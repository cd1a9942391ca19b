#include "itksf/sampler.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "itksf/error.hpp"
#include "itksf/filter.hpp"

namespace itksf {

namespace {

int count_free(const std::vector<char>& taken) {
    int free = 0;
    for (char t : taken)
        if (!t) ++free;
    return free;
}

int uniform_unselected(const std::vector<char>& taken, Rng& rng) {
    const int free = count_free(taken);
    if (free <= 0) throw OutOfRange("no unselected datum left to draw");
    std::size_t target = rng.index(static_cast<std::size_t>(free));
    for (std::size_t i = 0; i < taken.size(); ++i) {
        if (taken[i]) continue;
        if (target == 0) return static_cast<int>(i);
        --target;
    }
    throw OutOfRange("unselected draw fell off the end");
}

int weighted_or_uniform(std::span<const double> weights, const std::vector<char>& taken,
                        Rng& rng) {
    const long idx = weighted_index(weights, rng);
    if (idx >= 0 && !taken[static_cast<std::size_t>(idx)]) return static_cast<int>(idx);
    return uniform_unselected(taken, rng);
}

}  // namespace

std::string to_string(SamplerTag tag) {
    switch (tag) {
        case SamplerTag::Uniform: return "uniform";
        case SamplerTag::Proximity: return "proximity";
        case SamplerTag::ITKSF: return "itksf";
        case SamplerTag::ITKSFS: return "itksf-s";
    }
    return "unknown";
}

SamplerTag sampler_tag_from_string(const std::string& name) {
    if (name == "uniform" || name == "random") return SamplerTag::Uniform;
    if (name == "proximity") return SamplerTag::Proximity;
    if (name == "itksf") return SamplerTag::ITKSF;
    if (name == "itksf-s") return SamplerTag::ITKSFS;
    throw InvalidConfig("unknown sampling strategy '" + name + "'");
}

double cpu_seconds_now() {
    timespec ts{};
    if (clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts) == 0)
        return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
    return static_cast<double>(clock()) / CLOCKS_PER_SEC;
}

Eigen::VectorXd conditional_weights(const Eigen::MatrixXd& k_mat, std::span<const int> selected) {
    const Eigen::Index n = k_mat.rows();
    if (selected.empty()) throw OutOfRange("conditional weights need a non-empty selection");
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
    for (int s : selected) {
        if (s < 0 || s >= n) throw OutOfRange("selected index " + std::to_string(s) +
                                              " outside 0.." + std::to_string(n - 1));
        weights = weights.cwiseProduct(k_mat.row(s).transpose());
    }
    for (int s : selected) weights(s) = 0.0;
    return weights;
}

std::vector<int> sample_minimal_subset(const Eigen::MatrixXd& k_mat,
                                       const SamplerStrategy& strategy, const DataSet& data,
                                       int subset_size, const HypothesisStore& store, Rng& rng) {
    const int n = data.size();
    if (subset_size < 1) throw OutOfRange("subset size must be positive");
    if (n < subset_size)
        throw OutOfRange("dataset of " + std::to_string(n) + " cannot yield a subset of " +
                         std::to_string(subset_size));

    std::vector<int> subset;
    subset.reserve(subset_size);
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    const auto take = [&](int idx) {
        subset.push_back(idx);
        taken[static_cast<std::size_t>(idx)] = 1;
    };

    switch (strategy.tag) {
        case SamplerTag::Uniform: {
            while (static_cast<int>(subset.size()) < subset_size)
                take(uniform_unselected(taken, rng));
            break;
        }
        case SamplerTag::Proximity: {
            if (strategy.proximity_sigma <= 0.0)
                throw InvalidConfig("proximity sampling needs a positive length scale");
            take(static_cast<int>(rng.index(static_cast<std::size_t>(n))));
            const double inv_s2 = 1.0 / (strategy.proximity_sigma * strategy.proximity_sigma);
            std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i)
                weights[static_cast<std::size_t>(i)] =
                    std::exp(-spatial_distance_sq(data, subset[0], i) * inv_s2);
            while (static_cast<int>(subset.size()) < subset_size) {
                for (int s : subset) weights[static_cast<std::size_t>(s)] = 0.0;
                take(weighted_or_uniform(weights, taken, rng));
            }
            break;
        }
        case SamplerTag::ITKSF:
        case SamplerTag::ITKSFS: {
            if (strategy.tag == SamplerTag::ITKSFS && !store.good_set.empty()) {
                std::vector<int> pool;
                for (int g : store.good_set)
                    for (int m : store.hypotheses[static_cast<std::size_t>(g)].minimal_subset)
                        pool.push_back(m);
                std::sort(pool.begin(), pool.end());
                pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
                take(pool[rng.index(pool.size())]);
            } else {
                take(static_cast<int>(rng.index(static_cast<std::size_t>(n))));
            }
            while (static_cast<int>(subset.size()) < subset_size) {
                if (k_mat.rows() == n && k_mat.cols() == n) {
                    const Eigen::VectorXd w = conditional_weights(k_mat, subset);
                    take(weighted_or_uniform(std::span<const double>(w.data(),
                                                                     static_cast<std::size_t>(n)),
                                             taken, rng));
                } else {
                    take(uniform_unselected(taken, rng));
                }
            }
            break;
        }
    }
    return subset;
}

namespace {

constexpr int kDegenerateRetryCap = 100;

Hypothesis generate_one(const DataSet& data, ModelKind kind, const Eigen::MatrixXd& k_mat,
                        const SamplerStrategy& strategy, const HypothesisStore& store,
                        int block_index, double t0, Rng& rng) {
    const int p = minimal_subset_size(kind);
    for (int attempt = 0; attempt < kDegenerateRetryCap; ++attempt) {
        std::vector<int> subset = sample_minimal_subset(k_mat, strategy, data, p, store, rng);
        if (is_degenerate(kind, data, subset)) continue;
        try {
            Model model = fit(kind, data, subset);
            if (model.valid())
                return Hypothesis{std::move(model), std::move(subset), block_index,
                                  cpu_seconds_now() - t0};
        } catch (const Error&) {
        }
    }
    const SamplerStrategy uniform{SamplerTag::Uniform, 0.0};
    std::vector<int> subset = sample_minimal_subset(k_mat, uniform, data, p, store, rng);
    Model model{kind, Eigen::VectorXd()};
    if (!is_degenerate(kind, data, subset)) {
        try {
            model = fit(kind, data, subset);
        } catch (const Error&) {
            model = Model{kind, Eigen::VectorXd()};
        }
    }
    return Hypothesis{std::move(model), std::move(subset), block_index, cpu_seconds_now() - t0};
}

}  // namespace

SamplingResult run_sampling(const DataSet& data, ModelKind kind, const SamplingConfig& config,
                            Rng& rng) {
    const int n = data.size();
    const int p = minimal_subset_size(kind);
    if (n < p)
        throw OutOfRange("dataset of " + std::to_string(n) + " data cannot seed " +
                         to_string(kind) + " hypotheses (need " + std::to_string(p) + ")");
    if (config.block_size < 1) throw InvalidConfig("block size must be at least 1");
    if (config.k_fraction <= 0.0 || config.k_fraction > 1.0)
        throw InvalidConfig("k fraction must lie in (0, 1]");
    if (config.h_fraction <= 0.0 || config.h_fraction > 1.0)
        throw InvalidConfig("h fraction must lie in (0, 1]");
    if (config.budget.cpu_seconds.has_value() == config.budget.hypothesis_count.has_value())
        throw InvalidConfig("budget must set exactly one of cpu_seconds or hypothesis_count");
    if (config.budget.by_count() && *config.budget.hypothesis_count < 1)
        throw BudgetTooSmall("hypothesis budget " +
                             std::to_string(*config.budget.hypothesis_count) +
                             " cannot complete a block");
    if (!config.budget.by_count() && *config.budget.cpu_seconds <= 0.0)
        throw BudgetTooSmall("cpu budget must be positive");

    SamplerStrategy strategy = config.strategy;
    if (strategy.tag == SamplerTag::Proximity && strategy.proximity_sigma <= 0.0) {
        strategy.proximity_sigma = 0.1 * data.bounding_box_diagonal();
        if (strategy.proximity_sigma <= 0.0) strategy.proximity_sigma = 1.0;
    }

    SamplingResult result{HypothesisStore{}, PreferenceState(n), SimilarityState(n), false};
    const int h = scaled_count(config.h_fraction, n);
    const double t0 = cpu_seconds_now();
    const SamplerStrategy bootstrap{SamplerTag::Uniform, 0.0};

    long remaining = config.budget.by_count() ? *config.budget.hypothesis_count
                                              : std::numeric_limits<long>::max();
    int block_index = 0;
    while (true) {
        const int bs = static_cast<int>(std::min<long>(config.block_size, remaining));
        Eigen::MatrixXd block(n, bs);
        for (int c = 0; c < bs; ++c) {
            Hypothesis hyp =
                generate_one(data, kind, result.similarity.matrix(),
                             block_index == 0 ? bootstrap : strategy, result.store, block_index,
                             t0, rng);
            block.col(c) = residual_column(hyp.model, data);
            result.store.hypotheses.push_back(std::move(hyp));
        }
        const int new_k = scaled_count(config.k_fraction, result.store.size());
        const ChangeSet changes = result.preference.append_block(block, new_k);
        result.similarity.apply_changes(result.preference, changes);

        FilterResult filtered = filter_pass(result.preference, result.similarity, h, rng);
        result.store.good_set = std::move(filtered.good_indices);
        result.feature_pairs_capped = result.feature_pairs_capped || filtered.capped;

        ++block_index;
        if (config.budget.by_count()) {
            remaining -= bs;
            if (remaining <= 0) break;
        } else if (cpu_seconds_now() - t0 >= *config.budget.cpu_seconds) {
            break;
        }
    }
    return result;
}

}  // namespace itksf
