#include "itksf/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "itksf/error.hpp"

namespace itksf {

HypothesisSignature signature(const Eigen::MatrixXd& k_mat, const std::vector<int>& top_h) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(k_mat.cols());
    for (int i : top_h) {
        if (i < 0 || i >= k_mat.rows())
            throw OutOfRange("datum index " + std::to_string(i) + " outside similarity matrix");
        alpha += k_mat.row(i).transpose();
    }
    return HypothesisSignature{std::move(alpha)};
}

double hypothesis_distance(const HypothesisSignature& a, const HypothesisSignature& b) {
    if (a.alpha.size() != b.alpha.size())
        throw LengthMismatch("signature lengths differ: " + std::to_string(a.alpha.size()) +
                             " vs " + std::to_string(b.alpha.size()));
    return (a.alpha - b.alpha).norm();
}

namespace {

struct MergeStep {
    double distance = 0.0;
    int rep_kept = 0;
    int rep_gone = 0;
};

struct PairKey {
    int lo = 0, hi = 0;
    bool operator<(const PairKey& other) const {
        return lo != other.lo ? lo < other.lo : hi < other.hi;
    }
};

PairKey make_key(int a, int b) { return a < b ? PairKey{a, b} : PairKey{b, a}; }

/// Full average-linkage merge sequence down to one cluster. Slot indices are
/// the cluster representatives (smallest original member); nearest-neighbor
/// entries stay valid across merges because an averaged distance never drops
/// below the smaller of the two it replaces.
std::vector<MergeStep> merge_sequence(const std::vector<HypothesisSignature>& signatures) {
    const int n = static_cast<int>(signatures.size());
    std::vector<MergeStep> steps;
    if (n < 2) return steps;

    Eigen::MatrixXd dist(n, n);
    dist.setZero();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist(i, j) = dist(j, i) = hypothesis_distance(signatures[i], signatures[j]);

    std::vector<char> active(static_cast<std::size_t>(n), 1);
    std::vector<long> size(static_cast<std::size_t>(n), 1);
    std::vector<int> nn_to(static_cast<std::size_t>(n), -1);
    std::vector<double> nn_dist(static_cast<std::size_t>(n), 0.0);

    const auto rescan = [&](int i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (j == i || !active[static_cast<std::size_t>(j)]) continue;
            const double d = dist(i, j);
            if (d < best_d || (d == best_d && best >= 0 && make_key(i, j) < make_key(i, best))) {
                best_d = d;
                best = j;
            }
        }
        nn_to[static_cast<std::size_t>(i)] = best;
        nn_dist[static_cast<std::size_t>(i)] = best_d;
    };
    for (int i = 0; i < n; ++i) rescan(i);

    for (int merges = 0; merges < n - 1; ++merges) {
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)]) continue;
            if (pick < 0 || nn_dist[static_cast<std::size_t>(i)] < nn_dist[static_cast<std::size_t>(pick)] ||
                (nn_dist[static_cast<std::size_t>(i)] == nn_dist[static_cast<std::size_t>(pick)] &&
                 make_key(i, nn_to[static_cast<std::size_t>(i)]) <
                     make_key(pick, nn_to[static_cast<std::size_t>(pick)])))
                pick = i;
        }
        const int other = nn_to[static_cast<std::size_t>(pick)];
        const int keep = std::min(pick, other);
        const int gone = std::max(pick, other);
        steps.push_back({nn_dist[static_cast<std::size_t>(pick)], keep, gone});

        const double sk = static_cast<double>(size[static_cast<std::size_t>(keep)]);
        const double sg = static_cast<double>(size[static_cast<std::size_t>(gone)]);
        for (int j = 0; j < n; ++j) {
            if (!active[static_cast<std::size_t>(j)] || j == keep || j == gone) continue;
            dist(keep, j) = dist(j, keep) = (sk * dist(keep, j) + sg * dist(gone, j)) / (sk + sg);
        }
        active[static_cast<std::size_t>(gone)] = 0;
        size[static_cast<std::size_t>(keep)] += size[static_cast<std::size_t>(gone)];

        for (int j = 0; j < n; ++j) {
            if (!active[static_cast<std::size_t>(j)]) continue;
            if (j == keep || nn_to[static_cast<std::size_t>(j)] == keep ||
                nn_to[static_cast<std::size_t>(j)] == gone)
                rescan(j);
        }
    }
    return steps;
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

/// Cut before the largest relative jump in the merge-distance sequence.
/// Near-duplicate signatures produce merge distances orders of magnitude below
/// the cross-cluster scale, and ratios between such values are meaningless, so
/// a jump only qualifies when it lands at 5% of the final merge distance or
/// above. A qualifying jump out of an exact-duplicate run counts as infinite.
int auto_merge_count(const std::vector<MergeStep>& steps) {
    const int m = static_cast<int>(steps.size());
    if (m == 0) return 0;
    const double d_max = steps[static_cast<std::size_t>(m - 1)].distance;
    if (d_max <= 0.0) return m;
    const double floor = 0.05 * d_max;
    int best = -1;
    double best_ratio = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        const double hi = steps[static_cast<std::size_t>(i + 1)].distance;
        if (hi < floor) continue;
        const double lo = steps[static_cast<std::size_t>(i)].distance;
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = i;
        }
    }
    return best < 0 ? m : best + 1;
}

}  // namespace

std::vector<std::vector<int>> agglomerate(const std::vector<HypothesisSignature>& signatures,
                                          const ClusteringConfig& config) {
    const int n = static_cast<int>(signatures.size());
    if (n == 0) return {};
    if (config.cluster_count && *config.cluster_count < 1)
        throw InvalidConfig("cluster count must be positive");

    const std::vector<MergeStep> steps = merge_sequence(signatures);
    int merges;
    if (config.cluster_count)
        merges = std::clamp(n - *config.cluster_count, 0, n - 1);
    else
        merges = auto_merge_count(steps);

    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    for (int s = 0; s < merges; ++s)
        parent[static_cast<std::size_t>(
            find_root(parent, steps[static_cast<std::size_t>(s)].rep_gone))] =
            find_root(parent, steps[static_cast<std::size_t>(s)].rep_kept);

    std::vector<std::vector<int>> by_root(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) by_root[static_cast<std::size_t>(find_root(parent, i))].push_back(i);
    std::vector<std::vector<int>> clusters;
    for (auto& members : by_root) {
        if (members.empty()) continue;
        if (static_cast<int>(members.size()) < config.min_cluster_size) continue;
        clusters.push_back(std::move(members));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
}

int select_representative(const std::vector<int>& cluster, const PreferenceState& state, int h) {
    if (cluster.empty()) throw OutOfRange("cannot pick a representative from an empty cluster");
    const auto sum_sq = [&](int j) {
        const TopHData sigma = state.top_h_data(j, h);
        double ssr = 0.0;
        for (int i : sigma.entries) {
            const double r = state.residual_at(i, j);
            ssr += r * r;
        }
        return ssr;
    };
    int best = cluster.front();
    double best_ssr = sum_sq(best);
    for (std::size_t c = 1; c < cluster.size(); ++c) {
        const int j = cluster[c];
        const double ssr = sum_sq(j);
        if (ssr < best_ssr || (ssr == best_ssr && j < best)) {
            best_ssr = ssr;
            best = j;
        }
    }
    return best;
}

FitReport fit_multi_structure(const DataSet& data, ModelKind kind, const FitConfig& config,
                              Rng& rng) {
    FitReport report{{}, run_sampling(data, kind, config.sampling, rng)};
    const std::vector<int>& good = report.sampling.store.good_set;
    if (good.empty()) return report;

    const int h = scaled_count(config.sampling.h_fraction, data.size());
    const Eigen::MatrixXd& k_mat = report.sampling.similarity.matrix();
    std::vector<HypothesisSignature> signatures;
    signatures.reserve(good.size());
    for (int g : good)
        signatures.push_back(
            signature(k_mat, report.sampling.preference.top_h_data(g, h).entries));

    const std::vector<std::vector<int>> clusters = agglomerate(signatures, config.clustering);
    for (const auto& cluster : clusters) {
        std::vector<int> members;
        members.reserve(cluster.size());
        for (int idx : cluster) members.push_back(good[static_cast<std::size_t>(idx)]);
        const int rep = select_representative(members, report.sampling.preference, h);
        report.structures.push_back(
            StructureEstimate{report.sampling.store.hypotheses[static_cast<std::size_t>(rep)].model,
                              std::move(members), rep, std::nullopt});
    }

    if (config.inlier_threshold && !report.structures.empty()) {
        for (auto& s : report.structures) s.inliers.emplace();
        for (int i = 0; i < data.size(); ++i) {
            int best = -1;
            double best_r = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < report.structures.size(); ++s) {
                const double r = residual(report.structures[s].model, data.data[static_cast<std::size_t>(i)]);
                if (r < best_r) {
                    best_r = r;
                    best = static_cast<int>(s);
                }
            }
            if (best >= 0 && best_r <= *config.inlier_threshold)
                report.structures[static_cast<std::size_t>(best)].inliers->push_back(i);
        }
    }
    return report;
}

}  // namespace itksf
