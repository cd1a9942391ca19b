#include "itksf/filter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "itksf/error.hpp"

namespace itksf {

namespace {

constexpr long kSampledPairs = 10000;

double mean_pair_similarity(const Eigen::MatrixXd& k_mat, const std::vector<int>& set,
                            long size_cap, Rng& rng, bool* capped) {
    const long m = static_cast<long>(set.size());
    if (m < 2) return 0.0;
    if (size_cap > 0 && m > size_cap) {
        if (capped) *capped = true;
        double acc = 0.0;
        for (long done = 0; done < kSampledPairs;) {
            const std::size_t a = rng.index(set.size());
            const std::size_t b = rng.index(set.size());
            if (a == b) continue;
            acc += k_mat(set[a], set[b]);
            ++done;
        }
        return acc / static_cast<double>(kSampledPairs);
    }
    double acc = 0.0;
    for (long a = 0; a < m; ++a)
        for (long b = a + 1; b < m; ++b)
            acc += k_mat(set[static_cast<std::size_t>(a)], set[static_cast<std::size_t>(b)]);
    return acc / (0.5 * static_cast<double>(m) * static_cast<double>(m - 1));
}

}  // namespace

std::vector<std::vector<int>> reverse_index(const PreferenceState& state, int k) {
    if (k < 0 || k > state.hypothesis_count())
        throw OutOfRange("top-k length " + std::to_string(k) + " exceeds hypothesis count " +
                         std::to_string(state.hypothesis_count()));
    std::vector<std::vector<int>> omega(static_cast<std::size_t>(state.hypothesis_count()));
    const int n = state.datum_count();
    for (int i = 0; i < n; ++i) {
        const auto& perm = state.datum_perm(i);
        for (int r = 0; r < k; ++r) omega[static_cast<std::size_t>(perm[r])].push_back(i);
    }
    return omega;
}

HypothesisFeature hypothesis_features(const Eigen::MatrixXd& k_mat,
                                      const std::vector<int>& support,
                                      const std::vector<int>& top_h, long size_cap, Rng& rng,
                                      bool* capped) {
    HypothesisFeature f;
    f.support = static_cast<int>(support.size());
    f.f1 = mean_pair_similarity(k_mat, support, size_cap, rng, capped);
    f.f2 = mean_pair_similarity(k_mat, top_h, size_cap, rng, capped);
    return f;
}

std::vector<char> split_good_bad(const std::vector<HypothesisFeature>& features) {
    const std::size_t t = features.size();
    std::vector<char> all_good(t, 1);
    if (t < 2) return all_good;

    bool identical = true;
    for (const auto& f : features)
        if (f.f1 != features[0].f1 || f.f2 != features[0].f2) {
            identical = false;
            break;
        }
    if (identical) return all_good;

    std::vector<double> norm(t);
    for (std::size_t i = 0; i < t; ++i) norm[i] = std::hypot(features[i].f1, features[i].f2);
    std::size_t imin = 0, imax = 0;
    for (std::size_t i = 1; i < t; ++i) {
        if (norm[i] < norm[imin]) imin = i;
        if (norm[i] > norm[imax]) imax = i;
    }
    if (imin == imax) {
        double best = -1.0;
        for (std::size_t i = 0; i < t; ++i) {
            const double dx = features[i].f1 - features[imin].f1;
            const double dy = features[i].f2 - features[imin].f2;
            const double d = dx * dx + dy * dy;
            if (d > best) {
                best = d;
                imax = i;
            }
        }
    }

    Eigen::Vector2d c0(features[imin].f1, features[imin].f2);
    Eigen::Vector2d c1(features[imax].f1, features[imax].f2);
    std::vector<char> assign(t, 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < t; ++i) {
            const Eigen::Vector2d pt(features[i].f1, features[i].f2);
            const char a = (pt - c1).squaredNorm() < (pt - c0).squaredNorm() ? 1 : 0;
            if (a != assign[i]) {
                assign[i] = a;
                changed = true;
            }
        }
        if (!changed) break;
        Eigen::Vector2d sum0 = Eigen::Vector2d::Zero(), sum1 = Eigen::Vector2d::Zero();
        std::size_t n0 = 0, n1 = 0;
        for (std::size_t i = 0; i < t; ++i) {
            const Eigen::Vector2d pt(features[i].f1, features[i].f2);
            if (assign[i]) {
                sum1 += pt;
                ++n1;
            } else {
                sum0 += pt;
                ++n0;
            }
        }
        if (n0 == 0 || n1 == 0) return all_good;
        c0 = sum0 / static_cast<double>(n0);
        c1 = sum1 / static_cast<double>(n1);
    }

    const char good_cluster = c0.norm() > c1.norm() ? 0 : 1;
    std::vector<char> good(t, 0);
    for (std::size_t i = 0; i < t; ++i) good[i] = assign[i] == good_cluster ? 1 : 0;
    return good;
}

FilterResult filter_pass(const PreferenceState& pref, const SimilarityState& sim, int h,
                         Rng& rng) {
    if (sim.datum_count() != pref.datum_count())
        throw DimensionMismatch("similarity state tracks " + std::to_string(sim.datum_count()) +
                                " data, preference state " + std::to_string(pref.datum_count()));
    if (sim.top_k_len() != pref.top_k_len())
        throw DimensionMismatch("similarity state is at k=" + std::to_string(sim.top_k_len()) +
                                ", preference state at k=" + std::to_string(pref.top_k_len()));
    const int t = pref.hypothesis_count();
    const int n = pref.datum_count();

    FilterResult out;
    const auto omega = reverse_index(pref, pref.top_k_len());
    const long size_cap =
        std::lround(std::sqrt(static_cast<double>(n) * static_cast<double>(t)));
    out.features.reserve(static_cast<std::size_t>(t));
    for (int j = 0; j < t; ++j) {
        bool capped = false;
        const TopHData sigma = pref.top_h_data(j, h);
        out.features.push_back(hypothesis_features(sim.matrix(), omega[static_cast<std::size_t>(j)],
                                                   sigma.entries, size_cap, rng, &capped));
        out.capped = out.capped || capped;
    }
    out.good = split_good_bad(out.features);
    for (int j = 0; j < t; ++j)
        if (out.good[static_cast<std::size_t>(j)]) out.good_indices.push_back(j);
    return out;
}

void write_features_csv(const std::string& path, const FilterResult& result) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.precision(17);
    out << "f1,f2,support,good\n";
    for (std::size_t j = 0; j < result.features.size(); ++j) {
        const auto& f = result.features[j];
        out << f.f1 << ',' << f.f2 << ',' << f.support << ','
            << static_cast<int>(result.good[j]) << '\n';
    }
}

}  // namespace itksf
