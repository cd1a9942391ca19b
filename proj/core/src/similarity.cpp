#include "itksf/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <unordered_set>
#include <vector>

#include "itksf/error.hpp"

namespace itksf {

namespace {

void check_pair(const TopKList& a, const TopKList& b, int ell) {
    if (a.k() != b.k())
        throw LengthMismatch("top-k lists have different lengths: " +
                             std::to_string(a.k()) + " vs " + std::to_string(b.k()));
    if (ell != a.k() + 1)
        throw OutOfRange("non-member location must be k+1, got " + std::to_string(ell));
}

}  // namespace

long sf_distance(const TopKList& a, const TopKList& b, int ell) {
    check_pair(a, b, ell);
    std::unordered_set<int> members(a.entries.begin(), a.entries.end());
    members.insert(b.entries.begin(), b.entries.end());
    long total = 0;
    for (int m : members) {
        const int ra = a.rank_of(m) > 0 ? a.rank_of(m) : ell;
        const int rb = b.rank_of(m) > 0 ? b.rank_of(m) : ell;
        total += std::abs(ra - rb);
    }
    return total;
}

long sf_distance_set_form(const TopKList& a, const TopKList& b, int ell) {
    check_pair(a, b, ell);
    const int k = a.k();
    long shared = 0;
    long shared_disp = 0;
    long left_only = 0;
    long right_only = 0;
    for (int m : a.entries) {
        const int rb = b.rank_of(m);
        if (rb > 0) {
            ++shared;
            shared_disp += std::abs(a.rank_of(m) - rb);
        } else {
            left_only += a.rank_of(m);
        }
    }
    for (int m : b.entries) {
        if (a.rank_of(m) == 0) right_only += b.rank_of(m);
    }
    return 2 * (k - shared) * static_cast<long>(ell) + shared_disp - left_only - right_only;
}

long sf_distance_intersection_form(const TopKList& a, const TopKList& b, int ell) {
    check_pair(a, b, ell);
    const int k = a.k();
    long shared = 0;
    long acc = 0;
    for (int m : a.entries) {
        const int rb = b.rank_of(m);
        if (rb > 0) {
            ++shared;
            const int ra = a.rank_of(m);
            acc += std::abs(ra - rb) + ra + rb;
        }
    }
    return static_cast<long>(k + 1) * (k - 2 * shared) + acc;
}

double similarity(const TopKList& a, const TopKList& b, int k) {
    if (a.k() != k || b.k() != k)
        throw LengthMismatch("similarity called with k=" + std::to_string(k) +
                             " on lists of length " + std::to_string(a.k()) + " and " +
                             std::to_string(b.k()));
    const long f = sf_distance(a, b, k + 1);
    return 1.0 - static_cast<double>(f) / (static_cast<double>(k) * (k + 1));
}

SimilarityState::SimilarityState(int n) : n_(n) {
    if (n < 0) throw OutOfRange("negative datum count " + std::to_string(n));
    a_.setZero(n, n);
    b_.setZero(n, n);
    k_mat_.setZero(n, n);
}

void SimilarityState::refresh_k() {
    const double kd = static_cast<double>(k_);
    if (k_ == 0) {
        k_mat_.setZero(n_, n_);
        return;
    }
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            k_mat_(i, j) = 1.0 - (kd - 2.0 * a_(i, j)) / kd -
                           static_cast<double>(b_(i, j)) / (kd * (kd + 1.0));
}

void SimilarityState::apply_changes(const PreferenceState& pref, const ChangeSet& changes) {
    if (pref.datum_count() != n_)
        throw InconsistentChangeSet("state tracks " + std::to_string(n_) +
                                    " data but preference state has " +
                                    std::to_string(pref.datum_count()));
    if (static_cast<int>(changes.per_datum.size()) != n_)
        throw InconsistentChangeSet("change set covers " +
                                    std::to_string(changes.per_datum.size()) + " data, expected " +
                                    std::to_string(n_));
    if (changes.old_k != k_)
        throw InconsistentChangeSet("change set starts at k=" + std::to_string(changes.old_k) +
                                    " but state is at k=" + std::to_string(k_));
    if (changes.new_k != pref.top_k_len())
        throw InconsistentChangeSet("change set ends at k=" + std::to_string(changes.new_k) +
                                    " but preference state is at k=" +
                                    std::to_string(pref.top_k_len()));

    const auto rank_pair_sum = [](int ra, int rb) -> std::int64_t {
        return static_cast<std::int64_t>(std::abs(ra - rb)) + ra + rb;
    };

    const int t = pref.hypothesis_count();
    const int kk = changes.new_k;

    // A record for (datum, hyp) only moves pair cells shared with data that
    // hold hyp in their window, so group the work per hypothesis instead of
    // walking every datum pair.
    struct DatumChange {
        std::int32_t datum;
        std::int32_t old_rank;
        std::int32_t new_rank;
    };
    std::vector<std::vector<DatumChange>> by_hyp(static_cast<std::size_t>(t));
    for (int i = 0; i < n_; ++i)
        for (const ChangeRecord& r : changes.per_datum[static_cast<std::size_t>(i)])
            by_hyp[static_cast<std::size_t>(r.hyp)].push_back({i, r.old_rank, r.new_rank});

    std::vector<std::vector<std::int32_t>> member_data(static_cast<std::size_t>(t));
    std::vector<std::vector<std::int32_t>> member_rank(static_cast<std::size_t>(t));
    for (int i = 0; i < n_; ++i) {
        const auto& perm = pref.datum_perm(i);
        for (int r = 0; r < kk; ++r) {
            const auto h = static_cast<std::size_t>(perm[static_cast<std::size_t>(r)]);
            member_data[h].push_back(i);
            member_rank[h].push_back(r + 1);
        }
    }

    std::vector<std::int32_t> steady_data;
    std::vector<std::int32_t> steady_rank;
    steady_data.reserve(static_cast<std::size_t>(n_));
    steady_rank.reserve(static_cast<std::size_t>(n_));

    for (int h = 0; h < t; ++h) {
        const auto& chg = by_hyp[static_cast<std::size_t>(h)];
        if (chg.empty()) continue;

        // Window members of h whose rank did not move this block.
        steady_data.clear();
        steady_rank.clear();
        const auto& md = member_data[static_cast<std::size_t>(h)];
        const auto& mr = member_rank[static_cast<std::size_t>(h)];
        std::size_t c = 0;
        for (std::size_t m = 0; m < md.size(); ++m) {
            while (c < chg.size() && chg[c].datum < md[m]) ++c;
            if (c < chg.size() && chg[c].datum == md[m]) continue;
            steady_data.push_back(md[m]);
            steady_rank.push_back(mr[m]);
        }

        for (const DatumChange& dc : chg) {
            const bool was = dc.old_rank > 0;
            const bool now = dc.new_rank > 0;
            const std::int32_t da = (now ? 1 : 0) - (was ? 1 : 0);
            for (std::size_t m = 0; m < steady_data.size(); ++m) {
                const std::int32_t j = steady_data[m];
                const std::int32_t rj = steady_rank[m];
                std::int64_t db = 0;
                if (now) db += rank_pair_sum(dc.new_rank, rj);
                if (was) db -= rank_pair_sum(dc.old_rank, rj);
                const std::int32_t lo = dc.datum < j ? dc.datum : j;
                const std::int32_t hi = dc.datum < j ? j : dc.datum;
                a_(lo, hi) += da;
                b_(lo, hi) += db;
            }
        }

        for (std::size_t p = 0; p < chg.size(); ++p)
            for (std::size_t q = p + 1; q < chg.size(); ++q) {
                const DatumChange& ci = chg[p];
                const DatumChange& cj = chg[q];
                std::int32_t da = 0;
                std::int64_t db = 0;
                if (ci.old_rank > 0 && cj.old_rank > 0) {
                    --da;
                    db -= rank_pair_sum(ci.old_rank, cj.old_rank);
                }
                if (ci.new_rank > 0 && cj.new_rank > 0) {
                    ++da;
                    db += rank_pair_sum(ci.new_rank, cj.new_rank);
                }
                if (da == 0 && db == 0) continue;
                a_(ci.datum, cj.datum) += da;
                b_(ci.datum, cj.datum) += db;
            }
    }

    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < j; ++i) {
            a_(j, i) = a_(i, j);
            b_(j, i) = b_(i, j);
        }

    k_ = changes.new_k;
    const std::int64_t diag_b = static_cast<std::int64_t>(k_) * (k_ + 1);
    for (int i = 0; i < n_; ++i) {
        a_(i, i) = k_;
        b_(i, i) = diag_b;
    }
    refresh_k();
}

SimilarityState SimilarityState::rebuild_from_scratch(const PreferenceState& pref, int k) {
    const int n = pref.datum_count();
    SimilarityState state(n);
    state.k_ = k;
    std::vector<TopKList> lists;
    lists.reserve(n);
    for (int i = 0; i < n; ++i) lists.push_back(pref.top_k_list(i, k));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            std::int32_t shared = 0;
            std::int64_t acc = 0;
            for (int m : lists[i].entries) {
                const int rb = lists[j].rank_of(m);
                if (rb > 0) {
                    ++shared;
                    const int ra = lists[i].rank_of(m);
                    acc += static_cast<std::int64_t>(std::abs(ra - rb)) + ra + rb;
                }
            }
            state.a_(i, j) = state.a_(j, i) = shared;
            state.b_(i, j) = state.b_(j, i) = acc;
        }
    }
    state.refresh_k();
    return state;
}

void SimilarityState::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.precision(17);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (j) out << ',';
            out << k_mat_(i, j);
        }
        out << '\n';
    }
}

}  // namespace itksf
