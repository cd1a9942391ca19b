#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "itksf/error.hpp"
#include "itksf/filter.hpp"
#include "itksf/fitting.hpp"
#include "itksf/metrics.hpp"
#include "itksf/models.hpp"
#include "itksf/preference.hpp"
#include "itksf/random.hpp"
#include "itksf/sampler.hpp"
#include "itksf/similarity.hpp"
#include "itksf/synthetic.hpp"

namespace {

using namespace itksf;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<int> distinct_indices(int universe, int count, Rng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(universe));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < count; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) + rng.index(static_cast<std::size_t>(universe - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
}

/// All three rank-distance evaluations agree on random top-k list pairs.
Outcome criterion1() {
    Rng rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 1 + static_cast<int>(rng.index(50));
        const int universe = k + static_cast<int>(rng.index(static_cast<std::size_t>(500 - k + 1)));
        const TopKList a = TopKList::from_entries(distinct_indices(universe, k, rng));
        const TopKList b = TopKList::from_entries(distinct_indices(universe, k, rng));
        const long direct = sf_distance(a, b, k + 1);
        const long set_form = sf_distance_set_form(a, b, k + 1);
        const long shared_form = sf_distance_intersection_form(a, b, k + 1);
        if (direct != set_form || direct != shared_form)
            return {false, "evaluations disagree at trial " + std::to_string(trial) + " (k=" +
                               std::to_string(k) + "): " + std::to_string(direct) + " / " +
                               std::to_string(set_form) + " / " + std::to_string(shared_form)};
    }
    return {true, "1000 random pairs, all three evaluations equal"};
}

/// Block-incremental pair bookkeeping matches a scratch rebuild exactly.
Outcome criterion2() {
    Rng rng(2);
    LineSceneSpec spec;
    spec.inliers_per_line = 30;
    spec.n_outliers = 50;
    const LineScene scene = generate_synthetic_lines(spec, rng);
    const int n = scene.data.size();
    PreferenceState pref(n);
    SimilarityState sim(n);
    double max_diff = 0.0;
    for (int block = 0; block < 5; ++block) {
        Eigen::MatrixXd cols(n, 100);
        int made = 0;
        while (made < 100) {
            const std::vector<int> subset = distinct_indices(n, 2, rng);
            try {
                const Model m = fit(ModelKind::Line2D, scene.data, subset);
                cols.col(made) = residual_column(m, scene.data);
                ++made;
            } catch (const DegenerateSubset&) {
            }
        }
        const int k = scaled_count(0.1, 100 * (block + 1));
        const ChangeSet changes = pref.append_block(cols, k);
        sim.apply_changes(pref, changes);
        const SimilarityState scratch = SimilarityState::rebuild_from_scratch(pref, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (sim.shared_count(i, j) != scratch.shared_count(i, j) ||
                    sim.rank_sum(i, j) != scratch.rank_sum(i, j))
                    return {false, "integer pair bookkeeping diverged at block " +
                                       std::to_string(block + 1) + ", pair (" + std::to_string(i) +
                                       "," + std::to_string(j) + ")"};
                max_diff = std::max(max_diff, std::abs(sim.sim(i, j) - scratch.sim(i, j)));
            }
    }
    if (max_diff > 1e-12)
        return {false, "similarity matrix deviates from scratch rebuild by " + fmt(max_diff)};
    return {true, "5 blocks exact, max similarity deviation " + fmt(max_diff)};
}

/// Mean similarity separates same-structure, cross-structure, and outlier pairs.
Outcome criterion3() {
    int passed = 0;
    double last_same = 0, last_diff = 0, last_out = 0;
    for (int s = 1; s <= 20; ++s) {
        Rng scene_rng(static_cast<std::uint64_t>(s));
        const LineScene scene = generate_synthetic_lines(LineSceneSpec{}, scene_rng);
        SamplingConfig cfg;
        cfg.strategy.tag = SamplerTag::Uniform;
        cfg.budget = Budget::count(500);
        Rng rng(static_cast<std::uint64_t>(100 + s));
        const SamplingResult result = run_sampling(scene.data, ModelKind::Line2D, cfg, rng);
        const Eigen::MatrixXd& k_mat = result.similarity.matrix();
        const std::vector<int> labels = scene.data.labels();
        const int n = scene.data.size();
        double same_sum = 0, diff_sum = 0, out_sum = 0;
        long same_n = 0, diff_n = 0, out_n = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = k_mat(i, j);
                if (labels[static_cast<std::size_t>(i)] == 0 ||
                    labels[static_cast<std::size_t>(j)] == 0) {
                    out_sum += v;
                    ++out_n;
                } else if (labels[static_cast<std::size_t>(i)] ==
                           labels[static_cast<std::size_t>(j)]) {
                    same_sum += v;
                    ++same_n;
                } else {
                    diff_sum += v;
                    ++diff_n;
                }
            }
        last_same = same_sum / static_cast<double>(same_n);
        last_diff = diff_sum / static_cast<double>(diff_n);
        last_out = out_sum / static_cast<double>(out_n);
        if (last_same - last_diff >= 0.02 && last_diff - last_out >= 0.02) ++passed;
    }
    return {passed >= 18, std::to_string(passed) + "/20 seeds hold both 0.02 margins (last run " +
                              fmt(last_same) + " / " + fmt(last_diff) + " / " + fmt(last_out) + ")"};
}

/// Guided sampling lands all-inlier subsets far more often than uniform.
Outcome criterion4() {
    int passed = 0;
    double worst_ratio = -1.0;
    for (int s = 1; s <= 20; ++s) {
        Rng scene_rng(static_cast<std::uint64_t>(s));
        const LineScene scene = generate_synthetic_lines(LineSceneSpec{}, scene_rng);
        const auto run = [&](SamplerTag tag) {
            SamplingConfig cfg;
            cfg.strategy.tag = tag;
            cfg.budget = Budget::count(2000);
            Rng rng(static_cast<std::uint64_t>(100 + s));
            const SamplingResult result = run_sampling(scene.data, ModelKind::Line2D, cfg, rng);
            return evaluate_run(result.store, scene.data, cfg.budget);
        };
        const RunMetrics uniform = run(SamplerTag::Uniform);
        const RunMetrics guided = run(SamplerTag::ITKSF);
        bool ok = guided.is_percent >= 5.0 * uniform.is_percent;
        if (uniform.is_percent > 0.0) {
            const double ratio = guided.is_percent / uniform.is_percent;
            if (worst_ratio < 0.0 || ratio < worst_ratio) worst_ratio = ratio;
        }
        ok = ok && guided.per_structure.size() == 5;
        if (ok)
            for (int c : guided.per_structure) ok = ok && c >= 10;
        if (ok) ++passed;
    }
    return {passed >= 18, std::to_string(passed) +
                              "/20 seeds with >=5x all-inlier rate and >=10 subsets per structure" +
                              " (worst ratio " + fmt(worst_ratio) + ")"};
}

/// The good set is mid-sized and enriched in all-inlier subsets.
Outcome criterion5() {
    int passed = 0;
    long last_good = 0;
    double last_enrich = 0.0;
    for (int s = 1; s <= 20; ++s) {
        Rng scene_rng(static_cast<std::uint64_t>(s));
        const LineScene scene = generate_synthetic_lines(LineSceneSpec{}, scene_rng);
        SamplingConfig cfg;
        cfg.strategy.tag = SamplerTag::ITKSF;
        cfg.budget = Budget::count(500);
        Rng rng(static_cast<std::uint64_t>(100 + s));
        const SamplingResult result = run_sampling(scene.data, ModelKind::Line2D, cfg, rng);
        const RunMetrics metrics = evaluate_run(result.store, scene.data, cfg.budget);
        last_good = metrics.good_count;
        last_enrich = metrics.is_percent > 0.0 ? metrics.good_is_percent / metrics.is_percent : 0.0;
        if (metrics.good_count >= 50 && metrics.good_count <= 350 &&
            metrics.good_is_percent >= 3.0 * metrics.is_percent)
            ++passed;
    }
    return {passed >= 18, std::to_string(passed) +
                              "/20 seeds with good-set size in [50,350] and >=3x enrichment" +
                              " (last size " + std::to_string(last_good) + ", enrichment " +
                              fmt(last_enrich) + ")"};
}

bool line_matches(const Eigen::VectorXd& params, const Eigen::Vector3d& truth) {
    const double pn = std::hypot(params[0], params[1]);
    const double tn = std::hypot(truth[0], truth[1]);
    if (!(pn > 0.0) || !(tn > 0.0)) return false;
    double ax = params[0] / pn, ay = params[1] / pn, ac = params[2] / pn;
    const double bx = truth[0] / tn, by = truth[1] / tn, bc = truth[2] / tn;
    double dot = ax * bx + ay * by;
    if (dot < 0.0) {
        ax = -ax;
        ay = -ay;
        ac = -ac;
        dot = -dot;
    }
    const double angle_deg = std::acos(std::min(1.0, dot)) * 180.0 / std::numbers::pi;
    return angle_deg <= 2.0 && std::abs(ac - bc) <= 0.05;
}

/// The auto-stopped pipeline recovers all five planted lines.
Outcome criterion6() {
    int passed = 0;
    double slowest = 0.0;
    for (int s = 1; s <= 20; ++s) {
        Rng scene_rng(static_cast<std::uint64_t>(s));
        const LineScene scene = generate_synthetic_lines(LineSceneSpec{}, scene_rng);
        FitConfig cfg;
        cfg.sampling.strategy.tag = SamplerTag::ITKSF;
        cfg.sampling.budget = Budget::count(600);
        Rng rng(static_cast<std::uint64_t>(100 + s));
        const auto t0 = std::chrono::steady_clock::now();
        const FitReport report = fit_multi_structure(scene.data, ModelKind::Line2D, cfg, rng);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, secs);
        if (report.structures.size() != 5) continue;
        std::array<std::array<bool, 5>, 5> feasible{};
        for (int r = 0; r < 5; ++r)
            for (int g = 0; g < 5; ++g)
                feasible[static_cast<std::size_t>(r)][static_cast<std::size_t>(g)] =
                    line_matches(report.structures[static_cast<std::size_t>(r)].model.params,
                                 scene.lines[static_cast<std::size_t>(g)]);
        std::array<int, 5> perm{0, 1, 2, 3, 4};
        bool matched = false;
        do {
            bool all = true;
            for (int r = 0; r < 5 && all; ++r)
                all = feasible[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
            matched = all;
        } while (!matched && std::next_permutation(perm.begin(), perm.end()));
        if (matched) ++passed;
    }
    if (slowest >= 120.0)
        return {false, "slowest run took " + fmt(slowest) + "s, limit 120s"};
    return {passed >= 16, std::to_string(passed) +
                              "/20 seeds recover 5 lines within 2 degrees / 0.05 offset" +
                              " (slowest run " + fmt(slowest) + "s)"};
}

/// Next-index draws follow the conditional weights and never repeat a pick.
Outcome criterion7() {
    Rng key_rng(7);
    Eigen::MatrixXd k_mat(50, 50);
    for (int i = 0; i < 50; ++i) {
        k_mat(i, i) = 1.0;
        for (int j = i + 1; j < 50; ++j) k_mat(i, j) = k_mat(j, i) = 0.5 + 0.5 * key_rng.real01();
    }
    const std::vector<int> selected = {7, 21};
    const Eigen::VectorXd w = conditional_weights(k_mat, selected);
    if (w[7] != 0.0 || w[21] != 0.0) return {false, "selected positions kept nonzero weight"};
    const double total = w.sum();
    if (!(total > 0.0)) return {false, "weight vector collapsed"};

    std::array<long, 50> counts{};
    Rng draw_rng(77);
    const long draws = 100000;
    for (long d = 0; d < draws; ++d) {
        const long idx = weighted_index(
            std::span<const double>(w.data(), static_cast<std::size_t>(w.size())), draw_rng);
        if (idx < 0) return {false, "draw " + std::to_string(d) + " returned no index"};
        ++counts[static_cast<std::size_t>(idx)];
    }
    if (counts[7] != 0 || counts[21] != 0)
        return {false, "already-selected index drawn " +
                           std::to_string(counts[7] + counts[21]) + " times"};
    double chi2 = 0.0;
    for (int i = 0; i < 50; ++i) {
        if (i == 7 || i == 21) continue;
        const double expected = static_cast<double>(draws) * w[i] / total;
        const double diff = static_cast<double>(counts[static_cast<std::size_t>(i)]) - expected;
        chi2 += diff * diff / expected;
    }
    // Upper 1% point of the chi-square distribution with 47 degrees of freedom.
    const double bound = 72.44330737654823;
    return {chi2 < bound, "chi-square " + fmt(chi2) + " vs 1% bound " + fmt(bound) +
                              ", selected indices drawn 0 times"};
}

double max_generating_residual(ModelKind kind, const DataSet& data, Rng& rng) {
    const int p = minimal_subset_size(kind);
    std::vector<int> subset;
    for (int tries = 0; tries < 200; ++tries) {
        subset = distinct_indices(data.size(), p, rng);
        if (!is_degenerate(kind, data, subset)) break;
    }
    const Model m = fit(kind, data, subset);
    return residual_column(m, data).maxCoeff();
}

/// Noiseless minimal-subset fits reproduce their generating data exactly.
Outcome criterion8() {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        {
            Rng rng(static_cast<std::uint64_t>(1000 + i));
            LineSceneSpec spec;
            spec.n_lines = 1;
            spec.inliers_per_line = 30;
            spec.n_outliers = 0;
            spec.noise_sigma = 0.0;
            const LineScene scene = generate_synthetic_lines(spec, rng);
            worst = std::max(worst, max_generating_residual(ModelKind::Line2D, scene.data, rng));
        }
        {
            Rng rng(static_cast<std::uint64_t>(2000 + i));
            CorrespondenceSceneSpec spec;
            spec.inliers_per_structure = 30;
            spec.noise_sigma = 0.0;
            const CorrespondenceScene scene = generate_synthetic_homographies(spec, rng);
            worst = std::max(worst, max_generating_residual(ModelKind::Homography, scene.data, rng));
        }
        {
            Rng rng(static_cast<std::uint64_t>(3000 + i));
            CorrespondenceSceneSpec spec;
            spec.inliers_per_structure = 30;
            spec.noise_sigma = 0.0;
            const CorrespondenceScene scene = generate_synthetic_fundamentals(spec, rng);
            worst = std::max(worst,
                             max_generating_residual(ModelKind::FundamentalMatrix, scene.data, rng));
        }
    }
    return {worst < 1e-7, "300 noiseless fits, max residual on generating data " + fmt(worst)};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Repeat benchmark executions with one config and seed emit identical bytes.
Outcome criterion9() {
    const std::string cfg_path = "/tmp/itksf_acceptance_bench.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "strategy=uniform,itksf\n"
            << "budget.hypothesis_count=200\n"
            << "b=50\n"
            << "runs=3\n"
            << "seed=13\n"
            << "synthetic.n_lines=3\n"
            << "synthetic.inliers_per_line=30\n"
            << "synthetic.n_outliers=15\n"
            << "synthetic.noise_sigma=0.01\n";
        if (!cfg) return {false, "cannot write " + cfg_path};
    }
    const auto bench = [&](const std::string& format, const std::string& out_path) {
        const std::string cmd = std::string(ITKSF_CLI_PATH) + " bench --config " + cfg_path +
                                " --format " + format + " -o " + out_path + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    for (const std::string format : {"csv", "md"}) {
        const std::string first = "/tmp/itksf_acceptance_bench_1." + format;
        const std::string second = "/tmp/itksf_acceptance_bench_2." + format;
        if (bench(format, first) != 0 || bench(format, second) != 0)
            return {false, "bench execution failed for format " + format};
        const std::string a = slurp(first);
        const std::string b = slurp(second);
        if (a.empty()) return {false, "bench produced an empty " + format + " table"};
        if (a != b) return {false, format + " tables differ between runs"};
    }
    return {true, "csv and md tables byte-identical across repeat executions"};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        Outcome (*fn)();
        double time_limit;
    };
    const Entry entries[] = {
        {1, "rank-distance forms agree", criterion1, 5.0},
        {2, "incremental similarity exactness", criterion2, 30.0},
        {3, "similarity separation margins", criterion3, 120.0},
        {4, "guided-sampling efficiency", criterion4, 180.0},
        {5, "hypothesis filtering quality", criterion5, 0.0},
        {6, "end-to-end structure recovery", criterion6, 0.0},
        {7, "conditional draw distribution", criterion7, 0.0},
        {8, "noiseless kernel exactness", criterion8, 0.0},
        {9, "benchmark determinism", criterion9, 0.0},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.pass && e.time_limit > 0.0 && secs > e.time_limit) {
            out.pass = false;
            out.detail += " [exceeded " + fmt(e.time_limit) + "s limit]";
        }
        if (!out.pass) ++failures;
        std::printf("criterion %d (%s): %s  %s (%.1fs)\n", e.id, e.label,
                    out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
