#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <numeric>
#include <vector>

#include "itksf/preference.hpp"
#include "itksf/random.hpp"
#include "itksf/sampler.hpp"
#include "itksf/similarity.hpp"

namespace {

using namespace itksf;

Eigen::MatrixXd random_block(int n, int b, Rng& rng) {
    Eigen::MatrixXd m(n, b);
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = rng.real01();
    return m;
}

std::vector<int> random_list(int universe, int k, Rng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(universe));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) + rng.index(static_cast<std::size_t>(universe - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

struct GrownState {
    PreferenceState pref;
    SimilarityState sim;
    Eigen::MatrixXd next;

    GrownState(int n, int t, int b) : pref(n), sim(n), next(n, b) {
        Rng rng(1);
        for (int done = 0; done < t; done += b) {
            const ChangeSet changes =
                pref.append_block(random_block(n, b, rng), scaled_count(0.1, done + b));
            sim.apply_changes(pref, changes);
        }
        next = random_block(n, b, rng);
    }
};

void BM_append_block(benchmark::State& state) {
    const GrownState grown(300, static_cast<int>(state.range(0)), 100);
    for (auto _ : state) {
        state.PauseTiming();
        PreferenceState pref = grown.pref;
        state.ResumeTiming();
        const ChangeSet changes =
            pref.append_block(grown.next, scaled_count(0.1, pref.hypothesis_count() + 100));
        benchmark::DoNotOptimize(changes.new_k);
    }
}
BENCHMARK(BM_append_block)->Arg(200)->Arg(500)->Arg(1000);

void BM_incremental_update(benchmark::State& state) {
    const GrownState grown(300, static_cast<int>(state.range(0)), 100);
    for (auto _ : state) {
        state.PauseTiming();
        PreferenceState pref = grown.pref;
        SimilarityState sim = grown.sim;
        state.ResumeTiming();
        const ChangeSet changes =
            pref.append_block(grown.next, scaled_count(0.1, pref.hypothesis_count() + 100));
        sim.apply_changes(pref, changes);
        benchmark::DoNotOptimize(sim.sim(0, 1));
    }
}
BENCHMARK(BM_incremental_update)->Arg(200)->Arg(500)->Arg(1000);

void BM_scratch_rebuild(benchmark::State& state) {
    GrownState grown(300, static_cast<int>(state.range(0)), 100);
    const ChangeSet changes =
        grown.pref.append_block(grown.next, scaled_count(0.1, grown.pref.hypothesis_count() + 100));
    benchmark::DoNotOptimize(changes.new_k);
    for (auto _ : state) {
        const SimilarityState sim =
            SimilarityState::rebuild_from_scratch(grown.pref, grown.pref.top_k_len());
        benchmark::DoNotOptimize(sim.sim(0, 1));
    }
}
BENCHMARK(BM_scratch_rebuild)->Arg(200)->Arg(500)->Arg(1000);

void BM_distance_direct(benchmark::State& state) {
    Rng rng(3);
    const int k = static_cast<int>(state.range(0));
    const TopKList a = TopKList::from_entries(random_list(500, k, rng));
    const TopKList b = TopKList::from_entries(random_list(500, k, rng));
    for (auto _ : state) benchmark::DoNotOptimize(sf_distance(a, b, k + 1));
}
BENCHMARK(BM_distance_direct)->Arg(10)->Arg(50);

void BM_distance_shared_only(benchmark::State& state) {
    Rng rng(3);
    const int k = static_cast<int>(state.range(0));
    const TopKList a = TopKList::from_entries(random_list(500, k, rng));
    const TopKList b = TopKList::from_entries(random_list(500, k, rng));
    for (auto _ : state) benchmark::DoNotOptimize(sf_distance_intersection_form(a, b, k + 1));
}
BENCHMARK(BM_distance_shared_only)->Arg(10)->Arg(50);

void BM_conditional_weights(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(4);
    Eigen::MatrixXd k_mat(n, n);
    for (int i = 0; i < n; ++i) {
        k_mat(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) k_mat(i, j) = k_mat(j, i) = rng.real01();
    }
    const std::vector<int> selected = {1, 5, 9};
    for (auto _ : state) {
        const Eigen::VectorXd w = conditional_weights(k_mat, selected);
        benchmark::DoNotOptimize(w.sum());
    }
}
BENCHMARK(BM_conditional_weights)->Arg(300)->Arg(750);

}  // namespace

BENCHMARK_MAIN();
