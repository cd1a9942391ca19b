#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace itksf {

/// Deterministic random source.
///
/// All draws are derived from raw mt19937_64 output with fixed in-house
/// conversions, so a given seed produces the same stream on every platform and
/// standard library. std::*_distribution is deliberately not used anywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). Rejection sampling, unbiased.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t v = gen_();
        while (v > bound) v = gen_();
        return static_cast<std::size_t>(v % n);
    }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double gaussian() {
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = real01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Decorrelated child seed for stream `stream` of `master` (splitmix64 finalizer).
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        std::uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

/// Draw an index proportionally to `weights` by cumulative-sum inversion.
/// Zero-weight entries are never selected. Returns -1 if the vector is empty,
/// has a non-finite entry, or sums to zero; the caller decides the fallback.
inline long weighted_index(std::span<const double> weights, Rng& rng) {
    thread_local std::vector<double> cdf;
    cdf.clear();
    cdf.reserve(weights.size());
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) return -1;
        total += w;
        cdf.push_back(total);
    }
    if (cdf.empty() || !(total > 0.0) || !std::isfinite(total)) return -1;
    const double u = rng.real01() * total;
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {  // first position with cdf > u
        const std::size_t mid = (lo + hi) / 2;
        if (cdf[mid] > u) hi = mid; else lo = mid + 1;
    }
    // u is in [0, total), so the first slot with cdf > u carries positive
    // weight -- except when rounding pushes u onto total itself; step back to
    // the last positive-weight slot in that case.
    while (lo > 0 && weights[lo] == 0.0) --lo;
    return weights[lo] > 0.0 ? static_cast<long>(lo) : -1;
}

}  // namespace itksf
