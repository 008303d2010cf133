#include "polco/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polco {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t SplitRng::mix(RngSeed s) {
    std::uint64_t state = s.seed;
    std::uint64_t h = splitmix64(state);
    state ^= s.stream + 0x9E3779B97F4A7C15ULL;
    h ^= splitmix64(state);
    return h;
}

int SplitRng::categorical(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("categorical: empty weight vector");
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
    double u = next_double() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return static_cast<int>(i);
    }
    // u landed in the rounding slack past the last partial sum
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

double SplitRng::exponential() {
    return -std::log1p(-next_double());
}

std::uint64_t SplitRng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: n must be positive");
    // rejection sampling keeps the draw unbiased
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::vector<double> SplitRng::dirichlet_uniform(int n) {
    std::vector<double> v(n);
    double total = 0.0;
    for (double& x : v) {
        x = exponential();
        total += x;
    }
    for (double& x : v) x /= total;
    return v;
}

std::vector<int> SplitRng::sample_without_replacement(int n, int k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace polco
