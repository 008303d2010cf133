#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "polco/divergence.hpp"
#include "polco/sampling.hpp"
#include "support.hpp"

using namespace polco;
using namespace polco::testing;

TEST_CASE("single-state samples follow the policy") {
    Cmp c = single_state(2);
    TabularPolicy p;
    p.num_states = 1;
    p.num_actions = 2;
    p.pi = {0.3, 0.7};
    auto sample = sample_occupancy(c, p, 50000, {1, 0}, SampleMode::geometric);
    for (const auto& [s, a] : sample.pairs) CHECK(s == 0);
    CHECK(std::abs(sample.empirical.values[0] - 0.3) <= 0.01);
    CHECK(std::abs(sample.empirical.values[1] - 0.7) <= 0.01);
}

TEST_CASE("geometric sampler concentrates to the exact occupancy") {
    Cmp c = two_state_chain();
    TabularPolicy p = TabularPolicy::uniform(2, 1);
    auto [exact, marginal] = occupancy(c, p);
    auto sample = sample_occupancy(c, p, 100000, {2, 0}, SampleMode::geometric);
    CHECK(total_variation(sample.empirical, exact) <= 0.02);
}

TEST_CASE("geometric sampler is unbiased per coordinate") {
    Cmp c = random_dense_cmp(3, 2, 0.8, 17);
    TabularPolicy p = random_policy(3, 2, 18);
    auto [exact, marginal] = occupancy(c, p);

    const int replicates = 200;
    const long long n = 10000;
    std::vector<double> mean(exact.values.size(), 0.0);
    std::vector<double> m2(exact.values.size(), 0.0);
    for (int r = 0; r < replicates; ++r) {
        auto sample = sample_occupancy(c, p, n, {3, static_cast<std::uint64_t>(r)},
                                       SampleMode::geometric);
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double x = sample.empirical.values[i];
            const double delta = x - mean[i];
            mean[i] += delta / (r + 1);
            m2[i] += delta * (x - mean[i]);
        }
    }
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double se = std::sqrt(m2[i] / (replicates - 1) / replicates);
        CHECK(std::abs(mean[i] - exact.values[i]) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("sampler determinism: same seed and stream, same draws") {
    Cmp c = random_dense_cmp(4, 3, 0.9, 5);
    TabularPolicy p = random_policy(4, 3, 6);
    auto a = sample_occupancy(c, p, 2000, {10, 4}, SampleMode::geometric);
    auto b = sample_occupancy(c, p, 2000, {10, 4}, SampleMode::geometric);
    CHECK(a.pairs == b.pairs);
    CHECK(a.env_steps == b.env_steps);
    auto other = sample_occupancy(c, p, 2000, {10, 5}, SampleMode::geometric);
    CHECK(a.pairs != other.pairs);
}

TEST_CASE("geometric-mode env steps average 1/(1-gamma)") {
    Cmp c = two_state_chain(); // gamma = 0.5, so 2 steps per sample on average
    TabularPolicy p = TabularPolicy::uniform(2, 1);
    const long long n = 10000;
    auto sample = sample_occupancy(c, p, n, {12, 0}, SampleMode::geometric);
    const double mean_steps = static_cast<double>(sample.env_steps) / n;
    // per-sample step count is geometric: variance gamma/(1-gamma)^2 = 2
    const double se = std::sqrt(2.0 / n);
    CHECK(std::abs(mean_steps - 2.0) <= 3.0 * se);
}

TEST_CASE("stationary mode tracks the occupancy of a stationary start") {
    GeneratorSpec spec;
    spec.num_states = 5;
    spec.num_actions = 2;
    spec.branching = 2;
    spec.seed = 23;
    spec.reversible = true; // mu is the stationary distribution by construction
    Cmp c = generate_random_mdp(spec);
    TabularPolicy p = TabularPolicy::uniform(5, 2);
    auto [exact, marginal] = occupancy(c, p);
    auto sample = sample_occupancy(c, p, 20000, {13, 0}, SampleMode::stationary);
    CHECK(total_variation(sample.empirical, exact) <= 0.05);
}

TEST_CASE("stationary mode refuses a chain with zero spectral gap") {
    Cmp c;
    c.num_states = 2;
    c.num_actions = 1;
    c.gamma = 0.5;
    c.mu = {0.5, 0.5};
    c.transition = {1.0, 0.0, 0.0, 1.0}; // two absorbing states, lambda2 = 1
    CHECK_THROWS_AS(sample_occupancy(c, TabularPolicy::uniform(2, 1), 10, {0, 0},
                                     SampleMode::stationary),
                    std::runtime_error);
}

TEST_CASE("estimate_transition_model is exact for deterministic transitions") {
    GeneratorSpec spec;
    spec.num_states = 4;
    spec.num_actions = 2;
    spec.branching = 1; // deterministic rows
    spec.seed = 3;
    Cmp c = generate_random_mdp(spec);
    auto e = estimate_transition_model(c, 7, {4, 0});
    CHECK(e.p_hat == c.transition);

    auto again = estimate_transition_model(c, 7, {4, 0});
    CHECK(e.p_hat == again.p_hat);
}

TEST_CASE("estimated rows stay within the Weissman radius") {
    // 5 states, 1e4 draws per pair: L1 radius ~ 0.080 at 95% over 15 pairs
    Cmp c = random_dense_cmp(5, 3, 0.9, 8);
    auto e = estimate_transition_model(c, 10000, {9, 0});
    double worst = 0.0;
    for (int s = 0; s < 5; ++s) {
        for (int a = 0; a < 3; ++a) {
            double l1 = 0.0;
            for (int t = 0; t < 5; ++t) l1 += std::abs(e.p(s, a, t) - c.p(s, a, t));
            worst = std::max(worst, l1);
        }
    }
    CHECK(worst <= 0.080);
}

TEST_CASE("occupancy_on_estimate matches occupancy when the model is exact") {
    GeneratorSpec spec;
    spec.num_states = 4;
    spec.num_actions = 2;
    spec.branching = 1;
    spec.seed = 14;
    Cmp c = generate_random_mdp(spec);
    TabularPolicy p = random_policy(4, 2, 15);
    auto e = estimate_transition_model(c, 3, {16, 0});
    auto d_hat = occupancy_on_estimate(e, c, p);
    auto [d, marginal] = occupancy(c, p);
    CHECK(max_abs_diff(d_hat.values, d.values) <= 1e-12);
    CHECK(simulation_gap_bound(c, e, p) == 0.0);
}

TEST_CASE("simulation_gap_bound is the discounted expected transition error") {
    Cmp c = two_state_chain();
    c.gamma = 0.9;
    TabularPolicy p = TabularPolicy::uniform(2, 1);
    // occupancy at gamma 0.9: d(s0) = 0.1, d(s1) = 0.9
    EstimatedModel e;
    e.num_states = 2;
    e.num_actions = 1;
    e.counts_per_pair = 1;
    e.p_hat = {0.05, 0.95, 0.05, 0.95}; // both rows off by L1 = 0.1
    const double bound = simulation_gap_bound(c, e, p);
    CHECK(bound == doctest::Approx(0.9 / 0.1 * 0.1).epsilon(1e-12)); // = 0.9
}

TEST_CASE("simulation bound holds as a deterministic inequality") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SplitRng dims({seed, 7});
        const int s_count = 2 + static_cast<int>(dims.below(4));
        const int a_count = 1 + static_cast<int>(dims.below(3));
        Cmp c = random_dense_cmp(s_count, a_count, 0.8, seed + 500);
        TabularPolicy p = random_policy(s_count, a_count, seed + 600);
        auto e = estimate_transition_model(c, 1 + dims.below(200), {seed, 1});
        auto d_hat = occupancy_on_estimate(e, c, p);
        auto [d, marginal] = occupancy(c, p);
        CHECK(total_variation(d_hat, d) <= simulation_gap_bound(c, e, p) + 1e-10);
    }
}
