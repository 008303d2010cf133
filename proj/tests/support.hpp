#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "polco/harness.hpp"
#include "polco/mdp.hpp"
#include "polco/rng.hpp"

namespace polco::testing {

// 2-state, 1-action chain s0 -> s1 -> s1, mu = (1,0), gamma = 0.5,
// rewards (1, 0). Occupancy (0.5, 0.5), exact return 1.
inline Cmp two_state_chain() {
    Cmp c;
    c.num_states = 2;
    c.num_actions = 1;
    c.gamma = 0.5;
    c.mu = {1.0, 0.0};
    c.transition = {0.0, 1.0,   // P[s0][a0]
                    0.0, 1.0};  // P[s1][a0]
    c.reward = std::vector<double>{1.0, 0.0};
    c.r_max = 1.0;
    return c;
}

inline Cmp single_state(int num_actions) {
    Cmp c;
    c.num_states = 1;
    c.num_actions = num_actions;
    c.gamma = 0.5;
    c.mu = {1.0};
    c.transition.assign(static_cast<std::size_t>(num_actions), 1.0);
    return c;
}

// Dense random CMP (full-support transition rows).
inline Cmp random_dense_cmp(int num_states, int num_actions, double gamma, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.num_states = num_states;
    spec.num_actions = num_actions;
    spec.branching = num_states;
    spec.seed = seed;
    spec.gamma = gamma;
    return generate_random_mdp(spec);
}

inline TabularPolicy random_policy(int num_states, int num_actions, std::uint64_t seed) {
    SplitRng rng({seed, 0});
    TabularPolicy p;
    p.num_states = num_states;
    p.num_actions = num_actions;
    for (int s = 0; s < num_states; ++s) {
        auto row = rng.dirichlet_uniform(num_actions);
        p.pi.insert(p.pi.end(), row.begin(), row.end());
    }
    return p;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace polco::testing
