#pragma once

#include <utility>
#include <vector>

#include "polco/mdp.hpp"
#include "polco/rng.hpp"

namespace polco {

/// Transition tensor rebuilt from generative-model counts, n draws per
/// state-action pair.
struct EstimatedModel {
    std::vector<double> p_hat; // same layout as Cmp::transition
    long long counts_per_pair = 0;
    int num_states = 0;
    int num_actions = 0;

    double p(int s, int a, int s_next) const {
        return p_hat[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s_next];
    }
    /// Cmp with the estimated tensor in place of the true one (mu, gamma,
    /// reward copied from the source).
    Cmp as_cmp(const Cmp& source) const;
};

enum class SampleMode { geometric, stationary };

struct OccupancySample {
    std::vector<std::pair<int, int>> pairs; // (s, a) per sample
    OccupancyMeasure empirical;             // counts / n
    long long env_steps = 0;                // action draws consumed, all samples
};

/// Draws n state-action samples under policy p.
///
/// geometric: each sample starts at mu, steps through the CMP, and stops
/// with probability 1-gamma per step, emitting its final (s, a). The emitted
/// pair is exactly distributed as the discounted occupancy d. One env step
/// is counted per action drawn, so steps per sample average 1/(1-gamma).
///
/// stationary: runs the induced chain for ceil(10/gamma0) burn-in steps,
/// then emits (s, a ~ pi(.|s)) at every step. Requires an ergodic chain
/// (gamma0 > 0).
OccupancySample sample_occupancy(const Cmp& c, const TabularPolicy& p, long long n,
                                 RngSeed seed, SampleMode mode);

/// Generative-model estimate: n_per_pair next-state draws from every
/// P(.|s,a), normalized counts. Total draws = n_per_pair * S * A.
EstimatedModel estimate_transition_model(const Cmp& c, long long n_per_pair, RngSeed seed);

/// Occupancy of p on the estimated model (same solve as polco::occupancy).
OccupancyMeasure occupancy_on_estimate(const EstimatedModel& e, const Cmp& source,
                                       const TabularPolicy& p);

/// Simulation bound: (gamma/(1-gamma)) * E_{(s,a)~d} ||P_hat(.|s,a) - P(.|s,a)||_1
/// with d the exact occupancy of c under p. TV(occupancy on estimate,
/// occupancy on c) never exceeds this.
double simulation_gap_bound(const Cmp& c, const EstimatedModel& e, const TabularPolicy& p);

} // namespace polco
