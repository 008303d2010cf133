#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polco {

/// Tabular controlled Markov process: (S, A, P, mu, gamma) with an optional
/// bounded reward table. Transition probabilities are stored flat in
/// [s][a][s'] order; state-action pairs are flattened as s * num_actions + a
/// throughout the library and in every file format.
struct Cmp {
    int num_states = 0;
    int num_actions = 0;
    std::vector<double> transition;          // P[s][a][s'], size S*A*S
    std::vector<double> mu;                  // initial state distribution
    double gamma = 0.0;                      // discount, required in (0,1)
    std::optional<std::vector<double>> reward; // R[s][a] in [0, r_max]
    double r_max = 0.0;

    double p(int s, int a, int s_next) const {
        return transition[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s_next];
    }
    double& p(int s, int a, int s_next) {
        return transition[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s_next];
    }
    double r(int s, int a) const { return (*reward)[static_cast<std::size_t>(s) * num_actions + a]; }

    int num_pairs() const { return num_states * num_actions; }
    int pair_index(int s, int a) const { return s * num_actions + a; }
};

/// Stochastic tabular policy; pi[s][a] stored row-major.
struct TabularPolicy {
    int num_states = 0;
    int num_actions = 0;
    std::vector<double> pi;

    double prob(int s, int a) const { return pi[static_cast<std::size_t>(s) * num_actions + a]; }
    double& prob(int s, int a) { return pi[static_cast<std::size_t>(s) * num_actions + a]; }

    static TabularPolicy uniform(int num_states, int num_actions);
};

enum class OccupancyKind { exact, empirical };

/// Discounted state-action distribution d(s,a), flattened s * num_actions + a.
struct OccupancyMeasure {
    std::vector<double> values;
    OccupancyKind kind = OccupancyKind::exact;
    long long sample_count = 0; // 0 for exact

    int size() const { return static_cast<int>(values.size()); }
};

/// Single-policy state chain M[s][s'] = sum_a pi[s][a] P[s][a][s'].
struct PolicyInducedChain {
    int num_states = 0;
    std::vector<double> m; // row-major S x S

    double at(int s, int s_next) const { return m[static_cast<std::size_t>(s) * num_states + s_next]; }
};

/// Second eigenvalue and spectral gap of a policy-induced chain.
/// gamma0 = min{1 - Re(lambda2), 1}. When the chain is not reversible the
/// ordered-real-eigenvalue premise behind gamma0-based concentration fails;
/// consumers must check `reversible` before trusting the gap.
struct SpectralInfo {
    double lambda2 = 0.0;          // real part of the second-largest eigenvalue
    double lambda2_modulus = 0.0;
    double gamma0 = 0.0;
    bool reversible = false;
};

/// Lists every violated structural invariant of `c` (empty result = valid):
/// row sums within 1e-12 of 1, nonnegativity, gamma strictly inside (0,1),
/// reward values inside [0, r_max].
std::vector<std::string> validate_cmp(const Cmp& c);

std::vector<std::string> validate_policy(const Cmp& c, const TabularPolicy& p);

/// Throws std::invalid_argument listing all violations if either fails.
void require_valid(const Cmp& c, const TabularPolicy& p);

PolicyInducedChain induced_chain(const Cmp& c, const TabularPolicy& p);

/// Exact discounted occupancy: solves the linear fixed point
///   d(s) = (1-gamma) mu(s) + gamma sum_{s',a'} d(s') pi(a'|s') P(s|s',a')
/// by dense partial-pivot LU, then d(s,a) = pi(a|s) d(s).
/// Returns the state-action measure and the state marginal.
std::pair<OccupancyMeasure, std::vector<double>> occupancy(const Cmp& c, const TabularPolicy& p);

/// Number of power-series terms the oracle uses: smallest T with
/// gamma^{T+1}/(1-gamma) < tol.
int truncation_length(double gamma, double tol);

/// Independent brute-force occupancy: truncated series
/// (1-gamma) sum_{t=0}^{T} gamma^t (mu^T M^t), plain loops, no linear solve.
/// Within tol of the true occupancy in L1.
OccupancyMeasure occupancy_oracle(const Cmp& c, const TabularPolicy& p, double tol);

SpectralInfo spectral_gap(const PolicyInducedChain& chain);

/// J = 1/(1-gamma) * sum_{s,a} d(s,a) R(s,a). Requires a reward table.
double exact_return(const Cmp& c, const TabularPolicy& p);

/// Monte Carlo return from occupancy samples: 1/((1-gamma) N) sum R(s_n,a_n).
double mc_return(std::span<const std::pair<int, int>> samples, const Cmp& c);

} // namespace polco
