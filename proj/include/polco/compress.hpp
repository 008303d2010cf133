#pragma once

#include <string>
#include <vector>

#include "polco/mdp.hpp"
#include "polco/rng.hpp"

namespace polco {

enum class Metric { tv, renyi2 };

const char* metric_name(Metric m);

/// Finite surrogate of the policy space: candidate policies with their
/// occupancies computed once.
struct CandidateSet {
    std::vector<TabularPolicy> policies;
    std::vector<OccupancyMeasure> occupancies;

    int size() const { return static_cast<int>(policies.size()); }

    static CandidateSet from_policies(const Cmp& c, std::vector<TabularPolicy> policies);
    /// count seeded Dirichlet-random policies.
    static CandidateSet random(const Cmp& c, int count, RngSeed seed);
    /// All |A|^|S| deterministic policies (guarded against blow-up).
    static CandidateSet enumerate_deterministic(const Cmp& c, long long max_count = 4096);
};

/// D[i][j] = D(d_i || d_j); row-major. Renyi entries may be +infinity where
/// supports are incompatible.
std::vector<double> divergence_matrix(const CandidateSet& cs, Metric metric);

struct CompressionResult {
    std::vector<int> representative_indices;
    double achieved_radius = 0.0; // max over candidates of min over reps
    Metric metric = Metric::tv;
    double sigma = 0.0;
};

/// Greedy max-min cover: seeds with the 1-center candidate (the j minimizing
/// max_i D[i][j]), then repeatedly adds the candidate farthest from the
/// current representatives until the radius is within sigma. Ties break to
/// the lowest index; the result is deterministic for a fixed input order.
/// Throws if sigma is below the metric floor or some candidate is uncoverable
/// (infinite divergence to every representative).
CompressionResult greedy_cover(const CandidateSet& cs, double sigma, Metric metric);

struct CoverCheck {
    bool ok = false;
    int worst_candidate = -1;
    double worst_value = 0.0;
};

/// Recomputes the max-min radius from scratch for an arbitrary result.
CoverCheck verify_cover(const CandidateSet& cs, const CompressionResult& result);

} // namespace polco
