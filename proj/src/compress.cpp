#include "polco/compress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polco/divergence.hpp"

namespace polco {

const char* metric_name(Metric m) { return m == Metric::tv ? "tv" : "renyi2"; }

CandidateSet CandidateSet::from_policies(const Cmp& c, std::vector<TabularPolicy> policies) {
    if (policies.empty()) throw std::invalid_argument("CandidateSet: need at least one policy");
    CandidateSet cs;
    cs.policies = std::move(policies);
    cs.occupancies.reserve(cs.policies.size());
    for (const auto& p : cs.policies) cs.occupancies.push_back(occupancy(c, p).first);
    return cs;
}

CandidateSet CandidateSet::random(const Cmp& c, int count, RngSeed seed) {
    if (count < 1) throw std::invalid_argument("CandidateSet: count must be >= 1");
    SplitRng rng(seed);
    std::vector<TabularPolicy> policies(count);
    for (auto& p : policies) {
        p.num_states = c.num_states;
        p.num_actions = c.num_actions;
        p.pi.reserve(static_cast<std::size_t>(c.num_states) * c.num_actions);
        for (int s = 0; s < c.num_states; ++s) {
            auto row = rng.dirichlet_uniform(c.num_actions);
            p.pi.insert(p.pi.end(), row.begin(), row.end());
        }
    }
    return from_policies(c, std::move(policies));
}

CandidateSet CandidateSet::enumerate_deterministic(const Cmp& c, long long max_count) {
    double total = std::pow(static_cast<double>(c.num_actions), c.num_states);
    if (total > static_cast<double>(max_count)) {
        throw std::invalid_argument("enumerate_deterministic: |A|^|S| exceeds the cap of " +
                                    std::to_string(max_count));
    }
    const long long n = static_cast<long long>(std::llround(total));
    std::vector<TabularPolicy> policies;
    policies.reserve(static_cast<std::size_t>(n));
    for (long long code = 0; code < n; ++code) {
        TabularPolicy p;
        p.num_states = c.num_states;
        p.num_actions = c.num_actions;
        p.pi.assign(static_cast<std::size_t>(c.num_states) * c.num_actions, 0.0);
        long long rem = code;
        for (int s = 0; s < c.num_states; ++s) {
            p.prob(s, static_cast<int>(rem % c.num_actions)) = 1.0;
            rem /= c.num_actions;
        }
        policies.push_back(std::move(p));
    }
    return from_policies(c, std::move(policies));
}

std::vector<double> divergence_matrix(const CandidateSet& cs, Metric metric) {
    const int n = cs.size();
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            d[static_cast<std::size_t>(i) * n + j] =
                metric == Metric::tv ? total_variation(cs.occupancies[i], cs.occupancies[j])
                                     : renyi2(cs.occupancies[i], cs.occupancies[j]);
        }
    }
    return d;
}

CompressionResult greedy_cover(const CandidateSet& cs, double sigma, Metric metric) {
    const double floor_value = metric == Metric::tv ? 0.0 : 1.0;
    if (sigma < floor_value) {
        throw std::invalid_argument("greedy_cover: sigma below the metric floor");
    }
    const int n = cs.size();
    const std::vector<double> d = divergence_matrix(cs, metric);
    auto at = [&](int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; };

    // seed with the 1-center candidate so a single representative suffices
    // whenever one can cover everything
    int seed_index = 0;
    double seed_radius = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) worst = std::max(worst, at(i, j));
        if (worst < seed_radius) {
            seed_radius = worst;
            seed_index = j;
        }
    }

    CompressionResult result;
    result.metric = metric;
    result.sigma = sigma;
    result.representative_indices.push_back(seed_index);

    std::vector<double> nearest(n); // min divergence to the chosen reps
    for (int i = 0; i < n; ++i) nearest[i] = at(i, seed_index);

    for (;;) {
        int worst = 0;
        for (int i = 1; i < n; ++i) {
            if (nearest[i] > nearest[worst]) worst = i;
        }
        result.achieved_radius = nearest[worst];
        if (result.achieved_radius <= sigma) break;
        if (static_cast<int>(result.representative_indices.size()) == n) {
            throw std::runtime_error("greedy_cover: candidate " + std::to_string(worst) +
                                     " cannot be covered at sigma=" + std::to_string(sigma));
        }
        result.representative_indices.push_back(worst);
        for (int i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], at(i, worst));
    }
    std::sort(result.representative_indices.begin(), result.representative_indices.end());
    return result;
}

CoverCheck verify_cover(const CandidateSet& cs, const CompressionResult& result) {
    const int n = cs.size();
    if (result.representative_indices.empty()) {
        throw std::invalid_argument("verify_cover: no representatives");
    }
    for (int r : result.representative_indices) {
        if (r < 0 || r >= n) throw std::invalid_argument("verify_cover: index out of range");
    }
    CoverCheck check;
    for (int i = 0; i < n; ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (int r : result.representative_indices) {
            const double value = result.metric == Metric::tv
                                     ? total_variation(cs.occupancies[i], cs.occupancies[r])
                                     : renyi2(cs.occupancies[i], cs.occupancies[r]);
            nearest = std::min(nearest, value);
        }
        if (nearest > check.worst_value || i == 0) {
            check.worst_value = nearest;
            check.worst_candidate = i;
        }
    }
    check.ok = check.worst_value <= result.sigma;
    return check;
}

} // namespace polco
