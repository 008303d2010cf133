#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polco/mdp.hpp"

namespace polco {

/// Total variation 1/2 * sum |p_i - q_i|. Throws on length mismatch.
double total_variation(std::span<const double> p, std::span<const double> q);
double total_variation(const OccupancyMeasure& p, const OccupancyMeasure& q);

/// Exponentiated 2-Renyi divergence D2(p||q) = sum p_i^2 / q_i.
/// Support violations (p_i > 0 where q_i = 0) yield +infinity rather than an
/// error so that boundary points can be probed; use renyi2_support_violation
/// to locate the offending index.
double renyi2(std::span<const double> p, std::span<const double> q);
double renyi2(const OccupancyMeasure& p, const OccupancyMeasure& q);

/// Index of the first support violation, if any.
std::optional<int> renyi2_support_violation(std::span<const double> p, std::span<const double> q);

/// Importance weights w = d_target / d_behavior with their exact variance
/// under d_behavior, the matching Renyi divergence, and the IS variance
/// bound (r_max/(1-gamma))^2 * D2 / n.
struct WeightDiagnostics {
    std::vector<double> weights;
    double exact_variance = 0.0; // Var_{d_behavior}[w], equals renyi2 - 1
    double renyi2 = 0.0;
    double is_variance_bound = 0.0;
};

WeightDiagnostics weight_diagnostics(const OccupancyMeasure& d_target,
                                     const OccupancyMeasure& d_behavior,
                                     long long n, double r_max, double gamma);

/// Importance-sampling return estimate from samples drawn under d_behavior:
/// 1/((1-gamma) N) sum w(s_n,a_n) R(s_n,a_n). Throws if a sample lands on a
/// pair with zero behavior mass.
double is_estimate(std::span<const std::pair<int, int>> samples,
                   const OccupancyMeasure& d_target,
                   const OccupancyMeasure& d_behavior,
                   const Cmp& c);

} // namespace polco
