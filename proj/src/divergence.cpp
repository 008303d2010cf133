#include "polco/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polco {

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

double total_variation(const OccupancyMeasure& p, const OccupancyMeasure& q) {
    return total_variation(std::span<const double>(p.values), std::span<const double>(q.values));
}

std::optional<int> renyi2_support_violation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("renyi2: length mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0 && q[i] <= 0.0) return static_cast<int>(i);
    }
    return std::nullopt;
}

double renyi2(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("renyi2: length mismatch");
    // extended-precision accumulation keeps the Var[w] = D2 - 1 identity at
    // final-rounding scale even when some q_i is tiny
    long double sum = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        sum += static_cast<long double>(p[i]) * p[i] / q[i];
    }
    return static_cast<double>(sum);
}

double renyi2(const OccupancyMeasure& p, const OccupancyMeasure& q) {
    return renyi2(std::span<const double>(p.values), std::span<const double>(q.values));
}

WeightDiagnostics weight_diagnostics(const OccupancyMeasure& d_target,
                                     const OccupancyMeasure& d_behavior,
                                     long long n, double r_max, double gamma) {
    if (n < 1) throw std::invalid_argument("weight_diagnostics: n must be >= 1");
    if (auto bad = renyi2_support_violation(d_target.values, d_behavior.values)) {
        throw std::invalid_argument("weight_diagnostics: support violation at pair index " +
                                    std::to_string(*bad));
    }
    WeightDiagnostics w;
    w.weights.resize(d_target.values.size(), 0.0);
    long double mean = 0.0L;
    long double second_moment = 0.0L;
    for (std::size_t i = 0; i < d_target.values.size(); ++i) {
        const double q = d_behavior.values[i];
        if (q > 0.0) {
            w.weights[i] = d_target.values[i] / q;
            mean += static_cast<long double>(q) * w.weights[i];
            second_moment += static_cast<long double>(q) * w.weights[i] * w.weights[i];
        }
    }
    w.exact_variance = static_cast<double>(second_moment - mean * mean);
    w.renyi2 = renyi2(d_target, d_behavior);
    const double scale = r_max / (1.0 - gamma);
    w.is_variance_bound = scale * scale * w.renyi2 / static_cast<double>(n);
    return w;
}

double is_estimate(std::span<const std::pair<int, int>> samples,
                   const OccupancyMeasure& d_target,
                   const OccupancyMeasure& d_behavior,
                   const Cmp& c) {
    if (!c.reward) throw std::invalid_argument("is_estimate: CMP has no reward table");
    if (samples.empty()) throw std::invalid_argument("is_estimate: empty batch");
    double total = 0.0;
    for (const auto& [s, a] : samples) {
        const int idx = c.pair_index(s, a);
        const double q = d_behavior.values[idx];
        if (q <= 0.0) {
            throw std::runtime_error("is_estimate: sample at pair " + std::to_string(idx) +
                                     " has zero behavior occupancy");
        }
        total += d_target.values[idx] / q * c.r(s, a);
    }
    return total / ((1.0 - c.gamma) * static_cast<double>(samples.size()));
}

} // namespace polco
