#include "polco/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "polco/divergence.hpp"

namespace polco {

Cmp EstimatedModel::as_cmp(const Cmp& source) const {
    Cmp c = source;
    c.transition = p_hat;
    return c;
}

OccupancySample sample_occupancy(const Cmp& c, const TabularPolicy& p, long long n,
                                 RngSeed seed, SampleMode mode) {
    require_valid(c, p);
    if (n < 1) throw std::invalid_argument("sample_occupancy: n must be >= 1");

    SplitRng rng(seed);
    OccupancySample out;
    out.pairs.reserve(static_cast<std::size_t>(n));
    std::vector<long long> counts(static_cast<std::size_t>(c.num_pairs()), 0);

    auto policy_row = [&](int s) {
        return std::span<const double>(p.pi.data() + static_cast<std::size_t>(s) * c.num_actions,
                                       static_cast<std::size_t>(c.num_actions));
    };
    auto transition_row = [&](int s, int a) {
        return std::span<const double>(
            c.transition.data() + (static_cast<std::size_t>(s) * c.num_actions + a) * c.num_states,
            static_cast<std::size_t>(c.num_states));
    };

    if (mode == SampleMode::geometric) {
        const double stop_prob = 1.0 - c.gamma;
        for (long long i = 0; i < n; ++i) {
            int s = rng.categorical(c.mu);
            for (;;) {
                int a = rng.categorical(policy_row(s));
                ++out.env_steps;
                if (rng.next_double() < stop_prob) {
                    out.pairs.emplace_back(s, a);
                    ++counts[static_cast<std::size_t>(c.pair_index(s, a))];
                    break;
                }
                s = rng.categorical(transition_row(s, a));
            }
        }
    } else {
        SpectralInfo info = spectral_gap(induced_chain(c, p));
        if (!(info.gamma0 > 0.0)) {
            throw std::runtime_error("sample_occupancy: stationary mode needs an ergodic chain "
                                     "(spectral gap is zero)");
        }
        const long long burn_in = static_cast<long long>(std::ceil(10.0 / info.gamma0));
        int s = rng.categorical(c.mu);
        for (long long t = 0; t < burn_in; ++t) {
            int a = rng.categorical(policy_row(s));
            ++out.env_steps;
            s = rng.categorical(transition_row(s, a));
        }
        for (long long i = 0; i < n; ++i) {
            int a = rng.categorical(policy_row(s));
            ++out.env_steps;
            out.pairs.emplace_back(s, a);
            ++counts[static_cast<std::size_t>(c.pair_index(s, a))];
            s = rng.categorical(transition_row(s, a));
        }
    }

    out.empirical.kind = OccupancyKind::empirical;
    out.empirical.sample_count = n;
    out.empirical.values.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out.empirical.values[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
    }
    return out;
}

EstimatedModel estimate_transition_model(const Cmp& c, long long n_per_pair, RngSeed seed) {
    if (n_per_pair < 1) throw std::invalid_argument("estimate_transition_model: n_per_pair >= 1");
    SplitRng rng(seed);
    EstimatedModel e;
    e.num_states = c.num_states;
    e.num_actions = c.num_actions;
    e.counts_per_pair = n_per_pair;
    e.p_hat.assign(c.transition.size(), 0.0);

    std::vector<long long> counts(static_cast<std::size_t>(c.num_states), 0);
    for (int s = 0; s < c.num_states; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            std::span<const double> row(
                c.transition.data() + (static_cast<std::size_t>(s) * c.num_actions + a) * c.num_states,
                static_cast<std::size_t>(c.num_states));
            std::fill(counts.begin(), counts.end(), 0);
            for (long long i = 0; i < n_per_pair; ++i) ++counts[rng.categorical(row)];
            for (int t = 0; t < c.num_states; ++t) {
                e.p_hat[(static_cast<std::size_t>(s) * c.num_actions + a) * c.num_states + t] =
                    static_cast<double>(counts[t]) / static_cast<double>(n_per_pair);
            }
        }
    }
    return e;
}

OccupancyMeasure occupancy_on_estimate(const EstimatedModel& e, const Cmp& source,
                                       const TabularPolicy& p) {
    return occupancy(e.as_cmp(source), p).first;
}

double simulation_gap_bound(const Cmp& c, const EstimatedModel& e, const TabularPolicy& p) {
    if (e.num_states != c.num_states || e.num_actions != c.num_actions) {
        throw std::invalid_argument("simulation_gap_bound: dimension mismatch");
    }
    auto [d, marginal] = occupancy(c, p);
    double expected_l1 = 0.0;
    for (int s = 0; s < c.num_states; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            const double mass = d.values[static_cast<std::size_t>(c.pair_index(s, a))];
            if (mass == 0.0) continue;
            double l1 = 0.0;
            for (int t = 0; t < c.num_states; ++t) l1 += std::abs(e.p(s, a, t) - c.p(s, a, t));
            expected_l1 += mass * l1;
        }
    }
    return c.gamma / (1.0 - c.gamma) * expected_l1;
}

} // namespace polco
