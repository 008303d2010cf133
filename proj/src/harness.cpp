#include "polco/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "polco/divergence.hpp"
#include "polco/io.hpp"
#include "polco/sampling.hpp"

namespace polco {

namespace {

// Symmetric doubly stochastic matrix: identity, a uniform smoothing term, and
// averaged random permutations (Birkhoff components paired with their
// transposes). The smoothing term keeps the spectral gap at least 0.1.
std::vector<double> symmetric_stochastic(int n, int components, SplitRng& rng) {
    constexpr double kSmoothing = 0.1;
    std::vector<double> weights = rng.dirichlet_uniform(components + 1);
    std::vector<double> m(static_cast<std::size_t>(n) * n, kSmoothing / n);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] += (1.0 - kSmoothing) * weights[0];
    for (int k = 0; k < components; ++k) {
        std::vector<int> perm = rng.sample_without_replacement(n, n);
        const double w = (1.0 - kSmoothing) * weights[k + 1] * 0.5;
        for (int i = 0; i < n; ++i) {
            m[static_cast<std::size_t>(i) * n + perm[i]] += w;
            m[static_cast<std::size_t>(perm[i]) * n + i] += w;
        }
    }
    return m;
}

} // namespace

Cmp generate_random_mdp(const GeneratorSpec& spec) {
    if (spec.num_states < 1 || spec.num_actions < 1) {
        throw std::invalid_argument("generate_random_mdp: sizes must be >= 1");
    }
    if (spec.branching < 1 || spec.branching > spec.num_states) {
        throw std::invalid_argument("generate_random_mdp: branching must be in [1, num_states]");
    }
    if (!(spec.gamma > 0.0 && spec.gamma < 1.0)) {
        throw std::invalid_argument("generate_random_mdp: gamma must be in (0,1)");
    }

    SplitRng rng({spec.seed, 0});
    Cmp c;
    c.num_states = spec.num_states;
    c.num_actions = spec.num_actions;
    c.gamma = spec.gamma;
    c.transition.assign(
        static_cast<std::size_t>(spec.num_states) * spec.num_actions * spec.num_states, 0.0);

    if (spec.reversible) {
        for (int a = 0; a < spec.num_actions; ++a) {
            std::vector<double> m = symmetric_stochastic(spec.num_states, spec.branching, rng);
            for (int s = 0; s < spec.num_states; ++s) {
                for (int t = 0; t < spec.num_states; ++t) {
                    c.p(s, a, t) = m[static_cast<std::size_t>(s) * spec.num_states + t];
                }
            }
        }
        // symmetric chains are stationary under the uniform distribution
        c.mu.assign(spec.num_states, 1.0 / spec.num_states);
    } else {
        for (int s = 0; s < spec.num_states; ++s) {
            for (int a = 0; a < spec.num_actions; ++a) {
                std::vector<int> successors =
                    rng.sample_without_replacement(spec.num_states, spec.branching);
                std::vector<double> weights = rng.dirichlet_uniform(spec.branching);
                for (int k = 0; k < spec.branching; ++k) c.p(s, a, successors[k]) = weights[k];
            }
        }
        c.mu = rng.dirichlet_uniform(spec.num_states);
    }

    if (spec.with_reward) {
        std::vector<double> reward(static_cast<std::size_t>(spec.num_states) * spec.num_actions);
        for (double& r : reward) r = rng.next_double();
        c.reward = std::move(reward);
        c.r_max = 1.0;
    }
    return c;
}

namespace {

struct ResolvedInputs {
    Cmp cmp;
    TabularPolicy policy;
};

ResolvedInputs resolve_inputs(const ExperimentConfig& cfg) {
    ResolvedInputs in;
    in.cmp = cfg.mdp_file ? load_cmp(*cfg.mdp_file) : generate_random_mdp(cfg.generator);
    if (cfg.policy_file) {
        in.policy = load_policy(*cfg.policy_file, in.cmp.num_states, in.cmp.num_actions);
    } else if (cfg.random_policy_seed) {
        SplitRng rng({*cfg.random_policy_seed, 0});
        in.policy.num_states = in.cmp.num_states;
        in.policy.num_actions = in.cmp.num_actions;
        for (int s = 0; s < in.cmp.num_states; ++s) {
            auto row = rng.dirichlet_uniform(in.cmp.num_actions);
            in.policy.pi.insert(in.policy.pi.end(), row.begin(), row.end());
        }
    } else {
        in.policy = TabularPolicy::uniform(in.cmp.num_states, in.cmp.num_actions);
    }
    require_valid(in.cmp, in.policy);
    return in;
}

void run_replicates(int replicates, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, replicates));
    if (threads == 1) {
        for (int r = 0; r < replicates; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= replicates) return;
                body(r);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

ExperimentReport run_concentration_experiment(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    ResolvedInputs in = resolve_inputs(cfg);

    ExperimentReport report;
    report.cmp = in.cmp;
    report.policy = in.policy;

    const int n_pairs = in.cmp.num_pairs();
    const ThresholdReport meaningful =
        cfg.metric == Metric::tv ? threshold_meaningful_tv(n_pairs, cfg.threshold)
                                 : threshold_meaningful_renyi(n_pairs, cfg.threshold);
    if (!meaningful.meaningful) {
        // no-sample regime: the uniform representative already covers
        // everything, so no samples are spent and nothing can be violated.
        report.zero_sample_shortcut = true;
        report.flags.push_back("zero_sample_shortcut: threshold at or beyond the no-sample limit");
        report.records.resize(cfg.replicates);
        for (int r = 0; r < cfg.replicates; ++r) {
            RunRecord& rec = report.records[r];
            rec.replicate = r;
            rec.threshold = cfg.threshold;
            rec.formula_id = cfg.metric == Metric::tv
                                 ? (cfg.setting == Setting::known_model ? FormulaId::tv_known_single
                                                                        : FormulaId::tv_unknown_per_pair)
                                 : (cfg.setting == Setting::known_model ? FormulaId::renyi_known_lower
                                                                        : FormulaId::renyi_unknown_lower);
        }
        report.violation_rate = 0.0;
        return report;
    }

    auto [exact, marginal] = occupancy(in.cmp, in.policy);

    struct Variant {
        FormulaId id;
        long long n = 0;
        std::vector<std::string> flags;
    };
    std::vector<Variant> variants;

    if (cfg.setting == Setting::known_model) {
        SpectralInfo info = spectral_gap(induced_chain(in.cmp, in.policy));
        report.gamma0 = info.gamma0;
        report.reversible_chain = info.reversible;
        if (!(info.gamma0 > 0.0)) {
            throw std::runtime_error("known-model audit: induced chain has zero spectral gap");
        }
        if (!info.reversible) {
            report.flags.push_back("chain_not_reversible: gamma0-based counts assume a reversible chain");
        }
        if (cfg.metric == Metric::tv) {
            SampleBudget b = tv_known_single(info.gamma0, cfg.threshold, cfg.delta);
            variants.push_back({b.formula_id, b.n_int, b.flags});
        } else {
            BudgetPair pair = renyi_known_bounds(info.gamma0, cfg.threshold, n_pairs, 1, cfg.delta);
            variants.push_back({pair.lower.formula_id, pair.lower.n_int, pair.lower.flags});
            variants.push_back({pair.upper.formula_id, pair.upper.n_int, pair.upper.flags});
        }
    } else {
        if (cfg.metric == Metric::tv) {
            SampleBudget b = tv_unknown(in.cmp.gamma, in.cmp.num_states, in.cmp.num_actions,
                                        cfg.threshold, cfg.delta, UnknownScope::per_pair);
            variants.push_back({b.formula_id, b.n_int, b.flags});
        } else {
            RenyiUnknownBudgets budgets = renyi_unknown_bounds(
                in.cmp.gamma, in.cmp.num_states, in.cmp.num_actions, cfg.threshold, cfg.delta);
            // the printed counts are totals over the generative model;
            // convert to per-pair draws
            auto per_pair = [&](const SampleBudget& b) {
                return static_cast<long long>(
                    std::ceil(b.n_real / static_cast<double>(n_pairs)));
            };
            variants.push_back({budgets.lower.formula_id, per_pair(budgets.lower), budgets.lower.flags});
            variants.push_back({budgets.upper.formula_id, per_pair(budgets.upper), budgets.upper.flags});
        }
        for (auto& v : variants) {
            if (v.n > cfg.per_pair_cap) {
                v.flags.push_back("per_pair_cap_applied: formula asked for " + std::to_string(v.n) +
                                  " draws per pair, capped at " + std::to_string(cfg.per_pair_cap));
                v.n = cfg.per_pair_cap;
            }
        }
    }
    for (const auto& v : variants) {
        for (const auto& f : v.flags) report.flags.push_back(f);
    }

    report.records.resize(static_cast<std::size_t>(cfg.replicates) * variants.size());
    const Cmp& cmp = in.cmp;
    const TabularPolicy& policy = in.policy;
    const OccupancyMeasure& d_exact = exact;

    auto body = [&](int r) {
        for (std::size_t v = 0; v < variants.size(); ++v) {
            const Variant& variant = variants[v];
            RunRecord rec;
            rec.replicate = r;
            rec.n_used = variant.n;
            rec.formula_id = variant.id;
            rec.threshold = cfg.threshold;
            const auto started = std::chrono::steady_clock::now();

            OccupancyMeasure d_hat;
            if (cfg.setting == Setting::known_model) {
                OccupancySample sample = sample_occupancy(
                    cmp, policy, variant.n,
                    {cfg.master_seed, static_cast<std::uint64_t>(r) * variants.size() + v},
                    SampleMode::geometric);
                d_hat = std::move(sample.empirical);
                rec.env_steps = sample.env_steps;
            } else {
                EstimatedModel model = estimate_transition_model(
                    cmp, variant.n,
                    {cfg.master_seed, static_cast<std::uint64_t>(r) * variants.size() + v});
                d_hat = occupancy_on_estimate(model, cmp, policy);
                rec.env_steps = variant.n * n_pairs;
            }
            rec.divergence = cfg.metric == Metric::tv ? total_variation(d_hat, d_exact)
                                                      : renyi2(d_hat, d_exact);
            rec.violated = rec.divergence > cfg.threshold;
            if (cfg.record_wall_time) {
                rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
            }
            report.records[static_cast<std::size_t>(r) * variants.size() + v] = rec;
        }
    };
    run_replicates(cfg.replicates, cfg.threads, body);

    long long violations = 0;
    for (const auto& rec : report.records) violations += rec.violated ? 1 : 0;
    report.violation_rate =
        static_cast<double>(violations) / static_cast<double>(report.records.size());
    return report;
}

std::vector<GeometryCertificate> run_geometry_audit(const std::vector<int>& n_list,
                                                    const std::vector<double>& sigma2_list,
                                                    RngSeed seed, OracleBudget budget) {
    std::vector<GeometryCertificate> certs;
    std::uint64_t stream = seed.stream;
    for (int n : n_list) {
        for (double sigma2 : sigma2_list) {
            GeometryCertificate cert;
            try {
                cert = certificate(n, sigma2, {seed.seed, stream}, budget);
                if (cert.family_residual_max > 1e-10) {
                    cert.failed = true;
                    cert.failure = "family residual exceeds 1e-10";
                }
            } catch (const std::exception& e) {
                cert.n = n;
                cert.sigma2 = sigma2;
                cert.failed = true;
                cert.failure = e.what();
            }
            stream += 2; // certificate consumes two oracle streams
            certs.push_back(std::move(cert));
        }
    }
    return certs;
}

} // namespace polco
