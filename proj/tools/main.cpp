#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polco/divergence.hpp"
#include "polco/harness.hpp"
#include "polco/io.hpp"
#include "polco/sampling.hpp"

namespace {

using namespace polco;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAuditFailure = 2;

std::filesystem::path ensure_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

void print_budget_row(const SampleBudget& b) {
    std::printf("  %-22s n_real=%-18.10g n_int=%lld", formula_name(b.formula_id), b.n_real,
                static_cast<long long>(b.n_int));
    for (const auto& f : b.flags) std::printf("  [%s]", f.c_str());
    std::printf("\n");
}

int run_plan(double gamma0, double gamma, double sigma_tv, double sigma2, double delta,
             int states, int actions, int k, int n_pairs, const std::string& out_dir) {
    ordered_json out = ordered_json::array();
    std::printf("sample-size budgets (delta=%g)\n", delta);
    auto emit = [&](const SampleBudget& b) {
        print_budget_row(b);
        out.push_back(budget_to_json(b));
    };
    if (sigma_tv > 0.0 && gamma0 > 0.0) {
        emit(tv_known_single(gamma0, sigma_tv, delta));
        emit(tv_known_K(gamma0, sigma_tv, delta, k));
    }
    if (sigma_tv > 0.0 && gamma > 0.0 && states > 0) {
        emit(tv_unknown(gamma, states, actions, sigma_tv, delta, UnknownScope::per_pair));
        emit(tv_unknown(gamma, states, actions, sigma_tv, delta, UnknownScope::total));
    }
    if (sigma2 > 1.0 && gamma0 > 0.0) {
        const int pairs = n_pairs > 0 ? n_pairs : states * actions;
        if (pairs >= 3) {
            BudgetPair pair = renyi_known_bounds(gamma0, sigma2, pairs, k, delta);
            emit(pair.lower);
            emit(pair.upper);
        }
    }
    if (sigma2 > 1.0 && gamma > 0.0 && states >= 3) {
        RenyiUnknownBudgets budgets = renyi_unknown_bounds(gamma, states, actions, sigma2, delta);
        emit(budgets.lower);
        emit(budgets.upper);
        emit(budgets.rederived_lower);
        emit(budgets.rederived_upper);
    }
    if (out.empty()) {
        std::fprintf(stderr, "plan: nothing to evaluate; supply --sigma-tv or --sigma2 together "
                             "with --gamma0 (known model) or --gamma/--states/--actions (unknown)\n");
        return kExitUsage;
    }
    const auto dir = ensure_out_dir(out_dir);
    write_text_file((dir / "budgets.json").string(), out.dump(2) + "\n");
    std::printf("wrote %s\n", (dir / "budgets.json").string().c_str());
    return kExitOk;
}

int run_gen_mdp(const GeneratorSpec& spec, const std::string& out_file) {
    Cmp c = generate_random_mdp(spec);
    save_cmp(c, out_file);
    std::printf("wrote %s (%d states, %d actions, gamma=%g%s)\n", out_file.c_str(), c.num_states,
                c.num_actions, c.gamma, spec.reversible ? ", reversible" : "");
    return kExitOk;
}

int run_estimate(const std::string& mdp_file, const std::optional<std::string>& policy_file,
                 std::optional<std::uint64_t> policy_seed, long long n, const std::string& mode,
                 std::uint64_t seed, const std::string& out_dir, bool dump_samples) {
    Cmp c = load_cmp(mdp_file);
    TabularPolicy p;
    if (policy_file) {
        p = load_policy(*policy_file, c.num_states, c.num_actions);
    } else if (policy_seed) {
        SplitRng rng({*policy_seed, 0});
        p.num_states = c.num_states;
        p.num_actions = c.num_actions;
        for (int s = 0; s < c.num_states; ++s) {
            auto row = rng.dirichlet_uniform(c.num_actions);
            p.pi.insert(p.pi.end(), row.begin(), row.end());
        }
    } else {
        p = TabularPolicy::uniform(c.num_states, c.num_actions);
    }

    const SampleMode sample_mode =
        mode == "stationary" ? SampleMode::stationary : SampleMode::geometric;
    OccupancySample sample = sample_occupancy(c, p, n, {seed, 0}, sample_mode);
    auto [exact, marginal] = occupancy(c, p);

    ordered_json j;
    j["mdp"] = mdp_file;
    j["mode"] = mode;
    j["n"] = n;
    j["seed"] = seed;
    j["env_steps"] = sample.env_steps;
    j["tv_to_exact"] = total_variation(sample.empirical, exact);
    j["renyi2_empirical_vs_exact"] = renyi2(sample.empirical, exact);
    j["pair_flattening"] = "s*num_actions + a";

    const auto dir = ensure_out_dir(out_dir);
    write_text_file((dir / "estimate.json").string(), j.dump(2) + "\n");
    if (dump_samples) {
        write_text_file((dir / "samples.csv").string(), samples_csv(sample.pairs, 0));
    }
    std::printf("tv(d_hat, d) = %s  (n=%lld, env_steps=%lld)\n",
                format_double(j["tv_to_exact"].get<double>()).c_str(), n,
                static_cast<long long>(sample.env_steps));
    std::printf("wrote %s\n", (dir / "estimate.json").string().c_str());
    return kExitOk;
}

int run_verify(Metric metric, const std::optional<std::string>& config_file,
               std::optional<std::uint64_t> seed, std::optional<int> replicates,
               std::optional<std::string> out_dir, std::optional<int> threads) {
    ExperimentConfig cfg;
    if (config_file) cfg = load_experiment_config(*config_file);
    cfg.metric = metric;
    if (seed) cfg.master_seed = *seed;
    if (replicates) cfg.replicates = *replicates;
    if (out_dir) cfg.out_dir = *out_dir;
    if (threads) cfg.threads = *threads;

    ExperimentReport report = run_concentration_experiment(cfg);
    const auto dir = ensure_out_dir(cfg.out_dir);
    write_text_file((dir / "records.csv").string(), run_records_csv(report.records));
    write_text_file((dir / "summary.json").string(),
                    experiment_summary_json(cfg, report).dump(2) + "\n");

    std::printf("%s audit: %zu records, violation_rate=%s, delta=%g%s\n", metric_name(metric),
                report.records.size(), format_double(report.violation_rate).c_str(), cfg.delta,
                report.zero_sample_shortcut ? " (zero-sample shortcut)" : "");
    for (const auto& f : report.flags) std::printf("  flag: %s\n", f.c_str());
    std::printf("wrote %s and summary.json\n", (dir / "records.csv").string().c_str());
    return report.violation_rate <= cfg.delta ? kExitOk : kExitAuditFailure;
}

int run_geometry(const std::vector<int>& n_list, const std::vector<double>& sigma2_list,
                 std::uint64_t seed, const std::string& out_dir, int restarts, int iterations) {
    OracleBudget budget;
    budget.restarts = restarts;
    budget.iterations = iterations;
    auto certs = run_geometry_audit(n_list, sigma2_list, {seed, 0}, budget);

    const auto dir = ensure_out_dir(out_dir);
    write_text_file((dir / "certificates.csv").string(), certificates_csv(certs));

    ordered_json j = ordered_json::array();
    bool any_failed = false;
    for (const auto& c : certs) {
        ordered_json row;
        row["n"] = c.n;
        row["sigma2"] = c.sigma2;
        row["max_tv"] = c.closed_form.max_tv;
        row["loosest_tv"] = c.closed_form.loosest_tv;
        row["min_tv"] = c.closed_form.min_tv;
        row["family_residual_max"] = c.family_residual_max;
        row["family_notes"] = c.family_notes;
        row["oracle_max_uniform"] = c.oracle_max_uniform;
        row["oracle_min_uniform"] = c.oracle_min_uniform;
        row["oracle_max_vrep"] = c.oracle_max_vrep;
        row["oracle_min_vrep"] = c.oracle_min_vrep;
        row["oracle_exceeds_max_tv"] = c.oracle_exceeds_max_tv;
        row["oracle_confirms_min_tv"] = c.oracle_confirms_min_tv;
        row["status"] = c.failed ? "failed" : "ok";
        if (c.failed) row["failure"] = c.failure;
        any_failed = any_failed || c.failed;
        j.push_back(std::move(row));
    }
    write_text_file((dir / "certificates.json").string(), j.dump(2) + "\n");
    std::printf("%zu certificates, %s\n", certs.size(), any_failed ? "FAILURES present" : "all ok");
    std::printf("wrote %s\n", (dir / "certificates.csv").string().c_str());
    return any_failed ? kExitAuditFailure : kExitOk;
}

int run_compress(const std::string& mdp_file, int candidates, std::uint64_t cand_seed,
                 bool enumerate, const std::string& metric_str, double sigma,
                 const std::string& out_file) {
    Cmp c = load_cmp(mdp_file);
    CandidateSet cs = enumerate ? CandidateSet::enumerate_deterministic(c)
                                : CandidateSet::random(c, candidates, {cand_seed, 0});
    const Metric metric = metric_str == "renyi2" ? Metric::renyi2 : Metric::tv;
    CompressionResult result = greedy_cover(cs, sigma, metric);
    CoverCheck check = verify_cover(cs, result);

    ordered_json j = compression_result_to_json(result, check);
    j["candidates"] = cs.size();
    write_text_file(out_file, j.dump(2) + "\n");
    std::printf("K=%zu representatives cover %d candidates at radius %s (sigma=%g)\n",
                result.representative_indices.size(), cs.size(),
                format_double(result.achieved_radius).c_str(), sigma);
    std::printf("wrote %s\n", out_file.c_str());
    return check.ok ? kExitOk : kExitAuditFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"policy-space compression statistics toolkit"};
    app.require_subcommand(1);

    // plan
    auto* plan = app.add_subcommand("plan", "evaluate the sample-size formulas");
    double plan_gamma0 = 0.0, plan_gamma = 0.0, plan_sigma_tv = 0.0, plan_sigma2 = 0.0;
    double plan_delta = 0.05;
    int plan_states = 0, plan_actions = 1, plan_k = 1, plan_pairs = 0;
    std::string plan_out = ".";
    plan->add_option("--gamma0", plan_gamma0, "spectral gap (known model)");
    plan->add_option("--gamma", plan_gamma, "discount (unknown model)");
    plan->add_option("--sigma-tv", plan_sigma_tv, "TV threshold");
    plan->add_option("--sigma2", plan_sigma2, "2-Renyi threshold");
    plan->add_option("--delta", plan_delta, "confidence");
    plan->add_option("--states", plan_states, "|S|");
    plan->add_option("--actions", plan_actions, "|A|");
    plan->add_option("--k", plan_k, "number of representative policies");
    plan->add_option("--n-pairs", plan_pairs, "|SA| override for the known-model Renyi bounds");
    plan->add_option("--out-dir", plan_out, "output directory");

    // gen-mdp
    auto* gen = app.add_subcommand("gen-mdp", "generate a random CMP and write it as JSON");
    GeneratorSpec spec;
    std::string gen_out = "mdp.json";
    gen->add_option("--states", spec.num_states, "|S|");
    gen->add_option("--actions", spec.num_actions, "|A|");
    gen->add_option("--branching", spec.branching, "successor states per (s,a)");
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--gamma", spec.gamma, "discount");
    gen->add_flag("--reversible", spec.reversible, "symmetric-chain construction");
    bool no_reward = false;
    gen->add_flag("--no-reward", no_reward, "omit the reward table");
    gen->add_option("--out", gen_out, "output file");

    // estimate
    auto* est = app.add_subcommand("estimate", "sample one empirical occupancy and compare to exact");
    std::string est_mdp, est_mode = "geometric", est_out = ".";
    std::optional<std::string> est_policy;
    std::optional<std::uint64_t> est_policy_seed;
    long long est_n = 10000;
    std::uint64_t est_seed = 0;
    bool est_dump = false;
    est->add_option("--mdp", est_mdp, "MDP JSON file")->required();
    est->add_option("--policy", est_policy, "policy JSON file");
    est->add_option("--policy-seed", est_policy_seed, "seeded random policy");
    est->add_option("--n", est_n, "number of occupancy samples");
    est->add_option("--mode", est_mode, "geometric or stationary")
        ->check(CLI::IsMember({"geometric", "stationary"}));
    est->add_option("--seed", est_seed, "sampler seed");
    est->add_option("--out-dir", est_out, "output directory");
    est->add_flag("--dump-samples", est_dump, "also write samples.csv");

    // verify-tv / verify-renyi
    std::optional<std::string> v_config;
    std::optional<std::uint64_t> v_seed;
    std::optional<int> v_replicates, v_threads;
    std::optional<std::string> v_out;
    auto add_verify_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", v_config, "experiment config JSON");
        cmd->add_option("--seed", v_seed, "master seed override");
        cmd->add_option("--replicates", v_replicates, "replicate count override");
        cmd->add_option("--out-dir", v_out, "output directory override");
        cmd->add_option("--threads", v_threads, "parallel replicate workers");
    };
    auto* verify_tv = app.add_subcommand("verify-tv", "audit a TV concentration bound");
    add_verify_flags(verify_tv);
    auto* verify_renyi = app.add_subcommand("verify-renyi", "audit the Renyi concentration bounds");
    add_verify_flags(verify_renyi);

    // geometry
    auto* geo = app.add_subcommand("geometry", "emit geometry certificates over an (n, sigma2) grid");
    std::vector<int> geo_n{3, 4, 6};
    std::vector<double> geo_sigma2{1.5, 2.0};
    std::uint64_t geo_seed = 0;
    std::string geo_out = ".";
    int geo_restarts = 2000, geo_iterations = 200;
    geo->add_option("--n-list", geo_n, "simplex dimensions")->delimiter(',');
    geo->add_option("--sigma2-list", geo_sigma2, "Renyi thresholds")->delimiter(',');
    geo->add_option("--seed", geo_seed, "oracle seed");
    geo->add_option("--out-dir", geo_out, "output directory");
    geo->add_option("--restarts", geo_restarts, "oracle random restarts");
    geo->add_option("--iterations", geo_iterations, "oracle refinement iterations");

    // compress
    auto* comp = app.add_subcommand("compress", "greedy cover of a candidate policy set");
    std::string comp_mdp, comp_metric = "tv", comp_out = "compression.json";
    int comp_candidates = 50;
    std::uint64_t comp_seed = 0;
    bool comp_enumerate = false;
    double comp_sigma = 0.2;
    comp->add_option("--mdp", comp_mdp, "MDP JSON file")->required();
    comp->add_option("--candidates", comp_candidates, "random candidate count");
    comp->add_option("--cand-seed", comp_seed, "candidate seed");
    comp->add_flag("--enumerate-deterministic", comp_enumerate, "use all deterministic policies");
    comp->add_option("--metric", comp_metric, "tv or renyi2")
        ->check(CLI::IsMember({"tv", "renyi2"}));
    comp->add_option("--sigma", comp_sigma, "covering threshold");
    comp->add_option("--out", comp_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (plan->parsed()) {
            return run_plan(plan_gamma0, plan_gamma, plan_sigma_tv, plan_sigma2, plan_delta,
                            plan_states, plan_actions, plan_k, plan_pairs, plan_out);
        }
        if (gen->parsed()) {
            spec.with_reward = !no_reward;
            return run_gen_mdp(spec, gen_out);
        }
        if (est->parsed()) {
            return run_estimate(est_mdp, est_policy, est_policy_seed, est_n, est_mode, est_seed,
                                est_out, est_dump);
        }
        if (verify_tv->parsed()) {
            return run_verify(Metric::tv, v_config, v_seed, v_replicates, v_out, v_threads);
        }
        if (verify_renyi->parsed()) {
            return run_verify(Metric::renyi2, v_config, v_seed, v_replicates, v_out, v_threads);
        }
        if (geo->parsed()) {
            return run_geometry(geo_n, geo_sigma2, geo_seed, geo_out, geo_restarts, geo_iterations);
        }
        if (comp->parsed()) {
            return run_compress(comp_mdp, comp_candidates, comp_seed, comp_enumerate, comp_metric,
                                comp_sigma, comp_out);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitAuditFailure;
    }
    return kExitUsage;
}
