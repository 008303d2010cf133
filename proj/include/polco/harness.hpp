#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polco/compress.hpp"
#include "polco/geometry.hpp"
#include "polco/mdp.hpp"
#include "polco/planner.hpp"
#include "polco/rng.hpp"

namespace polco {

struct GeneratorSpec {
    int num_states = 5;
    int num_actions = 3;
    int branching = 2;
    std::uint64_t seed = 0;
    bool reversible = false;
    double gamma = 0.9;
    bool with_reward = true;
};

/// Garnet-style random CMP: each (s,a) reaches `branching` distinct states
/// with Dirichlet(1,...,1) weights. reversible=true instead mixes symmetric
/// doubly stochastic components (averaged random permutations, identity, and
/// a uniform smoothing term), so the chain induced by the uniform policy is
/// symmetric and its spectral gap is bounded away from zero.
Cmp generate_random_mdp(const GeneratorSpec& spec);

enum class Setting { known_model, unknown_model };

struct ExperimentConfig {
    // MDP: file takes precedence when set.
    std::optional<std::string> mdp_file;
    GeneratorSpec generator;

    // Policy: file > random_policy_seed > uniform.
    std::optional<std::string> policy_file;
    std::optional<std::uint64_t> random_policy_seed;

    Setting setting = Setting::known_model;
    Metric metric = Metric::tv;
    double threshold = 0.1;
    double delta = 0.05;
    int replicates = 200;
    std::uint64_t master_seed = 0;
    int threads = 1;
    long long per_pair_cap = 100000; // unknown-model generative draws per pair
    bool record_wall_time = false;   // off by default: wall times break byte-identical reruns
    std::string out_dir = ".";
};

struct RunRecord {
    int replicate = 0;
    long long n_used = 0;
    FormulaId formula_id = FormulaId::tv_known_single;
    double divergence = 0.0;
    double threshold = 0.0;
    bool violated = false;
    long long env_steps = 0;
    long long wall_ms = 0;
};

struct ExperimentReport {
    std::vector<RunRecord> records;
    double violation_rate = 0.0;      // over all records
    double gamma0 = 0.0;              // known-model settings
    bool reversible_chain = false;
    bool zero_sample_shortcut = false; // threshold beyond the no-sample limit
    std::vector<std::string> flags;
    Cmp cmp;
    TabularPolicy policy;
};

/// Audits P(D(d_hat || d) > threshold) <= delta for the configured setting.
///
/// known_model: N from the gamma0-based count (tv_known_single, or the Renyi
/// pair run at both its lower and upper N), d_hat from the geometric-stopping
/// sampler. unknown_model: per-pair generative draws from the gamma-based
/// count (capped at per_pair_cap, cap recorded), d_hat as the occupancy on
/// the estimated model. Replicate r consumes rng stream r; parallel and
/// serial runs produce identical records.
ExperimentReport run_concentration_experiment(const ExperimentConfig& cfg);

/// Certificates over the (n, sigma2) grid; a row is marked failed instead of
/// aborting the sweep.
std::vector<GeometryCertificate> run_geometry_audit(const std::vector<int>& n_list,
                                                    const std::vector<double>& sigma2_list,
                                                    RngSeed seed,
                                                    OracleBudget budget = {});

} // namespace polco
