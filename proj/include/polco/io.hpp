#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "polco/compress.hpp"
#include "polco/geometry.hpp"
#include "polco/harness.hpp"
#include "polco/mdp.hpp"
#include "polco/sampling.hpp"

namespace polco {

using ordered_json = nlohmann::ordered_json;

// MDP files carry {"num_states","num_actions","gamma","mu","P","reward"?,
// "r_max"?} with P indexed [s][a][s']; policy files carry {"pi"} indexed
// [s][a]. Written files record the indexing convention in an "indexing" key.

Cmp cmp_from_json(const ordered_json& j);
ordered_json cmp_to_json(const Cmp& c);
Cmp load_cmp(const std::string& path);
void save_cmp(const Cmp& c, const std::string& path);

TabularPolicy policy_from_json(const ordered_json& j, int num_states, int num_actions);
ordered_json policy_to_json(const TabularPolicy& p);
TabularPolicy load_policy(const std::string& path, int num_states, int num_actions);
void save_policy(const TabularPolicy& p, const std::string& path);

ExperimentConfig experiment_config_from_json(const ordered_json& j);
ExperimentConfig load_experiment_config(const std::string& path);

/// Shortest-round-trip decimal rendering (std::to_chars); locale-free and
/// byte-stable, used for every CSV field.
std::string format_double(double v);

/// RunRecord CSV: replicate,n_used,formula_id,divergence,threshold,violated,env_steps,wall_ms
std::string run_records_csv(const std::vector<RunRecord>& records);

/// Certificate CSV: one row per (n, sigma2).
std::string certificates_csv(const std::vector<GeometryCertificate>& certs);

/// Sample batch CSV: replicate,step,s,a
std::string samples_csv(const std::vector<std::pair<int, int>>& samples, int replicate);

ordered_json budget_to_json(const SampleBudget& b);
ordered_json experiment_summary_json(const ExperimentConfig& cfg, const ExperimentReport& report);
ordered_json compression_result_to_json(const CompressionResult& r, const CoverCheck& check);

void write_text_file(const std::string& path, const std::string& content);

} // namespace polco
