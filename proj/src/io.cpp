#include "polco/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polco {

namespace {

constexpr const char* kIndexingNote = "P[s][a][s_next]; flat pair index = s*num_actions + a";

std::vector<double> number_array(const ordered_json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(x.get<double>());
    return out;
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return j;
}

} // namespace

Cmp cmp_from_json(const ordered_json& j) {
    Cmp c;
    c.num_states = j.at("num_states").get<int>();
    c.num_actions = j.at("num_actions").get<int>();
    c.gamma = j.at("gamma").get<double>();
    c.mu = number_array(j.at("mu"));

    const auto& p = j.at("P");
    if (static_cast<int>(p.size()) != c.num_states) {
        throw std::runtime_error("MDP file: P has wrong first dimension");
    }
    c.transition.reserve(static_cast<std::size_t>(c.num_states) * c.num_actions * c.num_states);
    for (const auto& per_state : p) {
        if (static_cast<int>(per_state.size()) != c.num_actions) {
            throw std::runtime_error("MDP file: P has wrong action dimension");
        }
        for (const auto& row : per_state) {
            if (static_cast<int>(row.size()) != c.num_states) {
                throw std::runtime_error("MDP file: P has wrong successor dimension");
            }
            for (const auto& x : row) c.transition.push_back(x.get<double>());
        }
    }
    if (j.contains("reward") && !j.at("reward").is_null()) {
        std::vector<double> reward;
        for (const auto& row : j.at("reward")) {
            for (const auto& x : row) reward.push_back(x.get<double>());
        }
        if (reward.size() != static_cast<std::size_t>(c.num_states) * c.num_actions) {
            throw std::runtime_error("MDP file: reward table has wrong shape");
        }
        c.reward = std::move(reward);
        c.r_max = j.value("r_max", 1.0);
    }
    auto problems = validate_cmp(c);
    if (!problems.empty()) {
        std::string msg = "MDP file failed validation:";
        for (const auto& line : problems) msg += "\n  " + line;
        throw std::runtime_error(msg);
    }
    return c;
}

ordered_json cmp_to_json(const Cmp& c) {
    ordered_json j;
    j["indexing"] = kIndexingNote;
    j["num_states"] = c.num_states;
    j["num_actions"] = c.num_actions;
    j["gamma"] = c.gamma;
    j["mu"] = c.mu;
    ordered_json p = ordered_json::array();
    for (int s = 0; s < c.num_states; ++s) {
        ordered_json per_state = ordered_json::array();
        for (int a = 0; a < c.num_actions; ++a) {
            ordered_json row = ordered_json::array();
            for (int t = 0; t < c.num_states; ++t) row.push_back(c.p(s, a, t));
            per_state.push_back(std::move(row));
        }
        p.push_back(std::move(per_state));
    }
    j["P"] = std::move(p);
    if (c.reward) {
        ordered_json reward = ordered_json::array();
        for (int s = 0; s < c.num_states; ++s) {
            ordered_json row = ordered_json::array();
            for (int a = 0; a < c.num_actions; ++a) row.push_back(c.r(s, a));
            reward.push_back(std::move(row));
        }
        j["reward"] = std::move(reward);
        j["r_max"] = c.r_max;
    }
    return j;
}

Cmp load_cmp(const std::string& path) { return cmp_from_json(read_json_file(path)); }

void save_cmp(const Cmp& c, const std::string& path) {
    write_text_file(path, cmp_to_json(c).dump(2) + "\n");
}

TabularPolicy policy_from_json(const ordered_json& j, int num_states, int num_actions) {
    TabularPolicy p;
    p.num_states = num_states;
    p.num_actions = num_actions;
    const auto& pi = j.at("pi");
    if (static_cast<int>(pi.size()) != num_states) {
        throw std::runtime_error("policy file: pi has wrong row count");
    }
    for (const auto& row : pi) {
        if (static_cast<int>(row.size()) != num_actions) {
            throw std::runtime_error("policy file: pi has wrong column count");
        }
        for (const auto& x : row) p.pi.push_back(x.get<double>());
    }
    return p;
}

ordered_json policy_to_json(const TabularPolicy& p) {
    ordered_json j;
    j["indexing"] = "pi[s][a]";
    ordered_json pi = ordered_json::array();
    for (int s = 0; s < p.num_states; ++s) {
        ordered_json row = ordered_json::array();
        for (int a = 0; a < p.num_actions; ++a) row.push_back(p.prob(s, a));
        pi.push_back(std::move(row));
    }
    j["pi"] = std::move(pi);
    return j;
}

TabularPolicy load_policy(const std::string& path, int num_states, int num_actions) {
    return policy_from_json(read_json_file(path), num_states, num_actions);
}

void save_policy(const TabularPolicy& p, const std::string& path) {
    write_text_file(path, policy_to_json(p).dump(2) + "\n");
}

ExperimentConfig experiment_config_from_json(const ordered_json& j) {
    ExperimentConfig cfg;
    if (j.contains("mdp")) {
        const auto& mdp = j.at("mdp");
        if (mdp.contains("file")) {
            cfg.mdp_file = mdp.at("file").get<std::string>();
        } else if (mdp.contains("generator")) {
            const auto& g = mdp.at("generator");
            cfg.generator.num_states = g.value("num_states", cfg.generator.num_states);
            cfg.generator.num_actions = g.value("num_actions", cfg.generator.num_actions);
            cfg.generator.branching = g.value("branching", cfg.generator.branching);
            cfg.generator.seed = g.value("seed", cfg.generator.seed);
            cfg.generator.reversible = g.value("reversible", cfg.generator.reversible);
            cfg.generator.gamma = g.value("gamma", cfg.generator.gamma);
            cfg.generator.with_reward = g.value("with_reward", cfg.generator.with_reward);
        }
    }
    if (j.contains("policy")) {
        const auto& pol = j.at("policy");
        if (pol.is_string()) {
            if (pol.get<std::string>() != "uniform") {
                throw std::runtime_error("config: policy string must be \"uniform\"");
            }
        } else if (pol.contains("file")) {
            cfg.policy_file = pol.at("file").get<std::string>();
        } else if (pol.contains("random_seed")) {
            cfg.random_policy_seed = pol.at("random_seed").get<std::uint64_t>();
        }
    }
    if (j.contains("setting")) {
        const std::string s = j.at("setting").get<std::string>();
        if (s == "known_model") {
            cfg.setting = Setting::known_model;
        } else if (s == "unknown_model") {
            cfg.setting = Setting::unknown_model;
        } else {
            throw std::runtime_error("config: unknown setting " + s);
        }
    }
    if (j.contains("metric")) {
        const std::string m = j.at("metric").get<std::string>();
        if (m == "tv") {
            cfg.metric = Metric::tv;
        } else if (m == "renyi2") {
            cfg.metric = Metric::renyi2;
        } else {
            throw std::runtime_error("config: unknown metric " + m);
        }
    }
    cfg.threshold = j.value("threshold", cfg.threshold);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.per_pair_cap = j.value("per_pair_cap", cfg.per_pair_cap);
    cfg.record_wall_time = j.value("record_wall_time", cfg.record_wall_time);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return experiment_config_from_json(read_json_file(path));
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

std::string run_records_csv(const std::vector<RunRecord>& records) {
    std::string out = "replicate,n_used,formula_id,divergence,threshold,violated,env_steps,wall_ms\n";
    for (const auto& r : records) {
        out += std::to_string(r.replicate);
        out += ',';
        out += std::to_string(r.n_used);
        out += ',';
        out += formula_name(r.formula_id);
        out += ',';
        out += format_double(r.divergence);
        out += ',';
        out += format_double(r.threshold);
        out += ',';
        out += r.violated ? '1' : '0';
        out += ',';
        out += std::to_string(r.env_steps);
        out += ',';
        out += std::to_string(r.wall_ms);
        out += '\n';
    }
    return out;
}

std::string certificates_csv(const std::vector<GeometryCertificate>& certs) {
    std::string out =
        "n,sigma2,max_tv,loosest_tv,min_tv,oracle_max,oracle_min,"
        "family_residual_max,oracle_exceeds_max_tv,status\n";
    for (const auto& c : certs) {
        out += std::to_string(c.n);
        out += ',';
        out += format_double(c.sigma2);
        out += ',';
        out += format_double(c.closed_form.max_tv);
        out += ',';
        out += format_double(c.closed_form.loosest_tv);
        out += ',';
        out += format_double(c.closed_form.min_tv);
        out += ',';
        out += format_double(c.oracle_max_uniform);
        out += ',';
        out += format_double(c.oracle_min_vrep);
        out += ',';
        out += format_double(c.family_residual_max);
        out += ',';
        out += c.oracle_exceeds_max_tv ? '1' : '0';
        out += ',';
        out += c.failed ? "failed" : "ok";
        out += '\n';
    }
    return out;
}

std::string samples_csv(const std::vector<std::pair<int, int>>& samples, int replicate) {
    std::string out = "replicate,step,s,a\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out += std::to_string(replicate);
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += std::to_string(samples[i].first);
        out += ',';
        out += std::to_string(samples[i].second);
        out += '\n';
    }
    return out;
}

ordered_json budget_to_json(const SampleBudget& b) {
    ordered_json j;
    j["formula_id"] = formula_name(b.formula_id);
    j["inputs"] = ordered_json::object();
    for (const auto& [k, v] : b.inputs) j["inputs"][k] = v;
    j["n_real"] = b.n_real;
    j["n_int"] = b.n_int;
    j["flags"] = b.flags;
    return j;
}

ordered_json experiment_summary_json(const ExperimentConfig& cfg, const ExperimentReport& report) {
    ordered_json j;
    if (cfg.mdp_file) {
        j["mdp"] = *cfg.mdp_file;
    } else {
        j["mdp"] = {{"generator",
                     {{"num_states", cfg.generator.num_states},
                      {"num_actions", cfg.generator.num_actions},
                      {"branching", cfg.generator.branching},
                      {"seed", cfg.generator.seed},
                      {"reversible", cfg.generator.reversible},
                      {"gamma", cfg.generator.gamma}}}};
    }
    if (cfg.policy_file) {
        j["policy"] = *cfg.policy_file;
    } else if (cfg.random_policy_seed) {
        j["policy"] = {{"random_seed", *cfg.random_policy_seed}};
    } else {
        j["policy"] = "uniform";
    }
    j["setting"] = cfg.setting == Setting::known_model ? "known_model" : "unknown_model";
    j["metric"] = metric_name(cfg.metric);
    j["threshold"] = cfg.threshold;
    j["delta"] = cfg.delta;
    j["replicates"] = cfg.replicates;
    j["master_seed"] = cfg.master_seed;
    j["records"] = report.records.size();
    j["violation_rate"] = report.violation_rate;
    j["bound_satisfied"] = report.violation_rate <= cfg.delta;
    if (cfg.setting == Setting::known_model) {
        j["gamma0"] = report.gamma0;
        j["reversible_chain"] = report.reversible_chain;
    }
    j["zero_sample_shortcut"] = report.zero_sample_shortcut;
    j["flags"] = report.flags;
    ordered_json used = ordered_json::array();
    std::vector<FormulaId> seen;
    for (const auto& rec : report.records) {
        if (std::find(seen.begin(), seen.end(), rec.formula_id) != seen.end()) continue;
        seen.push_back(rec.formula_id);
        ordered_json v;
        v["formula_id"] = formula_name(rec.formula_id);
        v["n_used"] = rec.n_used;
        used.push_back(std::move(v));
    }
    j["budgets"] = std::move(used);
    return j;
}

ordered_json compression_result_to_json(const CompressionResult& r, const CoverCheck& check) {
    ordered_json j;
    j["metric"] = metric_name(r.metric);
    j["sigma"] = r.sigma;
    j["k"] = r.representative_indices.size();
    j["representative_indices"] = r.representative_indices;
    j["achieved_radius"] = r.achieved_radius;
    j["verified"] = check.ok;
    j["worst_candidate"] = check.worst_candidate;
    j["worst_value"] = check.worst_value;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace polco
