#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "polco/compress.hpp"
#include "polco/divergence.hpp"
#include "polco/geometry.hpp"
#include "polco/harness.hpp"
#include "polco/io.hpp"
#include "polco/mdp.hpp"
#include "polco/planner.hpp"
#include "polco/sampling.hpp"

namespace py = pybind11;
using namespace polco;

namespace {

std::vector<double> flatten3(const std::vector<std::vector<std::vector<double>>>& nested) {
    std::vector<double> flat;
    for (const auto& plane : nested)
        for (const auto& row : plane) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
}

std::vector<double> flatten2(const std::vector<std::vector<double>>& nested) {
    std::vector<double> flat;
    for (const auto& row : nested) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
}

Sign parse_sign(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    throw std::invalid_argument("sign must be '+' or '-'");
}

Metric parse_metric(const std::string& m) {
    if (m == "tv") return Metric::tv;
    if (m == "renyi2") return Metric::renyi2;
    throw std::invalid_argument("metric must be 'tv' or 'renyi2'");
}

SampleMode parse_mode(const std::string& m) {
    if (m == "geometric") return SampleMode::geometric;
    if (m == "stationary") return SampleMode::stationary;
    throw std::invalid_argument("mode must be 'geometric' or 'stationary'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Occupancy measures, divergence thresholds, sample-size formulas and "
              "simplex geometry for policy-space compression studies";

    py::class_<Cmp>(m, "Cmp")
        .def(py::init([](int num_states, int num_actions,
                         const std::vector<std::vector<std::vector<double>>>& transition,
                         const std::vector<double>& mu, double gamma,
                         const std::optional<std::vector<std::vector<double>>>& reward,
                         double r_max) {
                 Cmp c;
                 c.num_states = num_states;
                 c.num_actions = num_actions;
                 c.transition = flatten3(transition);
                 c.mu = mu;
                 c.gamma = gamma;
                 if (reward) c.reward = flatten2(*reward);
                 c.r_max = r_max;
                 auto problems = validate_cmp(c);
                 if (!problems.empty()) {
                     std::string msg = "invalid CMP:";
                     for (const auto& line : problems) msg += "\n  " + line;
                     throw std::invalid_argument(msg);
                 }
                 return c;
             }),
             py::arg("num_states"), py::arg("num_actions"), py::arg("transition"), py::arg("mu"),
             py::arg("gamma"), py::arg("reward") = std::nullopt, py::arg("r_max") = 1.0)
        .def_readonly("num_states", &Cmp::num_states)
        .def_readonly("num_actions", &Cmp::num_actions)
        .def_readonly("gamma", &Cmp::gamma)
        .def_readonly("mu", &Cmp::mu)
        .def_readonly("r_max", &Cmp::r_max)
        .def("p", [](const Cmp& c, int s, int a, int t) { return c.p(s, a, t); })
        .def("pair_index", &Cmp::pair_index)
        .def_property_readonly("num_pairs", &Cmp::num_pairs);

    py::class_<TabularPolicy>(m, "TabularPolicy")
        .def(py::init([](const std::vector<std::vector<double>>& pi) {
                 TabularPolicy p;
                 p.num_states = static_cast<int>(pi.size());
                 p.num_actions = pi.empty() ? 0 : static_cast<int>(pi[0].size());
                 p.pi = flatten2(pi);
                 return p;
             }),
             py::arg("pi"))
        .def_static("uniform", &TabularPolicy::uniform, py::arg("num_states"),
                    py::arg("num_actions"))
        .def_readonly("num_states", &TabularPolicy::num_states)
        .def_readonly("num_actions", &TabularPolicy::num_actions)
        .def("prob", [](const TabularPolicy& p, int s, int a) { return p.prob(s, a); });

    py::class_<OccupancyMeasure>(m, "OccupancyMeasure")
        .def_readonly("values", &OccupancyMeasure::values)
        .def_readonly("sample_count", &OccupancyMeasure::sample_count)
        .def_property_readonly("kind", [](const OccupancyMeasure& d) {
            return d.kind == OccupancyKind::exact ? "exact" : "empirical";
        });

    py::class_<SpectralInfo>(m, "SpectralInfo")
        .def_readonly("lambda2", &SpectralInfo::lambda2)
        .def_readonly("lambda2_modulus", &SpectralInfo::lambda2_modulus)
        .def_readonly("gamma0", &SpectralInfo::gamma0)
        .def_readonly("reversible", &SpectralInfo::reversible);

    m.def("validate_cmp", &validate_cmp, py::arg("cmp"));
    m.def("occupancy",
          [](const Cmp& c, const TabularPolicy& p) { return occupancy(c, p); },
          py::arg("cmp"), py::arg("policy"),
          "Exact discounted occupancy; returns (state-action measure, state marginal)");
    m.def("occupancy_oracle", &occupancy_oracle, py::arg("cmp"), py::arg("policy"),
          py::arg("tol"));
    m.def("truncation_length", &truncation_length, py::arg("gamma"), py::arg("tol"));
    m.def("spectral_gap",
          [](const Cmp& c, const TabularPolicy& p) { return spectral_gap(induced_chain(c, p)); },
          py::arg("cmp"), py::arg("policy"));
    m.def("exact_return", &exact_return, py::arg("cmp"), py::arg("policy"));
    m.def("mc_return",
          [](const std::vector<std::pair<int, int>>& samples, const Cmp& c) {
              return mc_return(samples, c);
          },
          py::arg("samples"), py::arg("cmp"));

    m.def("total_variation",
          [](const std::vector<double>& p, const std::vector<double>& q) {
              return total_variation(p, q);
          },
          py::arg("p"), py::arg("q"));
    m.def("renyi2",
          [](const std::vector<double>& p, const std::vector<double>& q) { return renyi2(p, q); },
          py::arg("p"), py::arg("q"));

    py::class_<WeightDiagnostics>(m, "WeightDiagnostics")
        .def_readonly("weights", &WeightDiagnostics::weights)
        .def_readonly("exact_variance", &WeightDiagnostics::exact_variance)
        .def_readonly("renyi2", &WeightDiagnostics::renyi2)
        .def_readonly("is_variance_bound", &WeightDiagnostics::is_variance_bound);
    m.def("weight_diagnostics",
          [](const std::vector<double>& target, const std::vector<double>& behavior, long long n,
             double r_max, double gamma) {
              OccupancyMeasure t, b;
              t.values = target;
              b.values = behavior;
              return weight_diagnostics(t, b, n, r_max, gamma);
          },
          py::arg("d_target"), py::arg("d_behavior"), py::arg("n"), py::arg("r_max"),
          py::arg("gamma"));

    py::class_<OccupancySample>(m, "OccupancySample")
        .def_readonly("pairs", &OccupancySample::pairs)
        .def_readonly("empirical", &OccupancySample::empirical)
        .def_readonly("env_steps", &OccupancySample::env_steps);
    m.def("sample_occupancy",
          [](const Cmp& c, const TabularPolicy& p, long long n, std::uint64_t seed,
             std::uint64_t stream, const std::string& mode) {
              return sample_occupancy(c, p, n, {seed, stream}, parse_mode(mode));
          },
          py::arg("cmp"), py::arg("policy"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0,
          py::arg("mode") = "geometric");

    py::class_<EstimatedModel>(m, "EstimatedModel")
        .def_readonly("p_hat", &EstimatedModel::p_hat)
        .def_readonly("counts_per_pair", &EstimatedModel::counts_per_pair);
    m.def("estimate_transition_model",
          [](const Cmp& c, long long n_per_pair, std::uint64_t seed, std::uint64_t stream) {
              return estimate_transition_model(c, n_per_pair, {seed, stream});
          },
          py::arg("cmp"), py::arg("n_per_pair"), py::arg("seed"), py::arg("stream") = 0);
    m.def("occupancy_on_estimate", &occupancy_on_estimate, py::arg("model"), py::arg("cmp"),
          py::arg("policy"));
    m.def("simulation_gap_bound", &simulation_gap_bound, py::arg("cmp"), py::arg("model"),
          py::arg("policy"));

    py::class_<SampleBudget>(m, "SampleBudget")
        .def_property_readonly("formula_id",
                               [](const SampleBudget& b) { return formula_name(b.formula_id); })
        .def_readonly("inputs", &SampleBudget::inputs)
        .def_readonly("n_real", &SampleBudget::n_real)
        .def_readonly("n_int", &SampleBudget::n_int)
        .def_readonly("flags", &SampleBudget::flags);
    py::class_<BudgetPair>(m, "BudgetPair")
        .def_readonly("lower", &BudgetPair::lower)
        .def_readonly("upper", &BudgetPair::upper);
    py::class_<RenyiUnknownBudgets>(m, "RenyiUnknownBudgets")
        .def_readonly("lower", &RenyiUnknownBudgets::lower)
        .def_readonly("upper", &RenyiUnknownBudgets::upper)
        .def_readonly("rederived_lower", &RenyiUnknownBudgets::rederived_lower)
        .def_readonly("rederived_upper", &RenyiUnknownBudgets::rederived_upper);
    py::class_<ThresholdReport>(m, "ThresholdReport")
        .def_readonly("meaningful", &ThresholdReport::meaningful)
        .def_readonly("printed_limit", &ThresholdReport::printed_limit)
        .def_readonly("oracle_limit", &ThresholdReport::oracle_limit);

    m.def("weissman_epsilon", &weissman_epsilon, py::arg("a"), py::arg("n"), py::arg("delta"));
    m.def("weissman_budget", &weissman_budget, py::arg("a"), py::arg("eps"), py::arg("delta"));
    m.def("chain_concentration_bound", &chain_concentration_bound, py::arg("gamma0"),
          py::arg("eps"), py::arg("n"));
    m.def("chain_concentration_budget", &chain_concentration_budget, py::arg("gamma0"),
          py::arg("eps"), py::arg("delta"));
    m.def("tv_known_single", &tv_known_single, py::arg("gamma0"), py::arg("sigma_tv"),
          py::arg("delta"));
    m.def("tv_known_K", &tv_known_K, py::arg("gamma0"), py::arg("sigma_tv"), py::arg("delta"),
          py::arg("k"));
    m.def("tv_unknown",
          [](double gamma, int s_count, int a_count, double sigma_tv, double delta,
             const std::string& scope) {
              return tv_unknown(gamma, s_count, a_count, sigma_tv, delta,
                                scope == "total" ? UnknownScope::total : UnknownScope::per_pair);
          },
          py::arg("gamma"), py::arg("s_count"), py::arg("a_count"), py::arg("sigma_tv"),
          py::arg("delta"), py::arg("scope") = "per_pair");
    m.def("renyi_known_bounds", &renyi_known_bounds, py::arg("gamma0"), py::arg("sigma2"),
          py::arg("n_pairs"), py::arg("k"), py::arg("delta"));
    m.def("renyi_unknown_bounds", &renyi_unknown_bounds, py::arg("gamma"), py::arg("s_count"),
          py::arg("a_count"), py::arg("sigma2"), py::arg("delta"));
    m.def("threshold_meaningful_renyi", &threshold_meaningful_renyi, py::arg("n_pairs"),
          py::arg("sigma2"));
    m.def("threshold_meaningful_tv", &threshold_meaningful_tv, py::arg("n_pairs"),
          py::arg("sigma_tv"));

    py::class_<SimplexPoint>(m, "SimplexPoint").def_readonly("values", &SimplexPoint::values);
    py::class_<ClosedFormTv>(m, "ClosedFormTv")
        .def_readonly("max_tv", &ClosedFormTv::max_tv)
        .def_readonly("loosest_tv", &ClosedFormTv::loosest_tv)
        .def_readonly("min_tv", &ClosedFormTv::min_tv);
    py::class_<TvExtrema>(m, "TvExtrema")
        .def_readonly("tv_min", &TvExtrema::tv_min)
        .def_readonly("tv_max", &TvExtrema::tv_max)
        .def_readonly("argmin", &TvExtrema::argmin)
        .def_readonly("argmax", &TvExtrema::argmax);
    py::class_<GeometryCertificate>(m, "GeometryCertificate")
        .def_readonly("n", &GeometryCertificate::n)
        .def_readonly("sigma2", &GeometryCertificate::sigma2)
        .def_readonly("closed_form", &GeometryCertificate::closed_form)
        .def_readonly("family_residual_max", &GeometryCertificate::family_residual_max)
        .def_readonly("family_notes", &GeometryCertificate::family_notes)
        .def_readonly("oracle_max_uniform", &GeometryCertificate::oracle_max_uniform)
        .def_readonly("oracle_min_uniform", &GeometryCertificate::oracle_min_uniform)
        .def_readonly("oracle_max_vrep", &GeometryCertificate::oracle_max_vrep)
        .def_readonly("oracle_min_vrep", &GeometryCertificate::oracle_min_vrep)
        .def_readonly("oracle_exceeds_max_tv", &GeometryCertificate::oracle_exceeds_max_tv)
        .def_readonly("oracle_confirms_min_tv", &GeometryCertificate::oracle_confirms_min_tv)
        .def_readonly("failed", &GeometryCertificate::failed);

    m.def("make_uniform", &make_uniform, py::arg("n"));
    m.def("make_vertex", &make_vertex, py::arg("n"), py::arg("i"));
    m.def("make_random",
          [](int n, std::uint64_t seed, std::uint64_t stream) {
              return make_random(n, {seed, stream});
          },
          py::arg("n"), py::arg("seed"), py::arg("stream") = 0);
    m.def("max_tv_family",
          [](int n, double sigma2, const std::string& sign) {
              return max_tv_family(n, sigma2, parse_sign(sign));
          },
          py::arg("n"), py::arg("sigma2"), py::arg("sign") = "+");
    m.def("vertex_rep", &vertex_rep, py::arg("n"), py::arg("sigma2"));
    m.def("loosest_tv_family",
          [](int n, double sigma2, const std::string& branch) {
              return loosest_tv_family(n, sigma2,
                                   branch == "interior" ? LoosestBranch::interior
                                                        : LoosestBranch::vertex);
          },
          py::arg("n"), py::arg("sigma2"), py::arg("branch") = "vertex");
    m.def("min_tv_family",
          [](int n, double sigma2, const std::string& sign) {
              return min_tv_family(n, sigma2, parse_sign(sign));
          },
          py::arg("n"), py::arg("sigma2"), py::arg("sign") = "+");
    m.def("closed_form_tv", &closed_form_tv, py::arg("n"), py::arg("sigma2"));
    m.def("tv_extrema_oracle",
          [](const SimplexPoint& rep, double sigma2, int restarts, int iterations,
             std::uint64_t seed, std::uint64_t stream) {
              return tv_extrema_oracle(rep, sigma2, {restarts, iterations}, {seed, stream});
          },
          py::arg("rep"), py::arg("sigma2"), py::arg("restarts") = 2000,
          py::arg("iterations") = 200, py::arg("seed") = 0, py::arg("stream") = 0);
    m.def("certificate",
          [](int n, double sigma2, std::uint64_t seed) { return certificate(n, sigma2, {seed, 0}); },
          py::arg("n"), py::arg("sigma2"), py::arg("seed") = 0);

    py::class_<CandidateSet>(m, "CandidateSet")
        .def_static("random",
                    [](const Cmp& c, int count, std::uint64_t seed) {
                        return CandidateSet::random(c, count, {seed, 0});
                    },
                    py::arg("cmp"), py::arg("count"), py::arg("seed") = 0)
        .def_static("enumerate_deterministic", &CandidateSet::enumerate_deterministic,
                    py::arg("cmp"), py::arg("max_count") = 4096)
        .def_static("from_policies", &CandidateSet::from_policies, py::arg("cmp"),
                    py::arg("policies"))
        .def_property_readonly("size", &CandidateSet::size)
        .def_readonly("occupancies", &CandidateSet::occupancies);
    py::class_<CompressionResult>(m, "CompressionResult")
        .def_readonly("representative_indices", &CompressionResult::representative_indices)
        .def_readonly("achieved_radius", &CompressionResult::achieved_radius)
        .def_readonly("sigma", &CompressionResult::sigma)
        .def_property_readonly("metric",
                               [](const CompressionResult& r) { return metric_name(r.metric); });
    py::class_<CoverCheck>(m, "CoverCheck")
        .def_readonly("ok", &CoverCheck::ok)
        .def_readonly("worst_candidate", &CoverCheck::worst_candidate)
        .def_readonly("worst_value", &CoverCheck::worst_value);
    m.def("divergence_matrix",
          [](const CandidateSet& cs, const std::string& metric) {
              return divergence_matrix(cs, parse_metric(metric));
          },
          py::arg("candidates"), py::arg("metric") = "tv");
    m.def("greedy_cover",
          [](const CandidateSet& cs, double sigma, const std::string& metric) {
              return greedy_cover(cs, sigma, parse_metric(metric));
          },
          py::arg("candidates"), py::arg("sigma"), py::arg("metric") = "tv");
    m.def("verify_cover", &verify_cover, py::arg("candidates"), py::arg("result"));

    m.def("generate_random_mdp",
          [](int num_states, int num_actions, int branching, std::uint64_t seed, bool reversible,
             double gamma, bool with_reward) {
              GeneratorSpec spec{num_states, num_actions, branching, seed, reversible, gamma,
                                 with_reward};
              return generate_random_mdp(spec);
          },
          py::arg("num_states"), py::arg("num_actions"), py::arg("branching") = 2,
          py::arg("seed") = 0, py::arg("reversible") = false, py::arg("gamma") = 0.9,
          py::arg("with_reward") = true);

    m.def("load_cmp", &load_cmp, py::arg("path"));
    m.def("save_cmp", &save_cmp, py::arg("cmp"), py::arg("path"));
    m.def("load_policy", &load_policy, py::arg("path"), py::arg("num_states"),
          py::arg("num_actions"));
    m.def("save_policy", &save_policy, py::arg("policy"), py::arg("path"));
}
