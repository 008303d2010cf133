#include "polco/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace polco {

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
}

void require_gamma0(double gamma0) {
    if (gamma0 == 0.0) throw std::invalid_argument("gamma0 = 0: chain does not mix");
    if (!(gamma0 > 0.0 && gamma0 <= 1.0)) throw std::invalid_argument("gamma0 must be in (0,1]");
}

SampleBudget finish(FormulaId id, std::map<std::string, double> inputs, double n_real,
                    std::vector<std::string> flags = {}) {
    if (!(n_real > 0.0)) throw std::invalid_argument("budget evaluated to a nonpositive count");
    SampleBudget b;
    b.formula_id = id;
    b.inputs = std::move(inputs);
    b.n_real = n_real;
    b.n_int = static_cast<long long>(std::ceil(n_real));
    b.flags = std::move(flags);
    return b;
}

} // namespace

const char* formula_name(FormulaId id) {
    switch (id) {
        case FormulaId::weissman: return "weissman";
        case FormulaId::chain_concentration: return "chain_concentration";
        case FormulaId::tv_known_single: return "tv_known_single";
        case FormulaId::tv_known_K: return "tv_known_K";
        case FormulaId::tv_unknown_per_pair: return "tv_unknown_per_pair";
        case FormulaId::tv_unknown_total: return "tv_unknown_total";
        case FormulaId::renyi_known_lower: return "renyi_known_lower";
        case FormulaId::renyi_known_upper: return "renyi_known_upper";
        case FormulaId::renyi_unknown_lower: return "renyi_unknown_lower";
        case FormulaId::renyi_unknown_upper: return "renyi_unknown_upper";
    }
    return "unknown";
}

double weissman_epsilon(int a, long long n, double delta) {
    require_delta(delta);
    if (a < 2) throw std::invalid_argument("weissman: alphabet size a must be >= 2");
    if (n < 1) throw std::invalid_argument("weissman: N must be >= 1");
    return std::sqrt(2.0 * a * std::log(2.0 / delta) / static_cast<double>(n));
}

SampleBudget weissman_budget(int a, double eps, double delta) {
    require_delta(delta);
    if (a < 2) throw std::invalid_argument("weissman: alphabet size a must be >= 2");
    if (!(eps > 0.0)) throw std::invalid_argument("weissman: eps must be positive");
    const double n = 2.0 * a * std::log(2.0 / delta) / (eps * eps);
    return finish(FormulaId::weissman,
                  {{"a", static_cast<double>(a)}, {"eps", eps}, {"delta", delta}}, n);
}

double chain_concentration_bound(double gamma0, double eps, long long n) {
    require_gamma0(gamma0);
    if (eps < 0.0) throw std::invalid_argument("chain_concentration: eps must be >= 0");
    const double bound =
        2.0 * std::exp(-gamma0 / (2.0 * (2.0 - gamma0)) * eps * eps * static_cast<double>(n));
    return std::min(bound, 1.0); // vacuous tails clamp to 1
}

SampleBudget chain_concentration_budget(double gamma0, double eps, double delta) {
    require_gamma0(gamma0);
    require_delta(delta);
    if (!(eps > 0.0)) throw std::invalid_argument("chain_concentration: eps must be positive");
    const double n = 2.0 * (2.0 - gamma0) * std::log(2.0 / delta) / (gamma0 * eps * eps);
    return finish(FormulaId::chain_concentration,
                  {{"gamma0", gamma0}, {"eps", eps}, {"delta", delta}}, n);
}

SampleBudget tv_known_single(double gamma0, double sigma_tv, double delta) {
    require_gamma0(gamma0);
    require_delta(delta);
    if (!(sigma_tv > 0.0)) throw std::invalid_argument("tv_known_single: sigma_tv must be positive");
    const double n = 8.0 * (2.0 - gamma0) / (gamma0 * sigma_tv * sigma_tv) * std::log(2.0 / delta);
    return finish(FormulaId::tv_known_single,
                  {{"gamma0", gamma0}, {"sigma_tv", sigma_tv}, {"delta", delta}}, n);
}

SampleBudget tv_known_K(double gamma0, double sigma_tv, double delta, int k) {
    require_gamma0(gamma0);
    require_delta(delta);
    if (!(sigma_tv > 0.0)) throw std::invalid_argument("tv_known_K: sigma_tv must be positive");
    if (k < 1) throw std::invalid_argument("tv_known_K: K must be >= 1");
    const double n =
        2.0 * k * (2.0 - gamma0) / (gamma0 * sigma_tv * sigma_tv) * std::log(2.0 / delta);
    std::vector<std::string> flags;
    if (k == 1) {
        flags.push_back("k1_inconsistency: at K=1 this is 4x below the single-policy factor 8");
    }
    if (k == 4) {
        flags.push_back("k4_coincidence: 2K=8 matches the single-policy factor");
    }
    return finish(FormulaId::tv_known_K,
                  {{"gamma0", gamma0}, {"sigma_tv", sigma_tv}, {"delta", delta},
                   {"K", static_cast<double>(k)}},
                  n, std::move(flags));
}

SampleBudget tv_unknown(double gamma, int s_count, int a_count, double sigma_tv,
                        double delta, UnknownScope scope) {
    require_delta(delta);
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("tv_unknown: gamma in (0,1)");
    if (!(sigma_tv > 0.0)) throw std::invalid_argument("tv_unknown: sigma_tv must be positive");
    if (s_count < 1 || a_count < 1) throw std::invalid_argument("tv_unknown: sizes must be >= 1");
    const double per_pair = 8.0 * gamma * gamma * s_count /
                            ((1.0 - gamma) * (1.0 - gamma) * sigma_tv * sigma_tv) *
                            std::log(2.0 / delta);
    const double n = scope == UnknownScope::per_pair
                         ? per_pair
                         : per_pair * static_cast<double>(s_count) * a_count;
    std::vector<std::string> flags;
    const auto tv_report = threshold_meaningful_tv(s_count * a_count, sigma_tv);
    if (!tv_report.meaningful) {
        flags.push_back("threshold_not_meaningful: sigma_tv at or beyond the no-sample limit");
    }
    return finish(scope == UnknownScope::per_pair ? FormulaId::tv_unknown_per_pair
                                                  : FormulaId::tv_unknown_total,
                  {{"gamma", gamma}, {"S", static_cast<double>(s_count)},
                   {"A", static_cast<double>(a_count)}, {"sigma_tv", sigma_tv}, {"delta", delta}},
                  n, std::move(flags));
}

BudgetPair renyi_known_bounds(double gamma0, double sigma2, int n_pairs, int k, double delta) {
    require_gamma0(gamma0);
    require_delta(delta);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("renyi_known_bounds: sigma2 must exceed 1");
    if (n_pairs < 3) throw std::invalid_argument("renyi_known_bounds: |SA| must be >= 3");
    if (k < 1) throw std::invalid_argument("renyi_known_bounds: K must be >= 1");

    const double sa = n_pairs;
    const double log_term = std::log(2.0 / delta);
    const double lower =
        k * (2.0 - gamma0) * sa * sa / (2.0 * gamma0 * (sigma2 - 1.0) * (sa - 1.0)) * log_term;
    const double upper = k * (2.0 - gamma0) * sigma2 * (sa - 1.0) * (sa - 1.0) /
                         (2.0 * gamma0 * (sigma2 - 1.0) * (sigma2 - 1.0) * (sa - 2.0)) * log_term;

    std::vector<std::string> flags;
    if (!threshold_meaningful_renyi(n_pairs, sigma2).meaningful) {
        flags.push_back("threshold_not_meaningful: sigma2 at or beyond |SA|");
    }
    if (lower > upper) {
        flags.push_back("bound_order_violated: lower exceeds upper");
    }
    std::map<std::string, double> inputs{{"gamma0", gamma0}, {"sigma2", sigma2},
                                         {"SA", sa}, {"K", static_cast<double>(k)},
                                         {"delta", delta}};
    BudgetPair pair{finish(FormulaId::renyi_known_lower, inputs, lower, flags),
                    finish(FormulaId::renyi_known_upper, inputs, upper, flags)};
    return pair;
}

RenyiUnknownBudgets renyi_unknown_bounds(double gamma, int s_count, int a_count,
                                         double sigma2, double delta) {
    require_delta(delta);
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("renyi_unknown_bounds: gamma in (0,1)");
    if (!(sigma2 > 1.0)) throw std::invalid_argument("renyi_unknown_bounds: sigma2 must exceed 1");
    if (s_count < 3) throw std::invalid_argument("renyi_unknown_bounds: |S| must be >= 3");
    if (a_count < 1) throw std::invalid_argument("renyi_unknown_bounds: |A| must be >= 1");

    const double s = s_count;
    const double a = a_count;
    const double log_term = std::log(2.0 / delta);
    const double one_minus = (1.0 - gamma) * (1.0 - gamma);
    // printed forms, |S|-based
    const double lower =
        gamma * gamma * s * s * s * s * a / (2.0 * one_minus * (sigma2 - 1.0) * (s - 1.0)) * log_term;
    const double upper = gamma * gamma * sigma2 * (s - 1.0) * (s - 1.0) * s * s * a /
                         (2.0 * one_minus * (sigma2 - 1.0) * (sigma2 - 1.0) * (s - 2.0)) * log_term;

    std::map<std::string, double> inputs{{"gamma", gamma}, {"S", s}, {"A", a},
                                         {"sigma2", sigma2}, {"delta", delta}};
    std::vector<std::string> flags;
    if (!threshold_meaningful_renyi(s_count * a_count, sigma2).meaningful) {
        flags.push_back("threshold_not_meaningful: sigma2 at or beyond |SA|");
    }

    RenyiUnknownBudgets out;
    out.lower = finish(FormulaId::renyi_unknown_lower, inputs, lower, flags);
    out.upper = finish(FormulaId::renyi_unknown_upper, inputs, upper, flags);

    // substitution variants: TV<->Renyi conversions applied to the
    // unknown-model TV total, with n = |SA| everywhere
    const double n_pairs = s * a;
    const double sigma_tv_max = std::sqrt((n_pairs - 1.0) * (sigma2 - 1.0)) / n_pairs;
    const double sigma_tv_min =
        (sigma2 - 1.0) * std::sqrt(n_pairs - 2.0) / (std::sqrt(sigma2) * (n_pairs - 1.0));
    out.rederived_lower = tv_unknown(gamma, s_count, a_count, sigma_tv_max, delta, UnknownScope::total);
    out.rederived_lower.flags.push_back("rederived_from_renyi: sigma_tv = max_sigma_tv(|SA|, sigma2)");
    out.rederived_upper = tv_unknown(gamma, s_count, a_count, sigma_tv_min, delta, UnknownScope::total);
    out.rederived_upper.flags.push_back("rederived_from_renyi: sigma_tv = min_sigma_tv(|SA|, sigma2)");
    return out;
}

ThresholdReport threshold_meaningful_renyi(int n_pairs, double sigma2) {
    if (n_pairs < 2) throw std::invalid_argument("threshold_meaningful: need n_pairs >= 2");
    ThresholdReport r;
    r.printed_limit = static_cast<double>(n_pairs); // max of D2(.||uniform), attained at vertices
    r.oracle_limit = static_cast<double>(n_pairs);
    r.meaningful = sigma2 < r.printed_limit;
    return r;
}

ThresholdReport threshold_meaningful_tv(int n_pairs, double sigma_tv) {
    if (n_pairs < 2) throw std::invalid_argument("threshold_meaningful: need n_pairs >= 2");
    ThresholdReport r;
    const double n = n_pairs;
    r.printed_limit = std::sqrt((n - 1.0) / n); // Euclidean uniform-to-vertex distance
    r.oracle_limit = (n - 1.0) / n;             // true max TV from uniform
    r.meaningful = sigma_tv < r.printed_limit;
    return r;
}

} // namespace polco
