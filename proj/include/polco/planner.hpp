#pragma once

#include <map>
#include <string>
#include <vector>

namespace polco {

enum class FormulaId {
    weissman,
    chain_concentration,
    tv_known_single,
    tv_known_K,
    tv_unknown_per_pair,
    tv_unknown_total,
    renyi_known_lower,
    renyi_known_upper,
    renyi_unknown_lower,
    renyi_unknown_upper,
};

const char* formula_name(FormulaId id);

/// One evaluated sample-size formula: the printed expression's real value,
/// its ceiling (what samplers consume), the named inputs it was evaluated
/// at, and any advisory flags raised during evaluation.
struct SampleBudget {
    FormulaId formula_id;
    std::map<std::string, double> inputs;
    double n_real = 0.0;
    long long n_int = 0;
    std::vector<std::string> flags;
};

/// Weissman L1 deviation: eps = sqrt(2 a ln(2/delta) / N).
double weissman_epsilon(int a, long long n, double delta);
/// Inversion: N = 2 a ln(2/delta) / eps^2.
SampleBudget weissman_budget(int a, double eps, double delta);

/// Markov-chain concentration tail 2 exp{-gamma0 eps^2 N / (2(2-gamma0))},
/// clamped to 1 when vacuous.
double chain_concentration_bound(double gamma0, double eps, long long n);
/// Inversion for a target tail delta: N = 2(2-gamma0) ln(2/delta) / (gamma0 eps^2).
SampleBudget chain_concentration_budget(double gamma0, double eps, double delta);

/// Known model, one policy: N = 8(2-gamma0)/(gamma0 sigma_tv^2) ln(2/delta).
SampleBudget tv_known_single(double gamma0, double sigma_tv, double delta);

/// Known model, K policies: N = 2K(2-gamma0)/(gamma0 sigma_tv^2) ln(2/delta).
/// At K = 4 this coincides with the single-policy count; at K = 1 the two
/// printed forms disagree by 4x, which is flagged rather than reconciled.
SampleBudget tv_known_K(double gamma0, double sigma_tv, double delta, int k);

enum class UnknownScope { per_pair, total };

/// Unknown model, generative sampling.
/// per_pair: N = 8 gamma^2 |S| / ((1-gamma)^2 sigma_tv^2) ln(2/delta);
/// total is the per-pair count times |S||A|.
SampleBudget tv_unknown(double gamma, int s_count, int a_count, double sigma_tv,
                        double delta, UnknownScope scope);

struct BudgetPair {
    SampleBudget lower;
    SampleBudget upper;
};

/// Known model, Renyi threshold:
///   lower N = K(2-gamma0)|SA|^2 / (2 gamma0 (sigma2-1)(|SA|-1)) ln(2/delta)
///   upper N = K(2-gamma0) sigma2 (|SA|-1)^2 / (2 gamma0 (sigma2-1)^2 (|SA|-2)) ln(2/delta)
BudgetPair renyi_known_bounds(double gamma0, double sigma2, int n_pairs, int k, double delta);

struct RenyiUnknownBudgets {
    SampleBudget lower;            // printed |S|-based form
    SampleBudget upper;
    SampleBudget rederived_lower;  // tv_unknown(total) at sigma_tv = max sigma_tv(|SA|, sigma2)
    SampleBudget rederived_upper;  // tv_unknown(total) at sigma_tv = min sigma_tv(|SA|, sigma2)
};

/// Unknown model, Renyi threshold, as printed:
///   lower N = gamma^2 |S|^4 |A| / (2(1-gamma)^2 (sigma2-1)(|S|-1)) ln(2/delta)
///   upper N = gamma^2 sigma2 (|S|-1)^2 |S|^2 |A| / (2(1-gamma)^2 (sigma2-1)^2 (|S|-2)) ln(2/delta)
/// The printed forms use |S| where substituting the TV<->Renyi conversions
/// into the unknown-model TV count yields |SA|; the substitution variants
/// are reported alongside, never in place of the printed ones.
RenyiUnknownBudgets renyi_unknown_bounds(double gamma, int s_count, int a_count,
                                         double sigma2, double delta);

/// Threshold meaningfulness per the no-sample argument: one uniform
/// representative already covers the whole simplex at sigma2 = n (the exact
/// maximum of D2(.||uniform)), and at the printed TV limit sqrt((n-1)/n).
/// The true maximum TV from uniform is (n-1)/n; both limits are reported.
struct ThresholdReport {
    bool meaningful = false;  // judged against the printed limit
    double printed_limit = 0.0;
    double oracle_limit = 0.0;
};

ThresholdReport threshold_meaningful_renyi(int n_pairs, double sigma2);
ThresholdReport threshold_meaningful_tv(int n_pairs, double sigma_tv);

} // namespace polco
