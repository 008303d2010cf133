#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "polco/planner.hpp"
#include "polco/rng.hpp"

using namespace polco;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

} // namespace

TEST_CASE("weissman worked values") {
    auto b = weissman_budget(10, 0.2, 0.1);
    CHECK(b.n_real == doctest::Approx(1497.8661367769953).epsilon(1e-12));
    CHECK(b.n_int == 1498);

    CHECK(weissman_epsilon(4, 800, 0.05) == doctest::Approx(0.19206455826398416).epsilon(1e-12));

    // quadrupling N halves epsilon
    const double eps_n = weissman_epsilon(6, 500, 0.1);
    const double eps_4n = weissman_epsilon(6, 2000, 0.1);
    CHECK(rel_diff(eps_n, 2.0 * eps_4n) <= 1e-12);

    CHECK_THROWS_AS(weissman_budget(1, 0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(weissman_budget(4, -0.1, 0.1), std::invalid_argument);
}

TEST_CASE("chain concentration tail and inversion") {
    CHECK(chain_concentration_bound(1.0, 0.1, 1000) ==
          doctest::Approx(0.013475893998170934).epsilon(1e-12));
    CHECK(chain_concentration_bound(1.0, 0.0, 50) == 1.0); // vacuous, clamped

    auto b = chain_concentration_budget(1.0, 0.1, 0.1);
    CHECK(b.n_real == doctest::Approx(599.1464547107981).epsilon(1e-12));
    CHECK(b.n_int == 600);

    CHECK_THROWS_AS(chain_concentration_budget(0.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("known-model TV counts") {
    auto single = tv_known_single(0.5, 0.1, 0.1);
    CHECK(single.n_real == doctest::Approx(7189.757456529578).epsilon(1e-12));
    CHECK(single.n_int == 7190);

    auto single2 = tv_known_single(1.0, 0.2, 0.05);
    CHECK(single2.n_real == doctest::Approx(737.7758908227872).epsilon(1e-12));
    CHECK(single2.n_int == 738);

    // halving sigma multiplies the count by 4
    auto tight = tv_known_single(0.5, 0.05, 0.1);
    CHECK(rel_diff(tight.n_real, 4.0 * single.n_real) <= 1e-12);

    auto k5 = tv_known_K(1.0, 0.2, 0.05, 5);
    CHECK(k5.n_real == doctest::Approx(922.2198635284841).epsilon(1e-12));
    CHECK(k5.n_int == 923);

    auto k10 = tv_known_K(1.0, 0.2, 0.05, 10);
    CHECK(rel_diff(k10.n_real, 2.0 * k5.n_real) <= 1e-12);

    // 2K = 8 makes K=4 collide with the single-policy count; K=1 disagrees by 4x
    auto k4 = tv_known_K(1.0, 0.2, 0.05, 4);
    CHECK(rel_diff(k4.n_real, single2.n_real) <= 1e-12);
    REQUIRE(k4.flags.size() == 1);
    CHECK(k4.flags[0].find("k4_coincidence") != std::string::npos);
    auto k1 = tv_known_K(1.0, 0.2, 0.05, 1);
    CHECK(rel_diff(4.0 * k1.n_real, single2.n_real) <= 1e-12);
    REQUIRE(k1.flags.size() == 1);
    CHECK(k1.flags[0].find("k1_inconsistency") != std::string::npos);
}

TEST_CASE("known-model TV count is the chain inversion at eps = sigma/2") {
    SplitRng rng({40, 0});
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma0 = 0.05 + 0.95 * rng.next_double();
        const double sigma = 0.01 + 0.5 * rng.next_double();
        const double delta = 0.01 + 0.5 * rng.next_double();
        auto direct = tv_known_single(gamma0, sigma, delta);
        auto inverted = chain_concentration_budget(gamma0, sigma / 2.0, delta);
        CHECK(rel_diff(direct.n_real, inverted.n_real) <= 1e-12);
    }
}

TEST_CASE("unknown-model TV counts") {
    auto per_pair = tv_unknown(0.9, 5, 3, 0.1, 0.05, UnknownScope::per_pair);
    CHECK(rel_diff(per_pair.n_real, 1195196.9431329155) <= 1e-9);

    auto total = tv_unknown(0.9, 5, 3, 0.1, 0.05, UnknownScope::total);
    CHECK(total.n_real == per_pair.n_real * 15.0);

    // gamma^2/(1-gamma)^2 scaling between 0.9 and 0.99
    auto sharp = tv_unknown(0.99, 5, 3, 0.1, 0.05, UnknownScope::per_pair);
    CHECK(rel_diff(sharp.n_real / per_pair.n_real, 121.0) <= 1e-9);

    CHECK_THROWS_AS(tv_unknown(0.9, 5, 3, 0.0, 0.05, UnknownScope::total), std::invalid_argument);
}

TEST_CASE("known-model Renyi bounds") {
    auto pair = renyi_known_bounds(1.0, 2.0, 8, 1, 0.1);
    CHECK(pair.lower.n_real == doctest::Approx(13.694776107675386).epsilon(1e-12));
    CHECK(pair.lower.n_int == 14);
    CHECK(pair.upper.n_real == doctest::Approx(24.465146900690925).epsilon(1e-12));
    CHECK(pair.upper.n_int == 25);

    // pole at sigma2 = 1
    auto near_pole = renyi_known_bounds(1.0, 1.0 + 1e-12, 8, 1, 0.1);
    CHECK(near_pole.lower.n_real > 1e12);
    CHECK(near_pole.upper.n_real > 1e12);

    auto doubled = renyi_known_bounds(1.0, 2.0, 8, 2, 0.1);
    CHECK(rel_diff(doubled.lower.n_real, 2.0 * pair.lower.n_real) <= 1e-12);
    CHECK(rel_diff(doubled.upper.n_real, 2.0 * pair.upper.n_real) <= 1e-12);

    CHECK_THROWS_AS(renyi_known_bounds(1.0, 0.9, 8, 1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(renyi_known_bounds(1.0, 2.0, 2, 1, 0.1), std::invalid_argument);
}

TEST_CASE("renyi_known lower never exceeds upper inside the meaningful range") {
    SplitRng rng({41, 0});
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(20));
        const double sigma2 = 1.0 + (n - 1.0) * std::max(rng.next_double(), 1e-6);
        const double gamma0 = 0.05 + 0.95 * rng.next_double();
        const int k = 1 + static_cast<int>(rng.below(5));
        const double delta = 0.01 + 0.5 * rng.next_double();
        auto pair = renyi_known_bounds(gamma0, sigma2, n, k, delta);
        CHECK(pair.lower.n_real <= pair.upper.n_real * (1.0 + 1e-12));
    }
}

TEST_CASE("unknown-model Renyi bounds, printed and rederived") {
    auto budgets = renyi_unknown_bounds(0.9, 5, 3, 2.0, 0.1);
    CHECK(rel_diff(budgets.lower.n_real, 56872.104880751554) <= 1e-9);
    CHECK(rel_diff(budgets.upper.n_real, 97061.72566314931) <= 1e-9);

    // the substitution variant is exactly tv_unknown(total) at the converted threshold
    const double n_pairs = 15.0;
    const double sigma_tv_max = std::sqrt((n_pairs - 1.0) * 1.0) / n_pairs;
    auto direct = tv_unknown(0.9, 5, 3, sigma_tv_max, 0.1, UnknownScope::total);
    CHECK(budgets.rederived_lower.n_real == direct.n_real);
    CHECK(budgets.rederived_lower.formula_id == FormulaId::tv_unknown_total);

    auto near_pole = renyi_unknown_bounds(0.9, 5, 3, 1.0 + 1e-12, 0.1);
    CHECK(near_pole.lower.n_real > 1e12);

    CHECK_THROWS_AS(renyi_unknown_bounds(0.9, 2, 3, 2.0, 0.1), std::invalid_argument);
}

TEST_CASE("budgets are monotone in their inputs") {
    SplitRng rng({42, 0});
    for (int trial = 0; trial < 100; ++trial) {
        const double gamma0 = 0.05 + 0.9 * rng.next_double();
        const double delta = 0.01 + 0.4 * rng.next_double();
        const double sigma_lo = 0.02 + 0.3 * rng.next_double();
        const double sigma_hi = sigma_lo + 0.2 * rng.next_double() + 1e-6;
        CHECK(tv_known_single(gamma0, sigma_hi, delta).n_real <=
              tv_known_single(gamma0, sigma_lo, delta).n_real);
        CHECK(tv_known_single(gamma0, sigma_lo, delta * 1.5).n_real <=
              tv_known_single(gamma0, sigma_lo, delta).n_real);

        const double gamma = 0.5 + 0.45 * rng.next_double();
        const int s_small = 2 + static_cast<int>(rng.below(5));
        auto base = tv_unknown(gamma, s_small, 2, sigma_lo, delta, UnknownScope::total);
        CHECK(tv_unknown(gamma, s_small + 1, 2, sigma_lo, delta, UnknownScope::total).n_real >=
              base.n_real);
        CHECK(tv_unknown(gamma, s_small, 3, sigma_lo, delta, UnknownScope::total).n_real >=
              base.n_real);

        const double sigma2 = 1.05 + rng.next_double();
        auto renyi_base = renyi_known_bounds(gamma0, sigma2, 8, 2, delta);
        auto renyi_wide = renyi_known_bounds(gamma0, sigma2 + 0.5, 8, 2, delta);
        CHECK(renyi_wide.lower.n_real <= renyi_base.lower.n_real);
        CHECK(renyi_wide.upper.n_real <= renyi_base.upper.n_real);
        CHECK(renyi_known_bounds(gamma0, sigma2, 8, 3, delta).lower.n_real >=
              renyi_base.lower.n_real);
    }
}

TEST_CASE("budget integers are ceilings") {
    SplitRng rng({43, 0});
    for (int trial = 0; trial < 100; ++trial) {
        auto b = tv_known_single(0.1 + 0.9 * rng.next_double(), 0.05 + rng.next_double() * 0.4,
                                 0.01 + 0.5 * rng.next_double());
        CHECK(b.n_int == static_cast<long long>(std::ceil(b.n_real)));
        CHECK(b.n_real > 0.0);
    }
}

TEST_CASE("threshold meaningfulness per the no-sample argument") {
    auto renyi = threshold_meaningful_renyi(4, 4.0);
    CHECK(!renyi.meaningful);
    CHECK(renyi.printed_limit == 4.0);

    CHECK(threshold_meaningful_renyi(2, 1.5).meaningful);

    auto tv = threshold_meaningful_tv(4, 0.5);
    CHECK(tv.meaningful);
    CHECK(tv.printed_limit == doctest::Approx(0.8660254037844386).epsilon(1e-15));
    CHECK(tv.oracle_limit == 0.75);
    CHECK(!threshold_meaningful_tv(4, 0.87).meaningful);

    // out-of-range thresholds are flagged on budgets, not rejected
    auto b = tv_unknown(0.9, 2, 2, 0.9, 0.1, UnknownScope::per_pair);
    REQUIRE(b.flags.size() == 1);
    CHECK(b.flags[0].find("threshold_not_meaningful") != std::string::npos);
}
