#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "polco/divergence.hpp"
#include "polco/geometry.hpp"

using namespace polco;

namespace {

void check_on_simplex(const SimplexPoint& p) {
    double sum = 0.0;
    for (double v : p.values) {
        CHECK(v >= -1e-15);
        sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

} // namespace

TEST_CASE("make_point basics") {
    auto u = make_uniform(4);
    for (double v : u.values) CHECK(v == 0.25);

    auto v0 = make_vertex(3, 0);
    CHECK(v0.values == std::vector<double>{1.0, 0.0, 0.0});
    CHECK_THROWS_AS(make_vertex(3, 3), std::invalid_argument);

    auto r1 = make_random(5, {2, 3});
    auto r2 = make_random(5, {2, 3});
    CHECK(r1.values == r2.values);
    check_on_simplex(r1);
}

TEST_CASE("max_tv family against the uniform representative") {
    auto p = max_tv_family(4, 2.0, Sign::plus);
    CHECK(p.values[0] == doctest::Approx(0.6830127018922193).epsilon(1e-15));
    for (int i = 1; i < 4; ++i) {
        CHECK(p.values[i] == doctest::Approx(0.10566243270259357).epsilon(1e-15));
    }
    auto u = make_uniform(4);
    CHECK(renyi2(p.values, u.values) == doctest::Approx(2.0).epsilon(1e-12));

    // sigma2 = n lands exactly on the vertex
    auto vertex_like = max_tv_family(4, 4.0, Sign::plus);
    CHECK(vertex_like.values[0] == 1.0);
    for (int i = 1; i < 4; ++i) CHECK(vertex_like.values[i] == 0.0);

    // sigma2 -> 1 collapses to uniform
    auto near_uniform = max_tv_family(4, 1.0 + 1e-12, Sign::plus);
    for (double v : near_uniform.values) CHECK(std::abs(v - 0.25) <= 1e-6);

    // minus branch leaves the simplex once sqrt((n-1)(sigma2-1)) > 1
    CHECK_THROWS_AS(max_tv_family(4, 2.0, Sign::minus), std::domain_error);
    auto minus_ok = max_tv_family(4, 1.2, Sign::minus);
    check_on_simplex(minus_ok);
    CHECK(renyi2(minus_ok.values, u.values) == doctest::Approx(1.2).epsilon(1e-12));

    CHECK_THROWS_AS(max_tv_family(4, 4.5, Sign::plus), std::domain_error);
}

TEST_CASE("vertex_rep is at exact Renyi distance from the vertex") {
    auto rep = vertex_rep(4, 2.0);
    CHECK(rep.values[0] == 0.5);
    for (int i = 1; i < 4; ++i) CHECK(rep.values[i] == doctest::Approx(1.0 / 6).epsilon(1e-15));

    auto near_vertex = vertex_rep(4, 1.0 + 1e-12);
    CHECK(near_vertex.values[0] == doctest::Approx(1.0).epsilon(1e-9));

    SplitRng rng({19, 0});
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(10));
        const double sigma2 = 1.0 + 4.0 * rng.next_double() + 1e-9;
        auto r = vertex_rep(n, sigma2);
        check_on_simplex(r);
        auto vertex = make_vertex(n, 0);
        CHECK(renyi2(vertex.values, r.values) == doctest::Approx(sigma2).epsilon(1e-12));
    }
}

TEST_CASE("loosest_tv branches sit at distance sigma2 from vertex_rep") {
    auto rep = vertex_rep(4, 2.0);

    auto vertex_branch = loosest_tv_family(4, 2.0, LoosestBranch::vertex);
    CHECK(vertex_branch.values == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(renyi2(vertex_branch.values, rep.values) == doctest::Approx(2.0).epsilon(1e-12));

    auto interior = loosest_tv_family(4, 2.0, LoosestBranch::interior);
    CHECK(interior.values[0] == 0.0); // (2 - sigma2)/sigma2 at sigma2 = 2
    for (int i = 1; i < 4; ++i) CHECK(interior.values[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(renyi2(interior.values, rep.values) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(loosest_tv_family(4, 2.5, LoosestBranch::interior), std::domain_error);
}

TEST_CASE("min_tv family pins the first coordinate and hits sigma2") {
    auto rep = vertex_rep(4, 2.0);
    auto plus = min_tv_family(4, 2.0, Sign::plus);
    CHECK(plus.values == std::vector<double>{0.5, 0.5, 0.0, 0.0});
    CHECK(renyi2(plus.values, rep.values) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(min_tv_family(4, 2.0, Sign::minus), std::domain_error);

    auto wide = min_tv_family(10, 1.5, Sign::plus);
    check_on_simplex(wide);
    CHECK(wide.values[0] == doctest::Approx(1.0 / 1.5).epsilon(1e-15));
    CHECK(std::abs(renyi2(wide.values, vertex_rep(10, 1.5).values) - 1.5) <= 1e-10);

    // plus branch requires sigma2 <= n - 2
    CHECK_THROWS_AS(min_tv_family(4, 3.0, Sign::plus), std::domain_error);
}

TEST_CASE("closed-form TV values at (4, 2)") {
    auto cf = closed_form_tv(4, 2.0);
    CHECK(cf.max_tv == doctest::Approx(0.4330127018922193).epsilon(1e-15));
    CHECK(cf.loosest_tv == 0.5);
    CHECK(cf.min_tv == doctest::Approx(1.0 / 3).epsilon(1e-15));

    auto tight = closed_form_tv(4, 1.0 + 1e-12);
    CHECK(tight.max_tv <= 1e-5);
    CHECK(tight.loosest_tv <= 1e-11);
    CHECK(tight.min_tv <= 1e-11);

    // sigma2 = n: the max_tv family point is the vertex, TV to uniform is (n-1)/n
    for (int n = 3; n <= 8; ++n) {
        CHECK(closed_form_tv(n, n).max_tv == doctest::Approx((n - 1.0) / n).epsilon(1e-15));
    }
}

TEST_CASE("closed-form values are family-level TV identities") {
    const int ns[] = {3, 4, 5, 6, 8, 10};
    const double sigmas[] = {1.1, 1.5, 2.0, 3.0};
    for (int n : ns) {
        for (double sigma2 : sigmas) {
            auto cf = closed_form_tv(n, sigma2);
            auto uniform = make_uniform(n);
            auto rep = vertex_rep(n, sigma2);
            check_on_simplex(rep);

            auto moved = max_tv_family(n, sigma2, Sign::plus);
            check_on_simplex(moved);
            CHECK(std::abs(total_variation(moved.values, uniform.values) - cf.max_tv) <= 1e-12);

            auto vertex = loosest_tv_family(n, sigma2, LoosestBranch::vertex);
            CHECK(std::abs(total_variation(vertex.values, rep.values) - cf.loosest_tv) <= 1e-12);
            if (sigma2 <= 2.0) {
                auto interior = loosest_tv_family(n, sigma2, LoosestBranch::interior);
                check_on_simplex(interior);
                CHECK(std::abs(total_variation(interior.values, rep.values) - cf.loosest_tv) <= 1e-12);
            }
            if (sigma2 <= n - 2.0) {
                auto tight = min_tv_family(n, sigma2, Sign::plus);
                check_on_simplex(tight);
                CHECK(std::abs(total_variation(tight.values, rep.values) - cf.min_tv) <= 1e-12);
            }
        }
    }
}

TEST_CASE("tv extrema oracle finds the known feasible extremes at (4, 2)") {
    OracleBudget budget;
    auto from_uniform = tv_extrema_oracle(make_uniform(4), 2.0, budget, {51, 0});
    // (0.5, 0.5, 0, 0) is feasible with TV 0.5 > the sqrt(3)/4 closed form
    CHECK(from_uniform.tv_max >= 0.5 - 1e-9);
    CHECK(std::abs(renyi2(from_uniform.argmax.values, make_uniform(4).values) - 2.0) <= 1e-6);
    CHECK(std::abs(renyi2(from_uniform.argmin.values, make_uniform(4).values) - 2.0) <= 1e-6);

    auto rep = vertex_rep(4, 2.0);
    auto from_rep = tv_extrema_oracle(rep, 2.0, budget, {52, 0});
    CHECK(from_rep.tv_max >= 0.5 - 1e-6);        // loosest_tv family value
    CHECK(from_rep.tv_min <= 1.0 / 3 + 1e-6);    // min_tv family value
    CHECK(std::abs(renyi2(from_rep.argmin.values, rep.values) - 2.0) <= 1e-6);
}

TEST_CASE("tv extrema oracle collapses with the constraint set") {
    auto extrema = tv_extrema_oracle(make_uniform(4), 1.0 + 1e-9, {}, {53, 0});
    CHECK(extrema.tv_max <= 1e-3);
    CHECK(extrema.tv_min <= extrema.tv_max);
}

TEST_CASE("oracle sandwiches the family thresholds on a grid") {
    OracleBudget budget;
    budget.restarts = 500;
    budget.iterations = 100;
    const int ns[] = {3, 5, 6};
    const double sigmas[] = {1.5, 2.0};
    for (int n : ns) {
        for (double sigma2 : sigmas) {
            auto cf = closed_form_tv(n, sigma2);
            auto from_uniform = tv_extrema_oracle(make_uniform(n), sigma2, budget, {60, 0});
            CHECK(from_uniform.tv_max >= cf.max_tv - 1e-6);
            auto from_rep = tv_extrema_oracle(vertex_rep(n, sigma2), sigma2, budget, {61, 0});
            CHECK(from_rep.tv_max >= cf.loosest_tv - 1e-6);
            if (sigma2 <= n - 2.0) CHECK(from_rep.tv_min <= cf.min_tv + 1e-6);
        }
    }
}

TEST_CASE("certificate aggregates families and oracle runs") {
    auto cert = certificate(4, 2.0, {70, 0});
    CHECK(cert.family_residual_max <= 1e-10);
    CHECK(cert.oracle_max_uniform >= 0.5 - 1e-6);
    CHECK(cert.oracle_min_vrep <= 1.0 / 3 + 1e-6);
    CHECK(cert.oracle_exceeds_max_tv); // 0.5 > 0.4330...
    CHECK(cert.oracle_confirms_min_tv);
    CHECK(!cert.failed);

    auto small = certificate(3, 1.5, {71, 0});
    CHECK(small.family_residual_max <= 1e-10);

    auto wide = certificate(6, 5.0, {72, 0});
    CHECK(!wide.failed);
    CHECK(wide.family_residual_max <= 1e-10);
    CHECK(!wide.family_notes.empty()); // interior and min_tv branches are out of range at sigma2=5

    CHECK_THROWS_AS(certificate(4, 4.0, {73, 0}), std::invalid_argument);
}
