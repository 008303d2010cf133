#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "polco/divergence.hpp"
#include "polco/harness.hpp"
#include "support.hpp"

using namespace polco;
using namespace polco::testing;

TEST_CASE("generator: branching 1 is deterministic, same seed reproduces") {
    GeneratorSpec spec;
    spec.num_states = 5;
    spec.num_actions = 2;
    spec.branching = 1;
    spec.seed = 101;
    Cmp c = generate_random_mdp(spec);
    CHECK(validate_cmp(c).empty());
    for (int s = 0; s < 5; ++s) {
        for (int a = 0; a < 2; ++a) {
            int ones = 0;
            for (int t = 0; t < 5; ++t) {
                if (c.p(s, a, t) == 1.0) ++ones;
                else CHECK(c.p(s, a, t) == 0.0);
            }
            CHECK(ones == 1);
        }
    }
    Cmp again = generate_random_mdp(spec);
    CHECK(c.transition == again.transition);
    CHECK(c.mu == again.mu);

    spec.seed = 102;
    CHECK(generate_random_mdp(spec).transition != c.transition);

    spec.branching = 9;
    CHECK_THROWS_AS(generate_random_mdp(spec), std::invalid_argument);
}

TEST_CASE("reversible generator induces a symmetric chain under the uniform policy") {
    GeneratorSpec spec;
    spec.num_states = 6;
    spec.num_actions = 3;
    spec.branching = 2;
    spec.seed = 7;
    spec.reversible = true;
    Cmp c = generate_random_mdp(spec);
    CHECK(validate_cmp(c).empty());

    auto chain = induced_chain(c, TabularPolicy::uniform(6, 3));
    for (int s = 0; s < 6; ++s)
        for (int t = 0; t < 6; ++t)
            CHECK(std::abs(chain.at(s, t) - chain.at(t, s)) <= 1e-12);

    auto info = spectral_gap(chain);
    CHECK(info.reversible);
    CHECK(info.gamma0 >= 0.05); // the uniform smoothing term keeps the gap open
}

TEST_CASE("known-model TV experiment holds its confidence level") {
    ExperimentConfig cfg;
    cfg.generator = {4, 2, 2, 31, true, 0.9, true};
    cfg.setting = Setting::known_model;
    cfg.metric = Metric::tv;
    cfg.threshold = 0.15;
    cfg.delta = 0.1;
    cfg.replicates = 20;
    cfg.master_seed = 5;
    auto report = run_concentration_experiment(cfg);
    CHECK(report.records.size() == 20);
    CHECK(report.violation_rate <= cfg.delta);
    CHECK(report.gamma0 > 0.0);
    CHECK(report.reversible_chain);
    for (const auto& rec : report.records) {
        CHECK(rec.violated == (rec.divergence > rec.threshold));
        CHECK(rec.n_used > 0);
        CHECK(rec.env_steps >= rec.n_used); // at least one step per sample
        CHECK(rec.formula_id == FormulaId::tv_known_single);
    }
}

TEST_CASE("experiment reruns and parallel runs are identical") {
    ExperimentConfig cfg;
    cfg.generator = {4, 2, 2, 32, true, 0.85, true};
    cfg.setting = Setting::known_model;
    cfg.metric = Metric::tv;
    cfg.threshold = 0.2;
    cfg.delta = 0.1;
    cfg.replicates = 12;
    cfg.master_seed = 9;

    auto serial = run_concentration_experiment(cfg);
    cfg.threads = 4;
    auto parallel = run_concentration_experiment(cfg);
    REQUIRE(serial.records.size() == parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(serial.records[i].divergence == parallel.records[i].divergence);
        CHECK(serial.records[i].env_steps == parallel.records[i].env_steps);
        CHECK(serial.records[i].replicate == parallel.records[i].replicate);
    }
}

TEST_CASE("thresholds beyond the no-sample limit short-circuit") {
    ExperimentConfig cfg;
    cfg.generator = {3, 2, 2, 33, false, 0.9, true};
    cfg.setting = Setting::known_model;
    cfg.metric = Metric::renyi2;
    cfg.threshold = 6.0; // |SA| = 6
    cfg.delta = 0.05;
    cfg.replicates = 7;
    auto report = run_concentration_experiment(cfg);
    CHECK(report.zero_sample_shortcut);
    CHECK(report.violation_rate == 0.0);
    for (const auto& rec : report.records) {
        CHECK(rec.n_used == 0);
        CHECK(!rec.violated);
    }
}

TEST_CASE("unknown-model experiment caps per-pair draws and records the cap") {
    ExperimentConfig cfg;
    cfg.generator = {3, 2, 3, 34, false, 0.9, true};
    cfg.setting = Setting::unknown_model;
    cfg.metric = Metric::tv;
    cfg.threshold = 0.1;
    cfg.delta = 0.1;
    cfg.replicates = 3;
    cfg.per_pair_cap = 2000; // the formula asks for far more at gamma = 0.9
    auto report = run_concentration_experiment(cfg);
    bool cap_flagged = false;
    for (const auto& f : report.flags) {
        cap_flagged = cap_flagged || f.find("per_pair_cap_applied") != std::string::npos;
    }
    CHECK(cap_flagged);
    for (const auto& rec : report.records) {
        CHECK(rec.n_used == 2000);
        CHECK(rec.env_steps == 2000 * 6);
    }
}

TEST_CASE("renyi experiments run both printed budgets") {
    ExperimentConfig cfg;
    cfg.generator = {3, 2, 3, 35, true, 0.8, true};
    cfg.setting = Setting::known_model;
    cfg.metric = Metric::renyi2;
    cfg.threshold = 2.0;
    cfg.delta = 0.1;
    cfg.replicates = 5;
    auto report = run_concentration_experiment(cfg);
    REQUIRE(report.records.size() == 10);
    CHECK(report.records[0].formula_id == FormulaId::renyi_known_lower);
    CHECK(report.records[1].formula_id == FormulaId::renyi_known_upper);
    CHECK(report.records[1].n_used >= report.records[0].n_used);
    CHECK(report.violation_rate <= cfg.delta);
}

TEST_CASE("geometry audit covers the grid and an empty grid yields no rows") {
    auto certs = run_geometry_audit({3, 4, 6}, {1.5, 2.0}, {40, 0});
    REQUIRE(certs.size() == 6);
    for (const auto& cert : certs) {
        CHECK(!cert.failed);
        CHECK(cert.family_residual_max <= 1e-10);
    }
    // the (4, 2) row must expose the oracle point beyond the closed-form max
    bool found = false;
    for (const auto& cert : certs) {
        if (cert.n == 4 && cert.sigma2 == 2.0) {
            found = true;
            CHECK(cert.oracle_max_uniform >= 0.5 - 1e-6);
            CHECK(cert.oracle_exceeds_max_tv);
        }
    }
    CHECK(found);

    CHECK(run_geometry_audit({}, {1.5}, {41, 0}).empty());
}
