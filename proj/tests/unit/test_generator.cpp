#include "capmdp/errors.hpp"
#include "capmdp/exact.hpp"
#include "capmdp/generator.hpp"
#include "capmdp/parallel.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace capmdp;

namespace {

void expect_rows_stochastic(const Scenario& s, double tol) {
    for (std::size_t i = 0; i < s.n; ++i) {
        for (int a = 0; a < 2; ++a) {
            double sum = s.q(i, a);
            for (std::size_t j = 0; j < s.n; ++j) sum += s.p(i, a, j);
            EXPECT_NEAR(sum, 1.0, tol);
        }
    }
}

} // namespace

TEST(Rules, AcceptedDrawsSatisfyEveryRule) {
    const ChronicCareRules rules;
    Rng rng(1);
    for (int k = 0; k < 200; ++k) {
        const Scenario s = sample_rule_satisfying_model(rules, rng);
        EXPECT_EQ(rules.first_violation(s), std::nullopt);
        expect_rows_stochastic(s, 1e-9);
        for (double q : s.Q) EXPECT_LE(q, 0.20);
        for (double r : s.r) {
            EXPECT_GE(r, 100.0);
            EXPECT_LE(r, 1000.0);
        }
    }
}

TEST(Rules, CheckerNamesTheBrokenRule) {
    const ChronicCareRules rules;
    Rng rng(2);
    const Scenario good = sample_rule_satisfying_model(rules, rng);

    Scenario s = good;
    s.p(0, 0, 4) = 0.01;
    s.p(0, 0, 0) -= 0.01;
    EXPECT_EQ(rules.first_violation(s), "T6 no diagonal moves");

    s = good;
    const double delta = s.q(0, 0) - s.q(3, 0) + 0.001;
    s.q(3, 0) += delta;
    s.p(3, 0, 3) -= delta;
    EXPECT_EQ(rules.first_violation(s), "T9 death probability ordering");

    s = good;
    s.reward(3, 1) = 50.0;
    s.R[3] = (s.reward(3, 0) + 50.0) / 2.0;
    EXPECT_EQ(rules.first_violation(s), "W2 special care is more rewarding");

    s = good;
    s.p(1, 0, 1) += 0.1;
    EXPECT_EQ(rules.first_violation(s), "rows sum to one");

    EXPECT_EQ(rules.first_violation(good, 5.0), "W4 reward domain");
}

TEST(Rules, SeededDrawsRepeat) {
    const ChronicCareRules rules;
    Rng a(9), b(9);
    EXPECT_EQ(sample_rule_satisfying_model(rules, a), sample_rule_satisfying_model(rules, b));
}

TEST(Rules, RejectionLimit) {
    ChronicCareRules rules;
    rules.awareness_cap = 20.0;
    rules.worsening_cap = 20.0;
    rules.max_retries = 3;
    Rng rng(4);
    EXPECT_THROW(sample_rule_satisfying_model(rules, rng), RejectionLimitExceeded);
}

TEST(Nominal, SingleIterationEqualsDraw) {
    const ChronicCareRules rules;
    Rng a(5), b(5);
    const Scenario draw = sample_rule_satisfying_model(rules, a);
    const NominalModel nominal = estimate_nominal(rules, 1, b);
    for (std::size_t k = 0; k < draw.P.size(); ++k) EXPECT_NEAR(nominal.model.P[k], draw.P[k], 1e-15);
    EXPECT_EQ(nominal.model.Q, draw.Q);
    EXPECT_EQ(nominal.model.r, draw.r);
}

TEST(Nominal, PreservesRulesAndWorseningOrder) {
    const ChronicCareRules rules;
    Rng rng(6);
    const NominalModel nominal = estimate_nominal(rules, 2000, rng);
    EXPECT_EQ(rules.first_violation(nominal.model), std::nullopt);
    for (int a = 0; a < 2; ++a) EXPECT_GE(nominal.model.p(1, a, 2), nominal.model.p(0, a, 1));
    expect_rows_stochastic(nominal.model, 1e-12);
    EXPECT_THROW(estimate_nominal(rules, 0, rng), ParameterError);
}

TEST(Nominal, SeedsAgreeWithinMonteCarloError) {
    const ChronicCareRules rules;
    Rng a(10), b(11);
    const auto x = estimate_nominal(rules, 10000, a).model;
    const auto y = estimate_nominal(rules, 10000, b).model;
    for (std::size_t k = 0; k < x.P.size(); ++k) EXPECT_LE(std::abs(x.P[k] - y.P[k]), 0.05);
    for (std::size_t k = 0; k < x.Q.size(); ++k) EXPECT_LE(std::abs(x.Q[k] - y.Q[k]), 0.05);
}

TEST(Generate, ConventionsAndValidity) {
    const Instance inst = oracle::chronic_instance(5, 5, 0.4, 0.25, 1);
    EXPECT_TRUE(validate_instance(inst).empty());
    EXPECT_EQ(inst.n_scenarios(), 5u);
    EXPECT_EQ(inst.capacities, std::vector<double>(4, 400.0));
    for (double l : inst.lambda) EXPECT_EQ(l, 0.2);
    for (double t : inst.theta) EXPECT_EQ(t, 1.0 / 6.0);
    EXPECT_EQ(inst.absorbing_reward, 0.0);
    for (const auto& s : inst.scenarios) expect_rows_stochastic(s, 1e-9);
}

TEST(Generate, StructuralZerosSurviveNoise) {
    Rng rng(0);
    const NominalModel nominal = estimate_nominal(ChronicCareRules{}, 500, rng);
    const Instance inst = generate_instance({8, 4, 0.4, 0.5, 3}, nominal);
    for (const auto& s : inst.scenarios)
        for (std::size_t k = 0; k < s.P.size(); ++k)
            if (nominal.model.P[k] == 0.0) EXPECT_EQ(s.P[k], 0.0);
}

TEST(Generate, TinyNoiseReproducesNominal) {
    Rng rng(0);
    const NominalModel nominal = estimate_nominal(ChronicCareRules{}, 500, rng);
    const Instance inst = generate_instance({3, 4, 0.4, 1e-12, 3}, nominal);
    for (const auto& s : inst.scenarios) {
        for (std::size_t k = 0; k < s.P.size(); ++k) EXPECT_NEAR(s.P[k], nominal.model.P[k], 1e-9);
        for (std::size_t k = 0; k < s.Q.size(); ++k) EXPECT_NEAR(s.Q[k], nominal.model.Q[k], 1e-9);
        for (std::size_t k = 0; k < s.r.size(); ++k)
            EXPECT_NEAR(s.r[k], nominal.model.r[k], 1e-9 * nominal.model.r[k]);
    }
}

TEST(Generate, DeterministicAcrossThreads) {
    GeneratorConfig cfg;
    cfg.params = {30, 5, 0.4, 0.25, 77, 1000};
    cfg.mc_iterations = 300;
    set_thread_count(1);
    const auto a = dump(instance_to_json(generate_from_config(cfg)));
    set_thread_count(4);
    const auto b = dump(instance_to_json(generate_from_config(cfg)));
    set_thread_count(0);
    EXPECT_EQ(a, b);
}

TEST(Generate, ParameterDomain) {
    Rng rng(0);
    const NominalModel nominal = random_nominal(3, rng);
    EXPECT_THROW(generate_instance({3, 4, 0.4, 1.5, 0}, nominal), ParameterError);
    EXPECT_THROW(generate_instance({3, 4, 0.0, 0.5, 0}, nominal), ParameterError);
    EXPECT_THROW(generate_instance({0, 4, 0.4, 0.5, 0}, nominal), ParameterError);
    EXPECT_THROW(generate_instance({3, 1, 0.4, 0.5, 0}, nominal), ParameterError);
}

TEST(Generate, ScaleCovariantInPopulation) {
    const Instance small = oracle::random_instance(3, 4, 3, 0.4, 0.25, 13, 1000);
    const Instance big = oracle::random_instance(3, 4, 3, 0.4, 0.25, 13, 2000);
    const auto a = solve_exact(small);
    const auto b = solve_exact(big);
    EXPECT_EQ(*a.best_strategy, *b.best_strategy);
    EXPECT_NEAR(a.best_value / 1000.0, b.best_value / 2000.0, 1e-9);
}

TEST(Config, StrictSchema) {
    const json good{{"n_scenarios", 5}, {"T", 5}, {"c", 0.4}, {"epsilon", 0.25},
                    {"seed", 1},        {"N", 1000}, {"n_mc_iterations", 100}};
    const GeneratorConfig cfg = generator_config_from_json(good);
    EXPECT_EQ(cfg.params.n_scenarios, 5u);
    EXPECT_EQ(cfg.mc_iterations, 100u);
    EXPECT_EQ(generator_config_from_json(generator_config_to_json(cfg)).params.seed, 1u);

    json extra = good;
    extra["bogus"] = 1;
    EXPECT_THROW(generator_config_from_json(extra), SchemaError);
    json missing = good;
    missing.erase("T");
    EXPECT_THROW(generator_config_from_json(missing), SchemaError);
    json wrong = good;
    wrong["c"] = "high";
    EXPECT_THROW(generator_config_from_json(wrong), SchemaError);
    json bad = good;
    bad["epsilon"] = 1.5;
    EXPECT_THROW(generator_config_from_json(bad), ParameterError);
}

TEST(RandomModel, ShapeAndRewards) {
    Rng rng(3);
    const NominalModel m = random_nominal(4, rng);
    expect_rows_stochastic(m.model, 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_GE(m.model.reward(i, 1), m.model.reward(i, 0));
        EXPECT_LE(m.model.q(i, 0), 0.2);
    }
}
