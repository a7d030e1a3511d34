#include "capmdp/errors.hpp"
#include "capmdp/evaluate.hpp"
#include "capmdp/exact.hpp"
#include "capmdp/parallel.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace capmdp;

TEST(Exact, DominantActionWithSlackCapacity) {
    const Instance inst = oracle::single_state_example(10.0, 6.0);
    const auto r = solve_exact(inst);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_EQ((*r.best_strategy)(0, 0), 1);
    EXPECT_EQ(r.best_value, evaluate_strategy(inst, *r.best_strategy).total_reward);
}

TEST(Exact, ZeroCapacityForcesAllZero) {
    Instance inst = oracle::random_instance(3, 4, 3, 0.4, 0.25, 4);
    for (double& c : inst.capacities) c = 0.0;
    const auto r = solve_exact(inst);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_EQ(*r.best_strategy, Strategy(3, 3, 0));
    EXPECT_EQ(r.best_value, evaluate_strategy(inst, Strategy(3, 3, 0)).total_reward);
}

TEST(Exact, MatchesFlatEnumeration) {
    const Instance inst = oracle::random_instance(3, 4, 5, 0.4, 0.25, 21);
    const auto oracle = oracle::enumerate_all(inst);
    EXPECT_EQ(oracle.total, 512u);
    const auto r = solve_exact(inst);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_EQ(r.best_value, oracle.best_value);
    EXPECT_EQ(*r.best_strategy, *oracle.best);
}

TEST(Exact, BoundDoesNotChangeTheAnswer) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = oracle::random_instance(3, 5, 3, 0.3, 0.5, seed);
        SolveLimits plain;
        plain.use_bound = false;
        const auto a = solve_exact(inst);
        const auto b = solve_exact(inst, plain);
        EXPECT_EQ(a.best_value, b.best_value);
        EXPECT_EQ(*a.best_strategy, *b.best_strategy);
        EXPECT_LE(a.nodes_explored, b.nodes_explored);
    }
}

TEST(Exact, TiesGoToLexicographicallySmallest) {
    // state 1 actions are indistinguishable, so every optimum has a twin
    Instance inst = oracle::random_instance(2, 4, 2, 0.5, 0.25, 8);
    for (auto& s : inst.scenarios) {
        for (std::size_t j = 0; j < 2; ++j) s.p(1, 1, j) = s.p(1, 0, j);
        s.q(1, 1) = s.q(1, 0);
        s.reward(1, 1) = s.reward(1, 0);
    }
    const auto oracle = oracle::enumerate_all(inst);
    const auto r = solve_exact(inst);
    EXPECT_EQ(*r.best_strategy, *oracle.best);
    for (std::size_t e = 0; e < 3; ++e) EXPECT_EQ((*r.best_strategy)(e, 1), 0);
}

TEST(Exact, MonotoneInCapacity) {
    const Instance inst = oracle::random_instance(3, 4, 3, 0.2, 0.25, 31);
    double last = -1.0;
    for (double c : {0.0, 0.1, 0.2, 0.4, 0.7, 1.0}) {
        const auto r = solve_exact(with_capacity_fraction(inst, c));
        ASSERT_EQ(r.status, SolveStatus::Optimal);
        EXPECT_GE(r.best_value, last);
        last = r.best_value;
    }
}

TEST(Exact, IncumbentReevaluatesFeasible) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = oracle::chronic_instance(3, 3, 0.3, 0.25, seed);
        const auto r = solve_exact(inst);
        ASSERT_EQ(r.status, SolveStatus::Optimal);
        const auto ev = evaluate_strategy(inst, *r.best_strategy);
        EXPECT_TRUE(ev.feasible);
        EXPECT_EQ(ev.total_reward, r.best_value);
    }
}

TEST(Exact, NodeLimitReportsLimitExceeded) {
    const Instance inst = oracle::random_instance(3, 6, 3, 0.4, 0.25, 2);
    SolveLimits lim;
    lim.max_nodes = 50;
    const auto r = solve_exact(inst, lim);
    EXPECT_EQ(r.status, SolveStatus::LimitExceeded);
    if (r.best_strategy) EXPECT_TRUE(evaluate_strategy(inst, *r.best_strategy).feasible);
}

TEST(Exact, ThreadCountDoesNotChangeSearch) {
    const Instance inst = oracle::random_instance(3, 6, 4, 0.4, 0.25, 12);
    set_thread_count(1);
    const auto a = solve_exact(inst);
    set_thread_count(4);
    const auto b = solve_exact(inst);
    set_thread_count(0);
    EXPECT_EQ(a.best_value, b.best_value);
    EXPECT_EQ(*a.best_strategy, *b.best_strategy);
    EXPECT_EQ(a.nodes_per_depth, b.nodes_per_depth);
    EXPECT_EQ(dump(solve_result_to_json(a)), dump(solve_result_to_json(b)));
}

TEST(Exact, SearchLogHasOneRowPerDepth) {
    const Instance inst = oracle::random_instance(2, 4, 2, 0.4, 0.25, 1);
    const auto r = solve_exact(inst);
    const std::string csv = search_log_csv(r);
    EXPECT_EQ(csv.rfind("depth,t,nodes\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_EQ(r.nodes_per_depth[0], 4u);
}

TEST(Stationary, EqualsExactWhenTIsTwo) {
    const Instance inst = oracle::random_instance(3, 2, 4, 0.3, 0.25, 19);
    const auto a = solve_exact(inst);
    const auto b = solve_exact_stationary(inst);
    EXPECT_EQ(a.best_value, b.best_value);
    EXPECT_EQ(*a.best_strategy, *b.best_strategy);
}

TEST(Stationary, ZeroCapacityAllZero) {
    const Instance inst = with_capacity_fraction(oracle::random_instance(3, 4, 3, 0.4, 0.25, 3), 0.0);
    const auto r = solve_exact_stationary(inst);
    EXPECT_EQ(*r.best_strategy, Strategy(3, 3, 0));
}

TEST(Stationary, NeverBeatsExact) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = oracle::random_instance(3, 5, 3, 0.4, 0.25, 50 + seed);
        const auto st = solve_exact_stationary(inst);
        const auto ex = solve_exact(inst);
        EXPECT_LE(st.best_value, ex.best_value);
        const auto& s = *st.best_strategy;
        for (std::size_t e = 1; e < s.epochs(); ++e)
            for (std::size_t i = 0; i < s.states(); ++i) EXPECT_EQ(s(e, i), s(0, i));
    }
}

TEST(Exact, JsonShape) {
    const auto r = solve_exact(oracle::single_state_example(10.0, 6.0));
    const json j = solve_result_to_json(r);
    EXPECT_EQ(j["status"], "Optimal");
    EXPECT_EQ(j["strategy"], json({{1}}));
    EXPECT_TRUE(j["f"].is_number());
}
