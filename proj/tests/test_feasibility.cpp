#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cmab/feasibility.hpp"
#include "test_support.hpp"

using namespace cmab;
using cmab::testing::point_instance;

namespace {

// mu = (0.9, 0.8, 0.5), cost = (0.7, 0.4, 0.3), C = 0.5
ProblemInstance example() { return point_instance({0.9, 0.8, 0.5}, {0.7, 0.4, 0.3}, 0.5); }

bool subset(const ArmSet& a, const ArmSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

TEST(FeasibleSet, Examples) {
    const auto inst = example();
    EXPECT_EQ(feasible_set(inst, 0.0), (ArmSet{1, 2}));
    EXPECT_EQ(feasible_set(inst, 0.1), (ArmSet{1, 2}));
    EXPECT_EQ(feasible_set(inst, -0.1), (ArmSet{1, 2}));  // C + kappa = 0.4 and the boundary counts
    EXPECT_EQ(feasible_set(inst, -0.15), ArmSet{2});
    EXPECT_EQ(feasible_set(inst, 0.5), (ArmSet{0, 1, 2}));
}

TEST(FeasibleSet, MonotoneInKappa) {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = cmab::testing::random_instance(gen, 8, false);
        ArmSet prev;
        for (int i = -12; i <= 12; ++i) {
            const auto cur = feasible_set(inst, i / 10.0);
            EXPECT_TRUE(subset(prev, cur));
            prev = cur;
        }
    }
}

TEST(Rho, Examples) {
    EXPECT_NEAR(rho(point_instance({0.9, 0.8, 0.5}, {0, 0, 0}, 0.5)), 0.1, 1e-15);
    EXPECT_EQ(rho(point_instance({0.5, 0.5}, {0, 0}, 0.5)), 0.0);
    EXPECT_EQ(rho(point_instance({0.0, 1.0}, {0, 0}, 0.5)), 1.0);
}

TEST(Eta, Examples) {
    EXPECT_NEAR(eta(example()), 0.1, 1e-15);
    EXPECT_EQ(eta(point_instance({0.1, 0.2}, {0.5, 0.1}, 0.5)), 0.0);
    EXPECT_NEAR(eta(point_instance({0.1, 0.2}, {0.9, 0.9}, 0.5)), 0.4, 1e-15);
}

TEST(DeltaBest, Examples) {
    const auto inst = example();
    EXPECT_EQ(delta_best_arms(inst, 0.0), ArmSet{1});
    EXPECT_EQ(delta_best_arms(inst, 0.1), ArmSet{1});
    // A_f^{-0.25} is empty and A_f^{0.25} = {0, 1, 2} (cost 0.7 <= 0.75), so every arm qualifies.
    EXPECT_EQ(feasible_set(inst, -0.25), ArmSet{});
    EXPECT_EQ(feasible_set(inst, 0.25), (ArmSet{0, 1, 2}));
    EXPECT_EQ(delta_best_arms(inst, 0.25), (ArmSet{0, 1, 2}));
    // A_f^{-0.15} = {2} sets the floor at 0.5; A_f^{0.15} = {1, 2}.
    EXPECT_EQ(delta_best_arms(inst, 0.15), (ArmSet{1, 2}));
    EXPECT_EQ(delta_best_arms(inst, 0.19), (ArmSet{1, 2}));
}

TEST(DeltaBest, BruteForceMatchesExamples) {
    const auto inst = example();
    for (double d : {0.0, 0.1, 0.15, 0.25, 1.0})
        EXPECT_EQ(delta_best_arms_bruteforce(inst, d), delta_best_arms(inst, d)) << d;
}

TEST(DeltaBest, BruteForceRejectsLargeInstances) {
    std::vector<double> r(21, 0.5), c(21, 0.1);
    EXPECT_THROW(delta_best_arms_bruteforce(point_instance(r, c, 0.5), 0.1), ValidationError);
}

TEST(DeltaBest, CharacterizationMatchesBruteForceOnRandomInstances) {
    std::mt19937_64 gen(32);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = cmab::testing::random_instance(gen, 8, false);
        const double e = eta(inst);
        for (double d : {0.0, e / 2, e, 2 * e, 1.0, e - 1e-9, e + 1e-9}) {
            if (d < 0) continue;
            EXPECT_EQ(delta_best_arms(inst, d), delta_best_arms_bruteforce(inst, d));
        }
    }
}

TEST(DeltaBest, ZeroDeltaIsArgmaxOverFeasible) {
    std::mt19937_64 gen(33);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = cmab::testing::random_instance(gen, 8, false);
        EXPECT_EQ(delta_best_arms(inst, 0.0), optimal_feasible_arms(inst));
    }
}

TEST(DeltaBest, LargeDeltaContainsGlobalArgmax) {
    std::mt19937_64 gen(34);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = cmab::testing::random_instance(gen, 8, false);
        ArmSet all(inst.num_arms());
        std::iota(all.begin(), all.end(), 0);
        EXPECT_EQ(feasible_set(inst, 1.0), all);
        EXPECT_TRUE(subset(argmax_reward(inst, all), delta_best_arms(inst, 1.5)));
    }
}

TEST(Profile, Invariants) {
    std::mt19937_64 gen(35);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = cmab::testing::random_instance(gen, 6, false);
        const auto p = analyze(inst, {-0.2, 0.0, 0.1, 0.3});
        ASSERT_EQ(p.feasible_sets.size(), 4u);
        for (std::size_t i = 1; i < p.feasible_sets.size(); ++i)
            EXPECT_TRUE(subset(p.feasible_sets[i - 1].arms, p.feasible_sets[i].arms));
        ASSERT_FALSE(p.optimal_feasible_arms.empty());
        EXPECT_TRUE(subset(p.optimal_feasible_arms, feasible_set(inst, 0.0)));
        for (ArmIndex a : p.optimal_feasible_arms) EXPECT_EQ(inst.reward_mean(a), p.optimal_reward);
        for (ArmIndex a : feasible_set(inst, 0.0)) EXPECT_LE(inst.reward_mean(a), p.optimal_reward);
    }
}
