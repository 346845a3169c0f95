#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cmab/errors.hpp"
#include "cmab/instance.hpp"

namespace cmab {

/// Arms whose true mean cost is at most C + kappa.
inline ArmSet feasible_set(const ProblemInstance& instance, double kappa) {
    ArmSet out;
    const double level = instance.constraint_level() + kappa;
    for (ArmIndex a = 0; a < instance.num_arms(); ++a)
        if (instance.cost_mean(a) <= level) out.push_back(a);
    return out;
}

/// Members of `arms` attaining the largest true mean reward.
inline ArmSet argmax_reward(const ProblemInstance& instance, const ArmSet& arms) {
    ArmSet best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (ArmIndex a : arms) {
        const double m = instance.reward_mean(a);
        if (m > best_value) {
            best.assign(1, a);
            best_value = m;
        } else if (m == best_value) {
            best.push_back(a);
        }
    }
    return best;
}

inline ArmSet optimal_feasible_arms(const ProblemInstance& instance) {
    return argmax_reward(instance, feasible_set(instance, 0.0));
}

/// Minimum reward-mean gap over distinct pairs of arms.
inline double rho(const ProblemInstance& instance) {
    const auto mu = instance.reward_means();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < mu.size(); ++a)
        for (std::size_t b = a + 1; b < mu.size(); ++b) best = std::min(best, std::abs(mu[a] - mu[b]));
    return best;
}

/// Minimum distance of a true mean cost from the constraint level.
inline double eta(const ProblemInstance& instance) {
    double best = std::numeric_limits<double>::infinity();
    for (ArmIndex a = 0; a < instance.num_arms(); ++a)
        best = std::min(best, std::abs(instance.cost_mean(a) - instance.constraint_level()));
    return best;
}

/// Arms that maximize the true mean reward over at least one set S with
/// A_f^{-delta} in S in A_f^{delta}.
///
/// Equivalent to: a in A_f^{delta} and mu_a >= max over A_f^{-delta}
/// (an empty A_f^{-delta} imposes no condition).
inline ArmSet delta_best_arms(const ProblemInstance& instance, double delta) {
    const ArmSet inner = feasible_set(instance, -delta);
    const ArmSet outer = feasible_set(instance, delta);
    double floor = -std::numeric_limits<double>::infinity();
    for (ArmIndex b : inner) floor = std::max(floor, instance.reward_mean(b));
    ArmSet out;
    for (ArmIndex a : outer)
        if (instance.reward_mean(a) >= floor) out.push_back(a);
    return out;
}

/// Same set as delta_best_arms, by enumerating every sandwiched S.
inline ArmSet delta_best_arms_bruteforce(const ProblemInstance& instance, double delta) {
    if (instance.num_arms() > 20)
        throw ValidationError(ErrorCode::instance_too_large,
                              "subset enumeration supports at most 20 arms");
    const ArmSet inner = feasible_set(instance, -delta);
    const ArmSet outer = feasible_set(instance, delta);
    ArmSet gap;
    std::set_difference(outer.begin(), outer.end(), inner.begin(), inner.end(), std::back_inserter(gap));

    std::vector<bool> hit(instance.num_arms(), false);
    const std::uint64_t subsets = std::uint64_t{1} << gap.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        ArmSet s = inner;
        for (std::size_t i = 0; i < gap.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) s.push_back(gap[i]);
        std::sort(s.begin(), s.end());
        for (ArmIndex a : argmax_reward(instance, s)) hit[a] = true;
    }
    ArmSet out;
    for (ArmIndex a = 0; a < hit.size(); ++a)
        if (hit[a]) out.push_back(a);
    return out;
}

struct OffsetFeasibility {
    double kappa;
    ArmSet arms;
};

/// Ground-truth difficulty summary of an instance.
struct FeasibilityProfile {
    std::vector<OffsetFeasibility> feasible_sets;
    double rho = 0.0;
    double eta = 0.0;
    ArmSet optimal_feasible_arms;
    double optimal_reward = 0.0;
};

inline FeasibilityProfile analyze(const ProblemInstance& instance, const std::vector<double>& kappas) {
    FeasibilityProfile p;
    for (double k : kappas) p.feasible_sets.push_back({k, feasible_set(instance, k)});
    p.rho = rho(instance);
    p.eta = eta(instance);
    p.optimal_feasible_arms = optimal_feasible_arms(instance);
    p.optimal_reward = p.optimal_feasible_arms.empty()
                           ? 0.0
                           : instance.reward_mean(p.optimal_feasible_arms.front());
    return p;
}

inline bool contains(const ArmSet& set, ArmIndex a) {
    return std::binary_search(set.begin(), set.end(), a);
}

}  // namespace cmab
