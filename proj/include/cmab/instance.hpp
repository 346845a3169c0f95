#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cmab/distribution.hpp"
#include "cmab/errors.hpp"

namespace cmab {

using ArmIndex = std::size_t;
using ArmSet = std::vector<ArmIndex>;  // sorted, unique

struct Arm {
    Distribution reward;
    Distribution cost;
    bool operator==(const Arm&) const = default;
};

struct Issue {
    ErrorCode code;
    std::string message;
};

/// Arms with reward/cost laws on [0,1] and the constraint level C.
class ProblemInstance {
public:
    ProblemInstance() = default;
    ProblemInstance(std::vector<Arm> arms, double constraint_level)
        : arms_(std::move(arms)), constraint_level_(constraint_level) {}

    std::size_t num_arms() const { return arms_.size(); }
    const std::vector<Arm>& arms() const { return arms_; }
    const Arm& arm(ArmIndex a) const { return arms_[a]; }
    double constraint_level() const { return constraint_level_; }

    double reward_mean(ArmIndex a) const { return arms_[a].reward.mean(); }
    double cost_mean(ArmIndex a) const { return arms_[a].cost.mean(); }

    std::vector<double> reward_means() const {
        std::vector<double> m;
        m.reserve(arms_.size());
        for (const auto& a : arms_) m.push_back(a.reward.mean());
        return m;
    }
    std::vector<double> cost_means() const {
        std::vector<double> m;
        m.reserve(arms_.size());
        for (const auto& a : arms_) m.push_back(a.cost.mean());
        return m;
    }

    bool finite_support() const {
        for (const auto& a : arms_)
            if (!a.reward.finite_support() || !a.cost.finite_support()) return false;
        return true;
    }

    bool operator==(const ProblemInstance&) const = default;

private:
    std::vector<Arm> arms_;
    double constraint_level_ = 0.0;
};

/// Every violated invariant, in arm order. Empty means valid.
inline std::vector<Issue> validate(const ProblemInstance& instance) {
    std::vector<Issue> issues;
    if (instance.num_arms() < 2)
        issues.push_back({ErrorCode::too_few_arms,
                          "instance needs at least 2 arms, got " + std::to_string(instance.num_arms())});
    if (!std::isfinite(instance.constraint_level()))
        issues.push_back({ErrorCode::invalid_parameter, "constraint_level must be finite"});

    bool laws_ok = true;
    for (std::size_t a = 0; a < instance.num_arms(); ++a) {
        const auto& arm = instance.arm(a);
        if (auto [code, msg] = arm.reward.first_issue(); !msg.empty()) {
            issues.push_back({code, "arm " + std::to_string(a) + " reward: " + msg});
            laws_ok = false;
        }
        if (auto [code, msg] = arm.cost.first_issue(); !msg.empty()) {
            issues.push_back({code, "arm " + std::to_string(a) + " cost: " + msg});
            laws_ok = false;
        }
    }

    if (laws_ok && instance.num_arms() > 0) {
        bool any_feasible = false;
        for (std::size_t a = 0; a < instance.num_arms(); ++a)
            any_feasible = any_feasible || instance.cost_mean(a) <= instance.constraint_level();
        if (!any_feasible)
            issues.push_back({ErrorCode::empty_feasible_set,
                              "empty feasible set: every arm has mean cost above constraint_level"});
    }
    return issues;
}

/// Throws ValidationError carrying the first issue's code.
inline void validate_or_throw(const ProblemInstance& instance) {
    auto issues = validate(instance);
    if (!issues.empty()) throw ValidationError(issues.front().code, issues.front().message);
}

inline ProblemInstance make_instance(std::vector<Arm> arms, double constraint_level) {
    ProblemInstance instance(std::move(arms), constraint_level);
    validate_or_throw(instance);
    return instance;
}

}  // namespace cmab
