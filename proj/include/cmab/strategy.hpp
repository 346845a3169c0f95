#pragma once

#include <cassert>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmab/errors.hpp"
#include "cmab/format.hpp"
#include "cmab/instance.hpp"
#include "cmab/random.hpp"
#include "cmab/schedule.hpp"

namespace cmab {

enum class Branch { greedy, greedy_fallback_uniform, random };

constexpr std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::greedy: return "greedy";
        case Branch::greedy_fallback_uniform: return "greedy_fallback_uniform";
        case Branch::random: return "random";
    }
    return "unknown";
}

enum class TieRule { lowest_index, uniform };

constexpr std::string_view to_string(TieRule r) {
    return r == TieRule::lowest_index ? "lowest_index" : "uniform";
}

inline TieRule parse_tie_rule(std::string_view s) {
    if (s == "lowest_index") return TieRule::lowest_index;
    if (s == "uniform") return TieRule::uniform;
    throw ValidationError(ErrorCode::invalid_parameter,
                          "unknown tie rule '" + std::string(s) + "' (expected lowest_index or uniform)");
}

enum class StrategyKind { constrained_eps_greedy, uniform, unconstrained_eps_greedy };

constexpr std::string_view to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::constrained_eps_greedy: return "constrained_eps_greedy";
        case StrategyKind::uniform: return "uniform";
        case StrategyKind::unconstrained_eps_greedy: return "unconstrained_eps_greedy";
    }
    return "unknown";
}

inline StrategyKind parse_strategy_kind(std::string_view s) {
    if (s == "constrained_eps_greedy") return StrategyKind::constrained_eps_greedy;
    if (s == "uniform") return StrategyKind::uniform;
    if (s == "unconstrained_eps_greedy") return StrategyKind::unconstrained_eps_greedy;
    throw ValidationError(ErrorCode::invalid_parameter,
                          "unknown strategy kind '" + std::string(s) +
                              "' (expected constrained_eps_greedy, uniform or unconstrained_eps_greedy)");
}

/// Per-arm play counts and running sample means after the completed plays.
///
/// Sums are stored and means are taken as sum / count, so X-bar and Y-bar are
/// the arithmetic means of the logged samples. Unplayed arms report 0 for both.
class StrategyState {
public:
    explicit StrategyState(std::size_t num_arms)
        : counts_(num_arms, 0), reward_sums_(num_arms, 0.0), cost_sums_(num_arms, 0.0) {}

    /// State with given counts and means (tests and diagnostics).
    static StrategyState from_summary(std::span<const std::uint64_t> counts,
                                      std::span<const double> mean_rewards,
                                      std::span<const double> mean_costs) {
        StrategyState s(counts.size());
        for (std::size_t a = 0; a < counts.size(); ++a) {
            s.counts_[a] = counts[a];
            s.reward_sums_[a] = mean_rewards[a] * static_cast<double>(counts[a]);
            s.cost_sums_[a] = mean_costs[a] * static_cast<double>(counts[a]);
            s.plays_ += counts[a];
        }
        return s;
    }

    std::size_t num_arms() const { return counts_.size(); }
    std::uint64_t count(ArmIndex a) const { return counts_[a]; }
    std::uint64_t plays() const { return plays_; }
    /// Time index of the next selection.
    std::uint64_t time() const { return plays_ + 1; }

    double mean_reward(ArmIndex a) const {
        return counts_[a] == 0 ? 0.0 : reward_sums_[a] / static_cast<double>(counts_[a]);
    }
    double mean_cost(ArmIndex a) const {
        return counts_[a] == 0 ? 0.0 : cost_sums_[a] / static_cast<double>(counts_[a]);
    }

    void record(ArmIndex arm, double reward, double cost) {
        if (!(reward >= 0.0 && reward <= 1.0) || !(cost >= 0.0 && cost <= 1.0))
            throw ValidationError(ErrorCode::out_of_support, "reward and cost must lie in [0,1]");
        if (arm >= counts_.size())
            throw ValidationError(ErrorCode::invalid_parameter, "arm index out of range");
        ++counts_[arm];
        reward_sums_[arm] += reward;
        cost_sums_[arm] += cost;
        ++plays_;
    }

    bool operator==(const StrategyState&) const = default;

private:
    std::vector<std::uint64_t> counts_;
    std::vector<double> reward_sums_;
    std::vector<double> cost_sums_;
    std::uint64_t plays_ = 0;
};

struct Selection {
    ArmIndex arm;
    Branch branch;
    bool operator==(const Selection&) const = default;
};

struct SelectionEvent {
    std::uint64_t t;
    ArmIndex arm;
    Branch branch;
    double reward;
    double cost;
    bool operator==(const SelectionEvent&) const = default;
};

/// Returns a copy with one more observation for `arm`.
inline StrategyState update(StrategyState state, ArmIndex arm, double reward, double cost) {
    state.record(arm, reward, cost);
    return state;
}

inline bool estimated_feasible(const StrategyState& state, ArmIndex a, double constraint_level) {
    return state.count(a) != 0 && state.mean_cost(a) <= constraint_level;
}

/// A_t: played arms whose sample mean cost is at most C.
inline ArmSet current_feasible_estimate(const StrategyState& state, double constraint_level) {
    ArmSet out;
    for (ArmIndex a = 0; a < state.num_arms(); ++a)
        if (estimated_feasible(state, a, constraint_level)) out.push_back(a);
    return out;
}

namespace detail {

/// Arms attaining the maximal sample mean reward among arms passing `eligible`.
template <class Eligible>
ArmSet greedy_maximizers(const StrategyState& state, Eligible&& eligible) {
    ArmSet best;
    double best_value = 0.0;
    for (ArmIndex a = 0; a < state.num_arms(); ++a) {
        if (!eligible(a)) continue;
        const double v = state.mean_reward(a);
        if (best.empty() || v > best_value) {
            best.assign(1, a);
            best_value = v;
        } else if (v == best_value) {
            best.push_back(a);
        }
    }
    return best;
}

template <class Eligible>
Selection greedy_or_fallback(const StrategyState& state, TieRule tie_rule, RandomSource& rng,
                             Eligible&& eligible) {
    // Single pass that avoids allocating in the common lowest-index case.
    std::size_t ties = 0;
    ArmIndex first = 0;
    double best_value = 0.0;
    for (ArmIndex a = 0; a < state.num_arms(); ++a) {
        if (!eligible(a)) continue;
        const double v = state.mean_reward(a);
        if (ties == 0 || v > best_value) {
            first = a;
            best_value = v;
            ties = 1;
        } else if (v == best_value) {
            ++ties;
        }
    }
    if (ties == 0) return {rng.uniform_index(state.num_arms()), Branch::greedy_fallback_uniform};
    if (tie_rule == TieRule::lowest_index || ties == 1) return {first, Branch::greedy};

    std::size_t pick = rng.uniform_index(ties);
    for (ArmIndex a = first; a < state.num_arms(); ++a) {
        if (eligible(a) && state.mean_reward(a) == best_value) {
            if (pick == 0) return {a, Branch::greedy};
            --pick;
        }
    }
    return {first, Branch::greedy};
}

}  // namespace detail

/// Greedy step of the constrained rule for epsilon = 0: argmax of X-bar
/// over A_t, or uniform over all arms when A_t is empty.
inline Selection greedy_select(const StrategyState& state, double constraint_level, TieRule tie_rule,
                               RandomSource& rng) {
    return detail::greedy_or_fallback(state, tie_rule, rng, [&](ArmIndex a) {
        return estimated_feasible(state, a, constraint_level);
    });
}

/// Constrained epsilon_t-greedy selection at time t.
///
/// Draw order is fixed: one uniform decides the branch, then at most one
/// uniform picks the arm (random branch, empty A_t, or uniform tie-break).
inline Selection select_arm(const StrategyState& state, const EpsilonSchedule& schedule, std::uint64_t t,
                            double constraint_level, RandomSource& rng,
                            TieRule tie_rule = TieRule::lowest_index) {
    assert(t == state.time());
    if (rng.bernoulli(schedule.at(t))) return {rng.uniform_index(state.num_arms()), Branch::random};
    return greedy_select(state, constraint_level, tie_rule, rng);
}

/// Exact law of select_arm for a fixed state and exploration probability.
inline std::vector<double> selection_probabilities(const StrategyState& state, double epsilon,
                                                   double constraint_level,
                                                   TieRule tie_rule = TieRule::lowest_index) {
    const std::size_t n = state.num_arms();
    std::vector<double> p(n, epsilon / static_cast<double>(n));
    const ArmSet best = detail::greedy_maximizers(
        state, [&](ArmIndex a) { return estimated_feasible(state, a, constraint_level); });
    if (best.empty()) {
        for (auto& v : p) v += (1.0 - epsilon) / static_cast<double>(n);
    } else if (tie_rule == TieRule::lowest_index) {
        p[best.front()] += 1.0 - epsilon;
    } else {
        for (ArmIndex a : best) p[a] += (1.0 - epsilon) / static_cast<double>(best.size());
    }
    return p;
}

/// Comparison baselines. `epsilon` may be 0 here (pure greedy); the
/// unconstrained variant ignores costs and maximizes X-bar over played arms.
inline Selection baseline_select(const StrategyState& state, double epsilon, StrategyKind kind,
                                 RandomSource& rng, TieRule tie_rule = TieRule::lowest_index) {
    switch (kind) {
        case StrategyKind::uniform:
            return {rng.uniform_index(state.num_arms()), Branch::random};
        case StrategyKind::unconstrained_eps_greedy:
            if (rng.bernoulli(epsilon)) return {rng.uniform_index(state.num_arms()), Branch::random};
            return detail::greedy_or_fallback(state, tie_rule, rng,
                                              [&](ArmIndex a) { return state.count(a) != 0; });
        case StrategyKind::constrained_eps_greedy:
            break;
    }
    throw ValidationError(ErrorCode::invalid_parameter,
                          "baseline_select: constrained_eps_greedy is not a baseline kind");
}

/// Play the chosen arm: reward then cost drawn independently, then update.
inline SelectionEvent play_arm(const ProblemInstance& instance, StrategyState& state, Selection sel,
                               RandomSource& rng) {
    const std::uint64_t t = state.time();
    const auto& arm = instance.arm(sel.arm);
    const double reward = arm.reward.sample(rng);
    const double cost = arm.cost.sample(rng);
    state.record(sel.arm, reward, cost);
    return {t, sel.arm, sel.branch, reward, cost};
}

/// One iteration of the constrained epsilon_t-greedy loop.
inline SelectionEvent step(const ProblemInstance& instance, StrategyState& state,
                           const EpsilonSchedule& schedule, RandomSource& rng,
                           TieRule tie_rule = TieRule::lowest_index) {
    const Selection sel =
        select_arm(state, schedule, state.time(), instance.constraint_level(), rng, tie_rule);
    return play_arm(instance, state, sel, rng);
}

/// One iteration for any strategy kind.
inline SelectionEvent play(const ProblemInstance& instance, StrategyState& state, StrategyKind kind,
                           const EpsilonSchedule& schedule, RandomSource& rng,
                           TieRule tie_rule = TieRule::lowest_index) {
    if (kind == StrategyKind::constrained_eps_greedy) return step(instance, state, schedule, rng, tie_rule);
    const Selection sel = baseline_select(state, schedule.at(state.time()), kind, rng, tie_rule);
    return play_arm(instance, state, sel, rng);
}

/// Rebuilds the state from an event log.
inline StrategyState replay(std::size_t num_arms, std::span<const SelectionEvent> events) {
    StrategyState s(num_arms);
    for (const auto& e : events) s.record(e.arm, e.reward, e.cost);
    return s;
}

inline void write_events_csv(std::ostream& os, std::span<const SelectionEvent> events) {
    os << "t,arm,branch,reward,cost\n";
    for (const auto& e : events)
        os << e.t << ',' << e.arm << ',' << to_string(e.branch) << ',' << format_double(e.reward) << ','
           << format_double(e.cost) << '\n';
}

}  // namespace cmab
