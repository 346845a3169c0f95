#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cmab/errors.hpp"
#include "cmab/feasibility.hpp"
#include "cmab/instance.hpp"
#include "cmab/schedule.hpp"
#include "cmab/strategy.hpp"

namespace cmab {

using Rational = boost::multiprecision::cpp_rational;

enum class Arithmetic { exact, floating };

struct OracleOptions {
    std::uint64_t max_horizon = 6;
    std::uint64_t max_nodes = 2'000'000;
    Arithmetic arithmetic = Arithmetic::exact;
    TieRule tie_rule = TieRule::lowest_index;
};

struct DeltaEventProbability {
    double delta;
    ArmSet delta_best;
    double probability;
    std::string exact;  // "p/q" in exact mode, empty otherwise
};

struct OracleResult {
    std::uint64_t horizon = 0;
    bool exact = false;
    std::uint64_t nodes = 0;
    std::vector<double> arm_probabilities;
    std::vector<std::string> arm_probabilities_exact;
    std::vector<DeltaEventProbability> events;
};

namespace detail {

template <class Number>
struct WeightedAtom {
    double value;
    Number prob;
};

// Every double is a dyadic rational, so the conversion to Rational is exact.
template <class Number>
Number to_number(double x) {
    return Number(x);
}

template <class Number>
std::vector<WeightedAtom<Number>> weighted_atoms(const Distribution& d) {
    std::vector<WeightedAtom<Number>> out;
    if (const auto* b = std::get_if<Bernoulli>(&d.kind())) {
        // P{1} = p exactly; P{0} = 1 - p computed in Number, not in double.
        const Number p = to_number<Number>(b->p);
        if (b->p < 1.0) out.push_back({0.0, Number(1) - p});
        if (b->p > 0.0) out.push_back({1.0, p});
        return out;
    }
    for (const auto& atom : d.atoms()) out.push_back({atom.value, to_number<Number>(atom.prob)});
    return out;
}

/// Depth-first walk over branch x arm x reward x cost outcomes. Keeps its own
/// count/sum bookkeeping so it shares no decision code with the sampler.
template <class Number>
class OutcomeTree {
public:
    OutcomeTree(const ProblemInstance& instance, const EpsilonSchedule& schedule, std::uint64_t horizon,
                TieRule tie_rule)
        : instance_(instance),
          schedule_(schedule),
          horizon_(horizon),
          tie_rule_(tie_rule),
          k_(instance.num_arms()),
          counts_(k_, 0),
          reward_sums_(k_, 0.0),
          cost_sums_(k_, 0.0),
          result_(k_, Number(0)) {
        for (const auto& arm : instance.arms()) {
            reward_atoms_.push_back(weighted_atoms<Number>(arm.reward));
            cost_atoms_.push_back(weighted_atoms<Number>(arm.cost));
        }
    }

    std::vector<Number> run() {
        expand(1, Number(1));
        return result_;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    std::vector<Number> law(std::uint64_t n) const {
        const Number eps = to_number<Number>(schedule_.at(n));
        const Number kk(static_cast<long long>(k_));
        std::vector<Number> p(k_, eps / kk);

        std::vector<ArmIndex> best;
        double best_value = 0.0;
        for (ArmIndex a = 0; a < k_; ++a) {
            if (counts_[a] == 0) continue;
            const double mean_cost = cost_sums_[a] / static_cast<double>(counts_[a]);
            if (!(mean_cost <= instance_.constraint_level())) continue;
            const double mean_reward = reward_sums_[a] / static_cast<double>(counts_[a]);
            if (best.empty() || mean_reward > best_value) {
                best = {a};
                best_value = mean_reward;
            } else if (mean_reward == best_value) {
                best.push_back(a);
            }
        }
        const Number greedy = Number(1) - eps;
        if (best.empty()) {
            for (auto& v : p) v += greedy / kk;
        } else if (tie_rule_ == TieRule::lowest_index) {
            p[best.front()] += greedy;
        } else {
            const Number share = greedy / Number(static_cast<long long>(best.size()));
            for (ArmIndex a : best) p[a] += share;
        }
        return p;
    }

    void expand(std::uint64_t n, const Number& path) {
        ++nodes_;
        const auto p = law(n);
        if (n == horizon_) {
            for (ArmIndex a = 0; a < k_; ++a) result_[a] += path * p[a];
            return;
        }
        for (ArmIndex a = 0; a < k_; ++a) {
            if (p[a] == Number(0)) continue;
            const Number via_arm = path * p[a];
            for (const auto& r : reward_atoms_[a]) {
                for (const auto& c : cost_atoms_[a]) {
                    const double saved_r = reward_sums_[a];
                    const double saved_c = cost_sums_[a];
                    ++counts_[a];
                    reward_sums_[a] += r.value;
                    cost_sums_[a] += c.value;
                    expand(n + 1, via_arm * r.prob * c.prob);
                    --counts_[a];
                    reward_sums_[a] = saved_r;
                    cost_sums_[a] = saved_c;
                }
            }
        }
    }

    const ProblemInstance& instance_;
    const EpsilonSchedule& schedule_;
    std::uint64_t horizon_;
    TieRule tie_rule_;
    std::size_t k_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> reward_sums_;
    std::vector<double> cost_sums_;
    std::vector<std::vector<WeightedAtom<Number>>> reward_atoms_;
    std::vector<std::vector<WeightedAtom<Number>>> cost_atoms_;
    std::vector<Number> result_;
    std::uint64_t nodes_ = 0;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class Number>
OracleResult finish(std::vector<Number> probs, const ProblemInstance& instance,
                    const std::vector<double>& deltas, std::uint64_t horizon, std::uint64_t nodes) {
    constexpr bool exact = std::is_same_v<Number, Rational>;
    OracleResult out;
    out.horizon = horizon;
    out.exact = exact;
    out.nodes = nodes;
    for (const auto& p : probs) {
        out.arm_probabilities.push_back(to_double(p));
        if constexpr (exact) out.arm_probabilities_exact.push_back(p.str());
    }
    for (double d : deltas) {
        DeltaEventProbability ev{d, delta_best_arms(instance, d), 0.0, {}};
        Number total(0);
        for (ArmIndex a : ev.delta_best) total += probs[a];
        ev.probability = to_double(total);
        if constexpr (exact) ev.exact = total.str();
        out.events.push_back(std::move(ev));
    }
    return out;
}

}  // namespace detail

/// Upper bound on the number of tree nodes visited for horizon t.
inline double outcome_tree_size(const ProblemInstance& instance, std::uint64_t t) {
    double branching = 0.0;
    for (const auto& arm : instance.arms())
        branching += static_cast<double>(arm.reward.atoms().size() * arm.cost.atoms().size());
    double total = 0.0, level = 1.0;
    for (std::uint64_t n = 0; n < t; ++n) {
        total += level;
        level *= branching;
    }
    return total;
}

/// Exact Pr{I_t = a} for every arm (and the delta-best event probability per
/// delta) under the constrained epsilon_t-greedy strategy, by enumerating the
/// full outcome tree. Finite-support instances and small t only.
inline OracleResult exact_selection_probability(const ProblemInstance& instance,
                                                const EpsilonSchedule& schedule, std::uint64_t t,
                                                const std::vector<double>& deltas,
                                                const OracleOptions& options = {}) {
    if (!instance.finite_support())
        throw ValidationError(ErrorCode::unsupported_distribution,
                              "exact oracle needs finite support; instance has a continuous support (beta) law");
    if (t < 1) throw ValidationError(ErrorCode::invalid_parameter, "oracle horizon must be >= 1");
    if (t > options.max_horizon)
        throw ValidationError(ErrorCode::tree_too_large,
                              "oracle horizon " + std::to_string(t) + " exceeds cap " +
                                  std::to_string(options.max_horizon));
    if (outcome_tree_size(instance, t) > static_cast<double>(options.max_nodes))
        throw ValidationError(ErrorCode::tree_too_large,
                              "outcome tree exceeds " + std::to_string(options.max_nodes) + " nodes");

    if (options.arithmetic == Arithmetic::exact) {
        detail::OutcomeTree<Rational> tree(instance, schedule, t, options.tie_rule);
        auto probs = tree.run();
        return detail::finish(std::move(probs), instance, deltas, t, tree.nodes());
    }
    detail::OutcomeTree<double> tree(instance, schedule, t, options.tie_rule);
    auto probs = tree.run();
    return detail::finish(std::move(probs), instance, deltas, t, tree.nodes());
}

}  // namespace cmab
