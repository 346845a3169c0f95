#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cmab/bounds.hpp"
#include "cmab/errors.hpp"
#include "cmab/feasibility.hpp"
#include "cmab/instance.hpp"
#include "cmab/random.hpp"
#include "cmab/schedule.hpp"
#include "cmab/strategy.hpp"

namespace cmab {

struct ExperimentConfig {
    ProblemInstance instance;
    StrategyKind strategy = StrategyKind::constrained_eps_greedy;
    EpsilonSchedule schedule;
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> deltas;
    std::uint64_t replications = 1;
    std::uint64_t master_seed = 0;
    TieRule tie_rule = TieRule::lowest_index;
    double wilson_z = 3.0;

    std::uint64_t horizon() const { return checkpoints.empty() ? 0 : checkpoints.back(); }
    bool operator==(const ExperimentConfig&) const = default;
};

/// Every violated invariant of the experiment, instance included.
inline std::vector<Issue> validate(const ExperimentConfig& config) {
    auto issues = validate(config.instance);
    if (auto msg = config.schedule.issue(); !msg.empty()) issues.push_back({ErrorCode::invalid_schedule, msg});
    if (config.checkpoints.empty())
        issues.push_back({ErrorCode::invalid_experiment, "checkpoints must be nonempty"});
    for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
        if (config.checkpoints[i] < 1)
            issues.push_back({ErrorCode::invalid_experiment, "checkpoints must be >= 1"});
        if (i > 0 && config.checkpoints[i] <= config.checkpoints[i - 1])
            issues.push_back({ErrorCode::invalid_experiment, "checkpoints must be strictly increasing"});
    }
    if (config.deltas.empty()) issues.push_back({ErrorCode::invalid_experiment, "deltas must be nonempty"});
    for (double d : config.deltas)
        if (!(d >= 0.0) || !std::isfinite(d))
            issues.push_back({ErrorCode::invalid_experiment, "deltas must be finite and >= 0"});
    if (config.replications < 1) issues.push_back({ErrorCode::invalid_experiment, "replications must be >= 1"});
    if (!(config.wilson_z > 0.0) || !std::isfinite(config.wilson_z))
        issues.push_back({ErrorCode::invalid_experiment, "wilson_z must be > 0"});
    return issues;
}

/// Wilson score interval for a binomial proportion, clipped to [0, 1].
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) throw ValidationError(ErrorCode::invalid_parameter, "wilson_interval requires n >= 1");
    if (successes > n) throw ValidationError(ErrorCode::invalid_parameter, "successes exceed trials");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    double lo = std::clamp(center - half, 0.0, 1.0);
    double hi = std::clamp(center + half, 0.0, 1.0);
    // Rounding at the extremes can push the bounds past p_hat.
    if (successes == 0) lo = 0.0;
    if (successes == n) hi = 1.0;
    return {std::min(lo, p), std::max(hi, p)};
}

/// mu* T - sum over plays of the chosen arm's true mean, mu* over A_f.
inline double regret_metric(std::span<const ArmIndex> trajectory, const ProblemInstance& instance) {
    const auto best = optimal_feasible_arms(instance);
    const double mu_star = instance.reward_mean(best.front());
    double collected = 0.0;
    for (ArmIndex a : trajectory) collected += instance.reward_mean(a);
    return mu_star * static_cast<double>(trajectory.size()) - collected;
}

inline double regret_metric(std::span<const SelectionEvent> events, const ProblemInstance& instance) {
    std::vector<ArmIndex> arms;
    arms.reserve(events.size());
    for (const auto& e : events) arms.push_back(e.arm);
    return regret_metric(std::span<const ArmIndex>(arms), instance);
}

struct CheckpointRecord {
    std::uint64_t t = 0;
    ArmIndex arm = 0;
    Branch branch = Branch::random;
    std::vector<bool> event;  // per delta: arm chosen at t is delta-best
    double cumulative_reward = 0.0;
    double cumulative_cost = 0.0;
    std::vector<std::uint64_t> play_counts;  // T_a(t)

    bool operator==(const CheckpointRecord&) const = default;
};

struct TrialRecord {
    std::uint64_t replication = 0;
    std::vector<CheckpointRecord> checkpoints;
    bool operator==(const TrialRecord&) const = default;
};

namespace detail {

inline std::vector<std::vector<char>> delta_best_masks(const ExperimentConfig& config) {
    std::vector<std::vector<char>> masks;
    for (double d : config.deltas) {
        std::vector<char> m(config.instance.num_arms(), 0);
        for (ArmIndex a : delta_best_arms(config.instance, d)) m[a] = 1;
        masks.push_back(std::move(m));
    }
    return masks;
}

inline TrialRecord run_trial_with(const ExperimentConfig& config, std::uint64_t replication,
                                  const std::vector<std::vector<char>>& masks,
                                  std::vector<SelectionEvent>* log) {
    RandomSource rng = RandomSource::for_stream(config.master_seed, replication);
    StrategyState state(config.instance.num_arms());
    TrialRecord rec;
    rec.replication = replication;
    rec.checkpoints.reserve(config.checkpoints.size());
    if (log) log->reserve(config.horizon());

    double reward_total = 0.0, cost_total = 0.0;
    std::size_t next = 0;
    for (std::uint64_t t = 1; t <= config.horizon(); ++t) {
        const SelectionEvent ev =
            play(config.instance, state, config.strategy, config.schedule, rng, config.tie_rule);
        reward_total += ev.reward;
        cost_total += ev.cost;
        if (log) log->push_back(ev);
        if (t == config.checkpoints[next]) {
            CheckpointRecord cp;
            cp.t = t;
            cp.arm = ev.arm;
            cp.branch = ev.branch;
            for (const auto& m : masks) cp.event.push_back(m[ev.arm] != 0);
            cp.cumulative_reward = reward_total;
            cp.cumulative_cost = cost_total;
            cp.play_counts.resize(state.num_arms());
            for (ArmIndex a = 0; a < state.num_arms(); ++a) cp.play_counts[a] = state.count(a);
            rec.checkpoints.push_back(std::move(cp));
            ++next;
        }
    }
    return rec;
}

}  // namespace detail

/// One trajectory to the last checkpoint. Deterministic in
/// (master_seed, replication). Optionally captures the full event log.
inline TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t replication,
                             std::vector<SelectionEvent>* log = nullptr) {
    return detail::run_trial_with(config, replication, detail::delta_best_masks(config), log);
}

struct MonteCarloEstimate {
    std::uint64_t t = 0;
    double delta = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t replications = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double bound_raw = 0.0;
    double bound_clamped = 0.0;
    bool bound_vacuous = true;
    bool dominated = false;
};

struct CheckpointSummary {
    std::uint64_t t = 0;
    std::vector<double> arm_frequency;  // Pr{I_t = a} estimate
    double mean_regret = 0.0;
};

struct ExperimentResult {
    std::vector<MonteCarloEstimate> estimates;  // checkpoint-major, then delta
    std::vector<CheckpointSummary> checkpoints;
    FeasibilityProfile profile;
    std::vector<ArmSet> delta_best;  // per delta
};

namespace detail {

struct Tally {
    std::vector<std::uint64_t> successes;   // [checkpoint * deltas + d]
    std::vector<std::uint64_t> arm_hits;    // [checkpoint * arms + a]
    std::vector<std::uint64_t> play_counts; // [checkpoint * arms + a]

    Tally(std::size_t cps, std::size_t ds, std::size_t arms)
        : successes(cps * ds, 0), arm_hits(cps * arms, 0), play_counts(cps * arms, 0) {}

    void add(const TrialRecord& r, std::size_t ds, std::size_t arms) {
        for (std::size_t c = 0; c < r.checkpoints.size(); ++c) {
            const auto& cp = r.checkpoints[c];
            for (std::size_t d = 0; d < ds; ++d) successes[c * ds + d] += cp.event[d] ? 1 : 0;
            ++arm_hits[c * arms + cp.arm];
            for (std::size_t a = 0; a < arms; ++a) play_counts[c * arms + a] += cp.play_counts[a];
        }
    }

    void merge(const Tally& o) {
        for (std::size_t i = 0; i < successes.size(); ++i) successes[i] += o.successes[i];
        for (std::size_t i = 0; i < arm_hits.size(); ++i) arm_hits[i] += o.arm_hits[i];
        for (std::size_t i = 0; i < play_counts.size(); ++i) play_counts[i] += o.play_counts[i];
    }
};

}  // namespace detail

/// Replicates trials on `workers` threads and aggregates per checkpoint and
/// delta. The merge is integer addition, so results do not depend on the
/// worker count or scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& config, unsigned workers = 1) {
    if (auto issues = validate(config); !issues.empty())
        throw ValidationError(issues.front().code, issues.front().message);

    const std::size_t cps = config.checkpoints.size();
    const std::size_t ds = config.deltas.size();
    const std::size_t arms = config.instance.num_arms();
    const auto masks = detail::delta_best_masks(config);

    workers = std::max(1u, workers);
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, config.replications));
    std::vector<detail::Tally> tallies(workers, detail::Tally(cps, ds, arms));
    std::atomic<std::uint64_t> next{0};
    auto work = [&](unsigned w) {
        for (std::uint64_t i = next++; i < config.replications; i = next++)
            tallies[w].add(detail::run_trial_with(config, i, masks, nullptr), ds, arms);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    detail::Tally total(cps, ds, arms);
    for (const auto& t : tallies) total.merge(t);

    ExperimentResult out;
    out.profile = analyze(config.instance, config.deltas);
    for (double d : config.deltas) out.delta_best.push_back(delta_best_arms(config.instance, d));

    const double r = static_cast<double>(config.replications);
    const double mu_star = out.profile.optimal_reward;
    ExplorationMass mass(config.schedule, arms);
    for (std::size_t c = 0; c < cps; ++c) {
        const std::uint64_t t = config.checkpoints[c];
        mass.advance_to(t);
        for (std::size_t d = 0; d < ds; ++d) {
            MonteCarloEstimate e;
            e.t = t;
            e.delta = config.deltas[d];
            e.successes = total.successes[c * ds + d];
            e.replications = config.replications;
            e.p_hat = static_cast<double>(e.successes) / r;
            std::tie(e.ci_low, e.ci_high) = wilson_interval(e.successes, e.replications, config.wilson_z);
            const auto b = theorem1_bound_at(arms, e.delta, out.profile.rho, config.schedule.at(t), mass.x());
            e.bound_raw = b.raw_product;
            e.bound_clamped = b.clamped;
            e.bound_vacuous = b.vacuous;
            e.dominated = e.ci_low >= e.bound_clamped || e.p_hat >= e.bound_clamped;
            out.estimates.push_back(e);
        }
        CheckpointSummary s;
        s.t = t;
        double collected = 0.0;
        for (std::size_t a = 0; a < arms; ++a) {
            s.arm_frequency.push_back(static_cast<double>(total.arm_hits[c * arms + a]) / r);
            collected += config.instance.reward_mean(a) * static_cast<double>(total.play_counts[c * arms + a]) / r;
        }
        s.mean_regret = mu_star * static_cast<double>(t) - collected;
        out.checkpoints.push_back(std::move(s));
    }
    return out;
}

inline void write_results_csv(std::ostream& os, const std::vector<MonteCarloEstimate>& estimates) {
    os << "t,delta,successes,R,p_hat,ci_low,ci_high,bound_raw,bound_clamped,dominated\n";
    for (const auto& e : estimates)
        os << e.t << ',' << format_double(e.delta) << ',' << e.successes << ',' << e.replications << ','
           << format_double(e.p_hat) << ',' << format_double(e.ci_low) << ',' << format_double(e.ci_high) << ','
           << format_double(e.bound_raw) << ',' << format_double(e.bound_clamped) << ','
           << format_bool(e.dominated) << '\n';
}

}  // namespace cmab
