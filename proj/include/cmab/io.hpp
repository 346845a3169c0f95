#pragma once

#include <chrono>
#include <ctime>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmab/bounds.hpp"
#include "cmab/config.hpp"
#include "cmab/feasibility.hpp"
#include "cmab/format.hpp"
#include "cmab/harness.hpp"
#include "cmab/oracle.hpp"

namespace cmab {

inline json to_json(const FeasibilityProfile& p) {
    json sets = json::array();
    for (const auto& s : p.feasible_sets) sets.push_back({{"kappa", s.kappa}, {"arms", s.arms}});
    return {{"rho", p.rho},
            {"eta", p.eta},
            {"optimal_feasible_arms", p.optimal_feasible_arms},
            {"optimal_reward", p.optimal_reward},
            {"feasible_sets", sets}};
}

inline json to_json(const OracleResult& r) {
    json events = json::array();
    for (const auto& e : r.events) {
        json ev = {{"delta", e.delta}, {"delta_best", e.delta_best}, {"probability", e.probability}};
        if (r.exact) ev["exact"] = e.exact;
        events.push_back(ev);
    }
    json out = {{"horizon", r.horizon},
                {"arithmetic", r.exact ? "exact" : "floating"},
                {"nodes", r.nodes},
                {"arm_probabilities", r.arm_probabilities}};
    if (r.exact) out["arm_probabilities_exact"] = r.arm_probabilities_exact;
    out["events"] = events;
    return out;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// Summary document. Only "metadata" varies between identical runs.
inline json summary_json(const ConfigFile& cfg, const ExperimentResult& result, const json& metadata) {
    json estimates = json::array();
    for (const auto& e : result.estimates)
        estimates.push_back({{"t", e.t},
                             {"delta", e.delta},
                             {"successes", e.successes},
                             {"replications", e.replications},
                             {"p_hat", e.p_hat},
                             {"ci_low", e.ci_low},
                             {"ci_high", e.ci_high},
                             {"bound_raw", e.bound_raw},
                             {"bound_clamped", e.bound_clamped},
                             {"bound_vacuous", e.bound_vacuous},
                             {"dominated", e.dominated}});
    json checkpoints = json::array();
    for (const auto& c : result.checkpoints)
        checkpoints.push_back({{"t", c.t}, {"arm_frequency", c.arm_frequency}, {"mean_regret", c.mean_regret}});

    bool all_dominated = true;
    for (const auto& e : result.estimates) all_dominated = all_dominated && e.dominated;

    json delta_best = json::array();
    for (std::size_t d = 0; d < result.delta_best.size(); ++d)
        delta_best.push_back({{"delta", cfg.experiment.deltas[d]}, {"arms", result.delta_best[d]}});

    return {{"config", to_json(cfg)},
            {"profile", to_json(result.profile)},
            {"delta_best", delta_best},
            {"all_dominated", all_dominated},
            {"checkpoints", checkpoints},
            {"estimates", estimates},
            {"metadata", metadata}};
}

struct BoundRow {
    BoundReport theorem;
    std::optional<CorollaryReport> derived;
    std::optional<CorollaryReport> literal;
};

constexpr const char* bounds_csv_header =
    "t,x_t,epsilon_t,factor_eps,factor_count,factor_feas,factor_reward,raw,clamped,vacuous,"
    "corollary_alpha,corollary_beta,corollary_derived_consistent,corollary_paper_literal";

/// One row per t. Corollary columns are empty when the schedule is not
/// inverse-time or t < k; alpha/beta follow the selected variant.
inline void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows, CorollaryVariant variant) {
    os << bounds_csv_header << '\n';
    for (const auto& r : rows) {
        const auto& b = r.theorem;
        os << b.t << ',' << format_double(b.x_t) << ',' << format_double(b.epsilon_t) << ','
           << format_double(b.factor_eps) << ',' << format_double(b.factor_count) << ','
           << format_double(b.factor_feas) << ',' << format_double(b.factor_reward) << ','
           << format_double(b.raw_product) << ',' << format_double(b.clamped) << ',' << format_bool(b.vacuous)
           << ',';
        const auto& chosen = variant == CorollaryVariant::derived_consistent ? r.derived : r.literal;
        if (chosen)
            os << format_double(chosen->params.alpha) << ',' << format_double(chosen->params.beta) << ',';
        else
            os << ",,";
        os << (r.derived ? format_double(r.derived->value) : "") << ','
           << (r.literal ? format_double(r.literal->value) : "") << '\n';
    }
}

}  // namespace cmab
