#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmab/distribution.hpp"
#include "cmab/errors.hpp"
#include "cmab/harness.hpp"
#include "cmab/instance.hpp"
#include "cmab/schedule.hpp"
#include "cmab/strategy.hpp"

namespace cmab {

using json = nlohmann::ordered_json;

/// Configuration problem tied to a key path such as "schedule.params.k".
class ConfigError : public ValidationError {
public:
    ConfigError(ErrorCode code, std::string key, const std::string& message)
        : ValidationError(code, key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct OutputOptions {
    std::string out_dir = ".";
    std::string results_csv = "results.csv";
    std::string summary_json = "summary.json";
    std::string trajectory_csv;  // empty: no event dump

    bool operator==(const OutputOptions&) const = default;
};

struct ConfigFile {
    ExperimentConfig experiment;
    OutputOptions output;
    bool operator==(const ConfigFile&) const = default;
};

struct KeyedIssue {
    std::string key;
    ErrorCode code;
    std::string message;
};

namespace detail {

/// Object reader that records which keys were consumed and rejects the rest.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(ErrorCode::invalid_parameter, path_, "expected an object");
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    bool has(const std::string& k) const { return j_.contains(k); }

    const json& raw(const std::string& k) {
        seen_.insert(k);
        if (!j_.contains(k)) throw ConfigError(ErrorCode::invalid_parameter, key(k), "missing required key");
        return j_.at(k);
    }

    template <class T>
    T get(const std::string& k) {
        const json& v = raw(k);
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw std::invalid_argument("n");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer() && !v.is_number_unsigned()) throw std::invalid_argument("i");
                if (!v.is_number_unsigned() && v.template get<std::int64_t>() < 0) throw std::invalid_argument("i");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw std::invalid_argument("s");
            }
            return v.template get<T>();
        } catch (const std::exception&) {
            throw ConfigError(ErrorCode::invalid_parameter, key(k), "wrong type (" + describe<T>() + " expected)");
        }
    }

    template <class T>
    T get_or(const std::string& k, T fallback) {
        if (!j_.contains(k)) {
            seen_.insert(k);
            return fallback;
        }
        return get<T>(k);
    }

    template <class T>
    std::vector<T> get_list(const std::string& k) {
        const json& v = raw(k);
        if (!v.is_array()) throw ConfigError(ErrorCode::invalid_parameter, key(k), "expected a list");
        std::vector<T> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            json wrapper = json::object();
            wrapper["x"] = v[i];
            Section s(wrapper, key(k) + "[" + std::to_string(i) + "]");
            try {
                out.push_back(s.get<T>("x"));
            } catch (const ConfigError&) {
                throw ConfigError(ErrorCode::invalid_parameter, key(k) + "[" + std::to_string(i) + "]",
                                  "wrong type (" + describe<T>() + " expected)");
            }
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(ErrorCode::invalid_parameter, key(it.key()), "unknown key");
    }

private:
    template <class T>
    static std::string describe() {
        if constexpr (std::is_same_v<T, double>) return "number";
        else if constexpr (std::is_integral_v<T>) return "nonnegative integer";
        else return "string";
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Distribution parse_distribution(const json& j, const std::string& path) {
    Section s(j, path);
    const auto kind = s.get<std::string>("kind");
    Section p(s.raw("params"), s.key("params"));
    Distribution d;
    if (kind == "point_mass") {
        d = Distribution::unchecked(PointMass{p.get<double>("value")});
    } else if (kind == "bernoulli") {
        d = Distribution::unchecked(Bernoulli{p.get<double>("p")});
    } else if (kind == "discrete") {
        d = Distribution::unchecked(Discrete{p.get_list<double>("values"), p.get_list<double>("probs")});
    } else if (kind == "beta") {
        d = Distribution::unchecked(Beta{p.get<double>("shape1"), p.get<double>("shape2")});
    } else {
        throw ConfigError(ErrorCode::invalid_parameter, s.key("kind"),
                          "unknown distribution kind '" + kind + "' (point_mass, bernoulli, discrete, beta)");
    }
    p.finish();
    s.finish();
    return d;
}

inline json distribution_json(const Distribution& d) {
    json params = json::object();
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PointMass>) params["value"] = k.value;
            else if constexpr (std::is_same_v<T, Bernoulli>) params["p"] = k.p;
            else if constexpr (std::is_same_v<T, Discrete>) {
                params["values"] = k.values;
                params["probs"] = k.probs;
            } else {
                params["shape1"] = k.shape1;
                params["shape2"] = k.shape2;
            }
        },
        d.kind());
    json out = json::object();
    out["kind"] = d.kind_name();
    out["params"] = params;
    return out;
}

inline EpsilonSchedule parse_schedule(const json& j, const std::string& path) {
    Section s(j, path);
    const auto kind = s.get<std::string>("kind");
    Section p(s.raw("params"), s.key("params"));
    EpsilonSchedule out;
    if (kind == "constant") {
        out = EpsilonSchedule::unchecked(ConstantEpsilon{p.get<double>("epsilon")});
    } else if (kind == "inverse_time") {
        out = EpsilonSchedule::unchecked(InverseTime{p.get<double>("k")});
    } else if (kind == "explicit") {
        out = EpsilonSchedule::unchecked(ExplicitEpsilon{p.get_list<double>("values")});
    } else {
        throw ConfigError(ErrorCode::invalid_schedule, s.key("kind"),
                          "unknown schedule kind '" + kind + "' (constant, inverse_time, explicit)");
    }
    p.finish();
    s.finish();
    return out;
}

inline json schedule_json(const EpsilonSchedule& schedule) {
    json out = json::object();
    json params = json::object();
    if (const auto* c = std::get_if<ConstantEpsilon>(&schedule.kind())) {
        out["kind"] = "constant";
        params["epsilon"] = c->epsilon;
    } else if (const auto* inv = std::get_if<InverseTime>(&schedule.kind())) {
        out["kind"] = "inverse_time";
        params["k"] = inv->k;
    } else {
        out["kind"] = "explicit";
        params["values"] = std::get<ExplicitEpsilon>(schedule.kind()).values;
    }
    out["params"] = params;
    return out;
}

template <class Fn>
auto rethrow_as_config(const std::string& key, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(e.code(), key, e.what());
    }
}

}  // namespace detail

/// Structural parse: types, required keys, unknown keys. Value-range
/// invariants are left to config_issues() so that all of them can be listed.
inline ConfigFile parse_config_unchecked(const json& root) {
    detail::Section top(root, "");
    ConfigFile cfg;
    auto& ex = cfg.experiment;

    {
        detail::Section inst(top.raw("instance"), "instance");
        const double level = inst.get<double>("constraint_level");
        const json& arms = inst.raw("arms");
        if (!arms.is_array()) throw ConfigError(ErrorCode::invalid_parameter, "instance.arms", "expected a list");
        std::vector<Arm> parsed;
        for (std::size_t i = 0; i < arms.size(); ++i) {
            const std::string path = "instance.arms[" + std::to_string(i) + "]";
            detail::Section arm(arms[i], path);
            Arm a;
            a.reward = detail::parse_distribution(arm.raw("reward"), path + ".reward");
            a.cost = detail::parse_distribution(arm.raw("cost"), path + ".cost");
            arm.finish();
            parsed.push_back(std::move(a));
        }
        inst.finish();
        ex.instance = ProblemInstance(std::move(parsed), level);
    }

    if (top.has("strategy")) {
        detail::Section st(top.raw("strategy"), "strategy");
        const auto kind = st.get_or<std::string>("kind", std::string(to_string(ex.strategy)));
        ex.strategy = detail::rethrow_as_config("strategy.kind", [&] { return parse_strategy_kind(kind); });
        const auto tie = st.get_or<std::string>("tie_rule", std::string(to_string(ex.tie_rule)));
        ex.tie_rule = detail::rethrow_as_config("strategy.tie_rule", [&] { return parse_tie_rule(tie); });
        st.finish();
    }

    ex.schedule = detail::parse_schedule(top.raw("schedule"), "schedule");

    {
        detail::Section e(top.raw("experiment"), "experiment");
        ex.checkpoints = e.get_list<std::uint64_t>("checkpoints");
        ex.deltas = e.get_list<double>("deltas");
        ex.replications = e.get<std::uint64_t>("replications");
        ex.master_seed = e.get<std::uint64_t>("master_seed");
        ex.wilson_z = e.get_or<double>("wilson_z", ex.wilson_z);
        e.finish();
    }

    if (top.has("output")) {
        detail::Section o(top.raw("output"), "output");
        cfg.output.out_dir = o.get_or<std::string>("out_dir", cfg.output.out_dir);
        cfg.output.results_csv = o.get_or<std::string>("results_csv", cfg.output.results_csv);
        cfg.output.summary_json = o.get_or<std::string>("summary_json", cfg.output.summary_json);
        cfg.output.trajectory_csv = o.get_or<std::string>("trajectory_csv", cfg.output.trajectory_csv);
        o.finish();
    }
    top.finish();
    return cfg;
}

/// Every violated value invariant, each tied to the key responsible.
inline std::vector<KeyedIssue> config_issues(const ConfigFile& cfg) {
    std::vector<KeyedIssue> out;
    const auto& ex = cfg.experiment;
    const auto& inst = ex.instance;

    if (inst.num_arms() < 2)
        out.push_back({"instance.arms", ErrorCode::too_few_arms,
                       "instance needs at least 2 arms, got " + std::to_string(inst.num_arms())});
    if (!std::isfinite(inst.constraint_level()))
        out.push_back({"instance.constraint_level", ErrorCode::invalid_parameter, "must be finite"});
    bool laws_ok = true;
    for (std::size_t a = 0; a < inst.num_arms(); ++a) {
        const std::string base = "instance.arms[" + std::to_string(a) + "]";
        if (auto [code, msg] = inst.arm(a).reward.first_issue(); !msg.empty()) {
            out.push_back({base + ".reward", code, msg});
            laws_ok = false;
        }
        if (auto [code, msg] = inst.arm(a).cost.first_issue(); !msg.empty()) {
            out.push_back({base + ".cost", code, msg});
            laws_ok = false;
        }
    }
    if (laws_ok && inst.num_arms() > 0) {
        bool any = false;
        for (std::size_t a = 0; a < inst.num_arms(); ++a) any = any || inst.cost_mean(a) <= inst.constraint_level();
        if (!any)
            out.push_back({"instance.constraint_level", ErrorCode::empty_feasible_set,
                           "empty feasible set: every arm has mean cost above constraint_level"});
    }

    if (auto msg = ex.schedule.issue(); !msg.empty())
        out.push_back({"schedule.params", ErrorCode::invalid_schedule, msg});

    if (ex.checkpoints.empty())
        out.push_back({"experiment.checkpoints", ErrorCode::invalid_experiment, "must be nonempty"});
    for (std::size_t i = 0; i < ex.checkpoints.size(); ++i) {
        if (ex.checkpoints[i] < 1)
            out.push_back({"experiment.checkpoints", ErrorCode::invalid_experiment, "horizons must be >= 1"});
        if (i > 0 && ex.checkpoints[i] <= ex.checkpoints[i - 1])
            out.push_back({"experiment.checkpoints", ErrorCode::invalid_experiment, "must be strictly increasing"});
    }
    if (ex.deltas.empty())
        out.push_back({"experiment.deltas", ErrorCode::invalid_experiment, "must be nonempty"});
    for (double d : ex.deltas)
        if (!(d >= 0.0) || !std::isfinite(d))
            out.push_back({"experiment.deltas", ErrorCode::invalid_experiment, "every delta must be finite and >= 0"});
    if (ex.replications < 1)
        out.push_back({"experiment.replications", ErrorCode::invalid_experiment, "must be >= 1"});
    if (!(ex.wilson_z > 0.0) || !std::isfinite(ex.wilson_z))
        out.push_back({"experiment.wilson_z", ErrorCode::invalid_experiment, "must be > 0"});
    return out;
}

/// Structural parse plus every invariant; throws on the first problem.
inline ConfigFile parse_config(const json& root) {
    auto cfg = parse_config_unchecked(root);
    if (auto issues = config_issues(cfg); !issues.empty())
        throw ConfigError(issues.front().code, issues.front().key, issues.front().message);
    return cfg;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ErrorCode::invalid_parameter, "config", "cannot open '" + path + "'");
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(ErrorCode::invalid_parameter, "config", std::string("parse error: ") + e.what());
    }
}

/// Fully resolved configuration, every default spelled out.
inline json to_json(const ConfigFile& cfg) {
    const auto& ex = cfg.experiment;
    json arms = json::array();
    for (const auto& a : ex.instance.arms()) {
        json arm = json::object();
        arm["reward"] = detail::distribution_json(a.reward);
        arm["cost"] = detail::distribution_json(a.cost);
        arms.push_back(arm);
    }
    json root = json::object();
    root["instance"] = {{"constraint_level", ex.instance.constraint_level()}, {"arms", arms}};
    root["strategy"] = {{"kind", std::string(to_string(ex.strategy))},
                        {"tie_rule", std::string(to_string(ex.tie_rule))}};
    root["schedule"] = detail::schedule_json(ex.schedule);
    root["experiment"] = {{"checkpoints", ex.checkpoints},
                          {"deltas", ex.deltas},
                          {"replications", ex.replications},
                          {"master_seed", ex.master_seed},
                          {"wilson_z", ex.wilson_z}};
    root["output"] = {{"out_dir", cfg.output.out_dir},
                      {"results_csv", cfg.output.results_csv},
                      {"summary_json", cfg.output.summary_json},
                      {"trajectory_csv", cfg.output.trajectory_csv}};
    return root;
}

}  // namespace cmab
