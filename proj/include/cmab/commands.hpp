#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cmab/bounds.hpp"
#include "cmab/config.hpp"
#include "cmab/harness.hpp"
#include "cmab/io.hpp"
#include "cmab/oracle.hpp"

// Subcommand bodies of the cmab tool. Each returns the process exit code:
// 0 success, 1 runtime failure, 2 configuration / parameter error.
namespace cmab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime = 1;
inline constexpr int exit_config = 2;

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::uint64_t> replications;
    std::optional<std::string> tie_rule;
    std::optional<std::string> out_dir;
    unsigned workers = 1;
};

struct BoundOptions {
    std::size_t num_arms = 2;
    double delta = 0.0;
    double rho = 0.0;
    std::string schedule = "inverse_time";  // or "constant"
    double k = 2.0;
    double epsilon = 1.0;
    std::vector<std::uint64_t> t_grid;
    std::string variant = "derived_consistent";
    std::optional<std::string> out_dir;  // bounds.csv there; stdout otherwise
};

struct OracleCmdOptions {
    std::string config_path;
    std::uint64_t t = 1;
    std::optional<std::string> tie_rule;
    std::string arithmetic = "exact";
    std::optional<std::string> out_dir;
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline ConfigFile load_resolved(const std::string& path, const std::optional<std::uint64_t>& seed,
                                const std::optional<std::uint64_t>& replications,
                                const std::optional<std::string>& tie_rule,
                                const std::optional<std::string>& out_dir) {
    auto cfg = parse_config_unchecked(read_json_file(path));
    if (seed) cfg.experiment.master_seed = *seed;
    if (replications) cfg.experiment.replications = *replications;
    if (tie_rule)
        cfg.experiment.tie_rule = cmab::detail::rethrow_as_config("--tie-rule", [&] { return parse_tie_rule(*tie_rule); });
    if (out_dir) cfg.output.out_dir = *out_dir;
    if (auto issues = config_issues(cfg); !issues.empty())
        throw ConfigError(issues.front().code, issues.front().key, issues.front().message);
    return cfg;
}

}  // namespace detail

inline int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    ConfigFile cfg;
    try {
        cfg = detail::load_resolved(opt.config_path, opt.master_seed, opt.replications, opt.tie_rule, opt.out_dir);
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }
    out << to_json(cfg).dump(2) << '\n';

    try {
        const auto started = std::chrono::steady_clock::now();
        const auto result = run_experiment(cfg.experiment, opt.workers);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

        const std::filesystem::path dir(cfg.output.out_dir);
        std::ostringstream csv;
        write_results_csv(csv, result.estimates);
        detail::write_file(dir / cfg.output.results_csv, csv.str());

        json meta = {{"timestamp", utc_timestamp()}, {"workers", opt.workers}, {"elapsed_seconds", elapsed}};
        detail::write_file(dir / cfg.output.summary_json, summary_json(cfg, result, meta).dump(2) + "\n");

        if (!cfg.output.trajectory_csv.empty()) {
            std::vector<SelectionEvent> log;
            run_trial(cfg.experiment, 0, &log);
            std::ostringstream ev;
            write_events_csv(ev, log);
            detail::write_file(dir / cfg.output.trajectory_csv, ev.str());
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << '\n';
        return exit_runtime;
    }
}

inline int cmd_bound(const BoundOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<BoundRow> rows;
    CorollaryVariant variant{};
    EpsilonSchedule schedule;
    try {
        variant = parse_corollary_variant(opt.variant);
        if (opt.schedule == "inverse_time")
            schedule = EpsilonSchedule::inverse_time(opt.k);
        else if (opt.schedule == "constant")
            schedule = EpsilonSchedule::constant(opt.epsilon);
        else
            throw ValidationError(ErrorCode::invalid_schedule,
                                  "unknown schedule '" + opt.schedule + "' (inverse_time or constant)");
        if (opt.t_grid.empty()) throw ValidationError(ErrorCode::invalid_parameter, "t-grid must be nonempty");
        for (std::size_t i = 0; i < opt.t_grid.size(); ++i) {
            if (opt.t_grid[i] < 1) throw ValidationError(ErrorCode::invalid_parameter, "t-grid values must be >= 1");
            if (i > 0 && opt.t_grid[i] <= opt.t_grid[i - 1])
                throw ValidationError(ErrorCode::invalid_parameter, "t-grid must be strictly increasing");
        }
        check(BoundInputs{opt.num_arms, opt.delta, opt.rho, schedule, opt.t_grid.front()});
    } catch (const ValidationError& e) {
        err << "parameter error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        ExplorationMass mass(schedule, opt.num_arms);
        for (std::uint64_t t : opt.t_grid) {
            mass.advance_to(t);
            BoundRow row;
            row.theorem = theorem1_bound_at(opt.num_arms, opt.delta, opt.rho, schedule.at(t), mass.x());
            row.theorem.t = t;
            if (schedule.is_inverse_time() && static_cast<double>(t) >= opt.k) {
                const double td = static_cast<double>(t);
                row.derived = corollary_bound(opt.k, opt.num_arms, opt.delta, opt.rho, td,
                                              CorollaryVariant::derived_consistent);
                row.literal = corollary_bound(opt.k, opt.num_arms, opt.delta, opt.rho, td,
                                              CorollaryVariant::paper_literal);
            }
            rows.push_back(row);
        }
        std::ostringstream csv;
        write_bounds_csv(csv, rows, variant);
        if (opt.out_dir)
            detail::write_file(std::filesystem::path(*opt.out_dir) / "bounds.csv", csv.str());
        else
            out << csv.str();
        return exit_ok;
    } catch (const std::exception& e) {
        err << "bound failed: " << e.what() << '\n';
        return exit_runtime;
    }
}

inline int cmd_oracle(const OracleCmdOptions& opt, std::ostream& out, std::ostream& err) {
    ConfigFile cfg;
    OracleOptions oo;
    try {
        cfg = detail::load_resolved(opt.config_path, std::nullopt, std::nullopt, opt.tie_rule, opt.out_dir);
        oo.tie_rule = cfg.experiment.tie_rule;
        if (opt.arithmetic == "exact")
            oo.arithmetic = Arithmetic::exact;
        else if (opt.arithmetic == "floating")
            oo.arithmetic = Arithmetic::floating;
        else
            throw ConfigError(ErrorCode::invalid_parameter, "--arithmetic", "expected exact or floating");
        if (cfg.experiment.strategy != StrategyKind::constrained_eps_greedy)
            throw ConfigError(ErrorCode::invalid_parameter, "strategy.kind",
                              "oracle enumerates constrained_eps_greedy only");
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }

    OracleResult result;
    try {
        result = exact_selection_probability(cfg.experiment.instance, cfg.experiment.schedule, opt.t,
                                             cfg.experiment.deltas, oo);
    } catch (const ValidationError& e) {
        err << "oracle error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "oracle failed: " << e.what() << '\n';
        return exit_runtime;
    }
    const std::string doc = to_json(result).dump(2) + "\n";
    out << doc;
    if (opt.out_dir) {
        try {
            detail::write_file(std::filesystem::path(*opt.out_dir) / "oracle.json", doc);
        } catch (const std::exception& e) {
            err << "oracle failed: " << e.what() << '\n';
            return exit_runtime;
        }
    }
    return exit_ok;
}

inline int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
    ConfigFile cfg;
    try {
        cfg = parse_config_unchecked(read_json_file(config_path));
    } catch (const ValidationError& e) {
        err << "INVALID " << e.what() << '\n';
        return exit_config;
    }
    const auto issues = config_issues(cfg);
    for (const auto& i : issues) err << "INVALID " << i.key << " [" << to_string(i.code) << "]: " << i.message << '\n';
    if (!issues.empty()) return exit_config;

    const auto& inst = cfg.experiment.instance;
    out << "OK " << config_path << '\n'
        << "  arms: " << inst.num_arms() << '\n'
        << "  feasible arms: " << json(feasible_set(inst, 0.0)).dump() << '\n'
        << "  optimal feasible arms: " << json(optimal_feasible_arms(inst)).dump() << '\n'
        << "  rho: " << format_double(rho(inst)) << '\n'
        << "  eta: " << format_double(eta(inst)) << '\n';
    return exit_ok;
}

}  // namespace cmab::cli
