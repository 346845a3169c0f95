#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "cmab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Constrained multi-armed bandit simulator"};
    app.require_subcommand(1);

    cmab::cli::RunOptions run;
    std::string run_tie, run_out;
    std::uint64_t run_seed = 0, run_reps = 0;
    auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment from a config file");
    run_cmd->add_option("--config", run.config_path, "Experiment config (JSON)")->required();
    auto* seed_opt = run_cmd->add_option("--master-seed", run_seed, "Override experiment.master_seed");
    auto* reps_opt = run_cmd->add_option("--replications", run_reps, "Override experiment.replications");
    auto* tie_opt = run_cmd->add_option("--tie-rule", run_tie, "lowest_index or uniform");
    auto* out_opt = run_cmd->add_option("--out-dir", run_out, "Override output.out_dir");
    run_cmd->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber);

    cmab::cli::BoundOptions bound;
    std::string bound_out;
    auto* bound_cmd = app.add_subcommand("bound", "Evaluate the finite-time lower bound over a t-grid");
    bound_cmd->add_option("--num-arms", bound.num_arms, "|A|")->required();
    bound_cmd->add_option("--delta", bound.delta, "delta >= 0")->required();
    bound_cmd->add_option("--rho", bound.rho, "rho >= 0")->required();
    bound_cmd->add_option("--schedule", bound.schedule, "inverse_time or constant");
    bound_cmd->add_option("--k", bound.k, "inverse_time parameter k > 1");
    bound_cmd->add_option("--epsilon", bound.epsilon, "constant epsilon in (0,1]");
    bound_cmd->add_option("--t-grid", bound.t_grid, "Strictly increasing horizons")->delimiter(',')->required();
    bound_cmd->add_option("--variant", bound.variant, "derived_consistent or paper_literal");
    auto* bound_out_opt = bound_cmd->add_option("--out-dir", bound_out, "Write bounds.csv here instead of stdout");

    cmab::cli::OracleCmdOptions oracle;
    std::string oracle_tie, oracle_out;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact selection probabilities by outcome-tree enumeration");
    oracle_cmd->add_option("--config", oracle.config_path, "Experiment config (JSON)")->required();
    oracle_cmd->add_option("--t", oracle.t, "Horizon")->required();
    auto* oracle_tie_opt = oracle_cmd->add_option("--tie-rule", oracle_tie, "lowest_index or uniform");
    oracle_cmd->add_option("--arithmetic", oracle.arithmetic, "exact or floating");
    auto* oracle_out_opt = oracle_cmd->add_option("--out-dir", oracle_out, "Also write oracle.json here");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a config file against every invariant");
    validate_cmd->add_option("--config", validate_path, "Experiment config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cmab::cli::exit_config;
    }

    if (*run_cmd) {
        if (*seed_opt) run.master_seed = run_seed;
        if (*reps_opt) run.replications = run_reps;
        if (*tie_opt) run.tie_rule = run_tie;
        if (*out_opt) run.out_dir = run_out;
        return cmab::cli::cmd_run(run, std::cout, std::cerr);
    }
    if (*bound_cmd) {
        if (*bound_out_opt) bound.out_dir = bound_out;
        return cmab::cli::cmd_bound(bound, std::cout, std::cerr);
    }
    if (*oracle_cmd) {
        if (*oracle_tie_opt) oracle.tie_rule = oracle_tie;
        if (*oracle_out_opt) oracle.out_dir = oracle_out;
        return cmab::cli::cmd_oracle(oracle, std::cout, std::cerr);
    }
    return cmab::cli::cmd_validate(validate_path, std::cout, std::cerr);
}
