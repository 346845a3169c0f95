#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cmab/commands.hpp"
#include "test_support.hpp"

using namespace cmab;
namespace fs = std::filesystem;

namespace {

const std::string config_dir = CMAB_CONFIG_DIR;

class TempDir {
public:
    TempDir() {
        static std::mt19937_64 gen(std::random_device{}());
        path_ = fs::temp_directory_path() / ("cmab_test_" + std::to_string(gen()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    std::string write(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json small_config() {
    return json::parse(R"({
      "instance": {
        "constraint_level": 0.5,
        "arms": [
          {"reward": {"kind": "bernoulli", "params": {"p": 0.8}}, "cost": {"kind": "bernoulli", "params": {"p": 0.3}}},
          {"reward": {"kind": "point_mass", "params": {"value": 0.4}}, "cost": {"kind": "point_mass", "params": {"value": 0.2}}},
          {"reward": {"kind": "discrete", "params": {"values": [0.0, 1.0], "probs": [0.1, 0.9]}},
           "cost": {"kind": "beta", "params": {"shape1": 4.0, "shape2": 2.0}}}
        ]
      },
      "schedule": {"kind": "inverse_time", "params": {"k": 10}},
      "experiment": {"checkpoints": [10, 50, 100], "deltas": [0.0, 0.1], "replications": 64, "master_seed": 5}
    })");
}

int run_cli(const cli::RunOptions& o, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = cli::cmd_run(o, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Config, ParsesAllDistributionKinds) {
    const auto cfg = parse_config(small_config());
    const auto& inst = cfg.experiment.instance;
    ASSERT_EQ(inst.num_arms(), 3u);
    EXPECT_EQ(inst.arm(0).reward.kind_name(), "bernoulli");
    EXPECT_EQ(inst.arm(1).reward.kind_name(), "point_mass");
    EXPECT_EQ(inst.arm(2).reward.kind_name(), "discrete");
    EXPECT_EQ(inst.arm(2).cost.kind_name(), "beta");
    EXPECT_NEAR(inst.cost_mean(2), 4.0 / 6.0, 1e-15);
    EXPECT_TRUE(cfg.experiment.schedule.is_inverse_time());
    EXPECT_EQ(cfg.experiment.wilson_z, 3.0);
    EXPECT_EQ(cfg.experiment.tie_rule, TieRule::lowest_index);
    EXPECT_EQ(cfg.output.results_csv, "results.csv");
}

TEST(Config, EchoRoundTrips) {
    const auto cfg = parse_config(small_config());
    const json echoed = to_json(cfg);
    EXPECT_EQ(parse_config(echoed), cfg);
    EXPECT_EQ(to_json(parse_config(echoed)).dump(), echoed.dump());
    for (const auto& name : {"two_arm_point_mass.json", "well_separated.json", "beta_mixed.json",
                             "degenerate_eta_zero.json", "degenerate_rho_zero.json"}) {
        const auto c = parse_config(read_json_file(config_dir + "/" + name));
        EXPECT_EQ(parse_config(to_json(c)), c) << name;
    }
}

TEST(Config, EchoRoundTripsRandomInstances) {
    std::mt19937_64 gen(71);
    for (int i = 0; i < 100; ++i) {
        ConfigFile cfg;
        cfg.experiment.instance = cmab::testing::random_instance(gen, 6, false);
        cfg.experiment.schedule = i % 3 == 0   ? EpsilonSchedule::constant(0.05 + 0.01 * (i % 90))
                                  : i % 3 == 1 ? EpsilonSchedule::inverse_time(1.5 + i)
                                               : EpsilonSchedule::explicit_values({0.9, 0.5, 0.25});
        cfg.experiment.checkpoints = {1, 2, 3 + static_cast<std::uint64_t>(i)};
        cfg.experiment.deltas = {0.0, 0.1 * (i % 4)};
        if (i % 4 == 0) cfg.experiment.deltas = {0.0};
        cfg.experiment.replications = 1 + i;
        cfg.experiment.master_seed = gen();
        cfg.experiment.tie_rule = i % 2 ? TieRule::uniform : TieRule::lowest_index;
        ASSERT_TRUE(config_issues(cfg).empty());
        EXPECT_EQ(parse_config(json::parse(to_json(cfg).dump())), cfg);
    }
}

TEST(Config, RejectsUnknownKeys) {
    auto j = small_config();
    j["experiment"]["replicas"] = 10;
    try {
        parse_config(j);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "experiment.replicas");
    }
    j = small_config();
    j["instance"]["arms"][1]["cost"]["params"]["p"] = 0.5;
    try {
        parse_config(j);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "instance.arms[1].cost.params.p");
    }
    j = small_config();
    j["extra"] = true;
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, ReportsKeyedValueIssues) {
    auto j = small_config();
    j["schedule"] = json::parse(R"({"kind": "constant", "params": {"epsilon": 1.5}})");
    j["instance"]["arms"][0]["reward"]["params"]["p"] = 1.2;
    j["experiment"]["checkpoints"] = {5, 5};
    const auto issues = config_issues(parse_config_unchecked(j));
    std::set<std::string> keys;
    for (const auto& i : issues) keys.insert(i.key);
    EXPECT_TRUE(keys.count("schedule.params"));
    EXPECT_TRUE(keys.count("instance.arms[0].reward"));
    EXPECT_TRUE(keys.count("experiment.checkpoints"));
}

TEST(Config, RejectsWrongTypes) {
    auto j = small_config();
    j["experiment"]["replications"] = "many";
    EXPECT_THROW(parse_config(j), ConfigError);
    j = small_config();
    j["experiment"]["master_seed"] = -1;
    EXPECT_THROW(parse_config(j), ConfigError);
    j = small_config();
    j["instance"]["arms"][0]["reward"]["kind"] = "gaussian";
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(CliRun, WritesOneRowPerCheckpointAndDelta) {
    TempDir dir;
    cli::RunOptions o;
    o.config_path = dir.write("c.json", small_config().dump());
    o.out_dir = dir.path().string();
    ASSERT_EQ(run_cli(o), cli::exit_ok);
    const auto csv = slurp(dir.path() / "results.csv");
    EXPECT_EQ(count_lines(csv), 1u + 3u * 2u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,delta,successes,R,p_hat,ci_low,ci_high,bound_raw,bound_clamped,dominated");
    const auto summary = json::parse(slurp(dir.path() / "summary.json"));
    EXPECT_EQ(summary["estimates"].size(), 6u);
    auto expected = parse_config(small_config());
    expected.output.out_dir = dir.path().string();
    EXPECT_EQ(parse_config(summary["config"]), expected);
    EXPECT_TRUE(summary.contains("metadata"));
}

TEST(CliRun, ScheduleOutOfRangeIsConfigError) {
    TempDir dir;
    auto j = small_config();
    j["schedule"] = json::parse(R"({"kind": "constant", "params": {"epsilon": 1.5}})");
    cli::RunOptions o;
    o.config_path = dir.write("c.json", j.dump());
    o.out_dir = dir.path().string();
    std::string err;
    EXPECT_EQ(run_cli(o, &err), cli::exit_config);
    EXPECT_NE(err.find("schedule.params"), std::string::npos);
    EXPECT_NE(err.find("epsilon must lie in (0,1]"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir.path() / "results.csv"));
}

TEST(CliRun, OverridesAreEquivalentToEditedConfig) {
    TempDir dir;
    cli::RunOptions a;
    a.config_path = dir.write("a.json", small_config().dump());
    a.out_dir = (dir.path() / "a").string();
    a.master_seed = 99;
    a.replications = 32;
    a.tie_rule = "uniform";
    auto edited = small_config();
    edited["experiment"]["master_seed"] = 99;
    edited["experiment"]["replications"] = 32;
    edited["strategy"] = {{"tie_rule", "uniform"}};
    cli::RunOptions b;
    b.config_path = dir.write("b.json", edited.dump());
    b.out_dir = (dir.path() / "b").string();
    ASSERT_EQ(run_cli(a), cli::exit_ok);
    ASSERT_EQ(run_cli(b), cli::exit_ok);
    EXPECT_EQ(slurp(dir.path() / "a" / "results.csv"), slurp(dir.path() / "b" / "results.csv"));
}

TEST(CliRun, WorkerCountDoesNotChangeCsv) {
    TempDir dir;
    cli::RunOptions o;
    o.config_path = dir.write("c.json", small_config().dump());
    o.out_dir = (dir.path() / "w1").string();
    ASSERT_EQ(run_cli(o), cli::exit_ok);
    o.out_dir = (dir.path() / "w4").string();
    o.workers = 4;
    ASSERT_EQ(run_cli(o), cli::exit_ok);
    EXPECT_EQ(slurp(dir.path() / "w1" / "results.csv"), slurp(dir.path() / "w4" / "results.csv"));
}

TEST(CliRun, TrajectoryDump) {
    TempDir dir;
    auto j = small_config();
    j["output"] = {{"trajectory_csv", "traj.csv"}};
    cli::RunOptions o;
    o.config_path = dir.write("c.json", j.dump());
    o.out_dir = dir.path().string();
    ASSERT_EQ(run_cli(o), cli::exit_ok);
    const auto traj = slurp(dir.path() / "traj.csv");
    EXPECT_EQ(count_lines(traj), 101u);
    EXPECT_EQ(traj.substr(0, traj.find('\n')), "t,arm,branch,reward,cost");
}

TEST(CliRun, MissingFileIsConfigError) {
    cli::RunOptions o;
    o.config_path = "/nonexistent/config.json";
    EXPECT_EQ(run_cli(o), cli::exit_config);
}

TEST(CliBound, RhoZeroIsVacuousEverywhere) {
    cli::BoundOptions o;
    o.num_arms = 3;
    o.delta = 0.2;
    o.rho = 0.0;
    o.k = 10;
    o.t_grid = {10, 100, 1000, 100000};
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_bound(o, out, err), cli::exit_ok);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, bounds_csv_header);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_NE(line.find(",0,true,"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 4);
}

TEST(CliBound, LargeHorizonValue) {
    cli::BoundOptions o;
    o.delta = 0.5;
    o.rho = 0.5;
    o.k = 40;
    o.t_grid = {1000000};
    TempDir dir;
    o.out_dir = dir.path().string();
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_bound(o, out, err), cli::exit_ok);
    std::istringstream csv(slurp(dir.path() / "bounds.csv"));
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    std::vector<std::string> cells;
    std::stringstream rs(row);
    for (std::string c; std::getline(rs, c, ',');) cells.push_back(c);
    ASSERT_GE(cells.size(), 9u);
    EXPECT_GE(std::stod(cells[8]), 0.9999);
    EXPECT_EQ(cells[9], "false");
}

TEST(CliBound, RejectsBadGrids) {
    cli::BoundOptions o;
    o.delta = 0.5;
    o.rho = 0.5;
    std::ostringstream out, err;
    o.t_grid = {100, 10};
    EXPECT_EQ(cli::cmd_bound(o, out, err), cli::exit_config);
    o.t_grid = {};
    EXPECT_EQ(cli::cmd_bound(o, out, err), cli::exit_config);
    o.t_grid = {10};
    o.k = 1.0;
    EXPECT_EQ(cli::cmd_bound(o, out, err), cli::exit_config);
    o.k = 2.0;
    o.variant = "nope";
    EXPECT_EQ(cli::cmd_bound(o, out, err), cli::exit_config);
}

TEST(CliOracle, PointMassExamples) {
    cli::OracleCmdOptions o;
    o.config_path = config_dir + "/two_arm_point_mass.json";
    std::ostringstream out, err;
    o.t = 1;
    ASSERT_EQ(cli::cmd_oracle(o, out, err), cli::exit_ok);
    auto j = json::parse(out.str());
    EXPECT_EQ(j["arm_probabilities"][0].get<double>(), 0.5);
    EXPECT_EQ(j["arm_probabilities"][1].get<double>(), 0.5);
    out.str("");
    o.t = 2;
    ASSERT_EQ(cli::cmd_oracle(o, out, err), cli::exit_ok);
    j = json::parse(out.str());
    EXPECT_EQ(j["arm_probabilities"][0].get<double>(), 0.625);
}

TEST(CliOracle, BetaIsRejected) {
    cli::OracleCmdOptions o;
    o.config_path = config_dir + "/beta_mixed.json";
    o.t = 2;
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_oracle(o, out, err), cli::exit_config);
    EXPECT_NE(err.str().find("continuous support"), std::string::npos);
}

TEST(CliValidate, Outcomes) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::cmd_validate(config_dir + "/well_separated.json", out, err), cli::exit_ok);
    EXPECT_EQ(out.str().rfind("OK ", 0), 0u);

    TempDir dir;
    auto j = small_config();
    j["instance"]["constraint_level"] = 0.1;
    err.str("");
    EXPECT_EQ(cli::cmd_validate(dir.write("e.json", j.dump()), out, err), cli::exit_config);
    EXPECT_NE(err.str().find("empty_feasible_set"), std::string::npos);

    j = small_config();
    j["schedule"]["params"]["k"] = 1.0;
    err.str("");
    EXPECT_EQ(cli::cmd_validate(dir.write("k.json", j.dump()), out, err), cli::exit_config);
    EXPECT_NE(err.str().find("k > 1"), std::string::npos);
}
