#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "coopetition/cli.hpp"

using namespace coop;
namespace fs = std::filesystem;

namespace {

const fs::path data_dir{COOP_DATA_DIR};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("coop_cli_") + info->name());
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(cli::RunConfig cfg) {
        if (cfg.out.empty()) cfg.out = dir_ / "out";
        log_.str("");
        err_.str("");
        return cli::run(cfg, log_, err_);
    }

    static cli::RunConfig config(cli::Command c, std::string scenario = "builtin:renault_nissan") {
        cli::RunConfig cfg;
        cfg.command = c;
        cfg.scenario = std::move(scenario);
        return cfg;
    }

    std::string file(const std::string& name) const {
        std::ifstream in(dir_ / "out" / name, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::size_t lines(const std::string& text) { return std::size_t(std::count(text.begin(), text.end(), '\n')); }

    int shell(const std::string& args) {
        const std::string cmd = std::string(COOP_CLI_BINARY) + " " + args + " > " + (dir_ / "stdout").string() + " 2> " +
                                (dir_ / "stderr").string();
        fs::create_directories(dir_);
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string shell_stderr() const {
        std::ifstream in(dir_ / "stderr");
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::ostringstream log_, err_;
};

} // namespace

TEST_F(Cli, SimulateWritesTrajectory) {
    ASSERT_EQ(run(config(cli::Command::simulate)), 0) << err_.str();
    EXPECT_EQ(lines(file("trajectory.csv")), 1u + 80u * 2u);
    EXPECT_EQ(lines(file("utilities.csv")), 1u + 80u * 2u);
    const Scenario back = io::parse_scenario(io::parse_document(file("resolved_config"), "resolved"), data_dir);
    EXPECT_EQ(back, renault_nissan_scenario());
}

TEST_F(Cli, ScenarioFileMatchesBuiltin) {
    ASSERT_EQ(run(config(cli::Command::simulate)), 0);
    const std::string builtin = file("trajectory.csv");
    ASSERT_EQ(run(config(cli::Command::simulate, (data_dir / "renault_nissan.scenario").string())), 0) << err_.str();
    EXPECT_EQ(file("trajectory.csv"), builtin);
}

TEST_F(Cli, OverridesReachTheResolvedConfig) {
    auto cfg = config(cli::Command::simulate);
    cfg.overrides = {"trust.lambda_plus=0.125"};
    ASSERT_EQ(run(cfg), 0) << err_.str();
    const Scenario back = io::parse_scenario(io::parse_document(file("resolved_config"), "resolved"), data_dir);
    EXPECT_EQ(back.trust_params.lambda_plus(), 0.125);
}

TEST_F(Cli, ValidateReportsTotal) {
    ASSERT_EQ(run(config(cli::Command::validate)), 0) << err_.str();
    EXPECT_EQ(nlohmann::json::parse(file("validation.json"))["total"], 49);
    EXPECT_NE(log_.str().find("49"), std::string::npos);
}

TEST_F(Cli, MetricsWithProbeOverride) {
    auto cfg = config(cli::Command::metrics);
    cfg.overrides = {"probe.build_periods=20"};
    ASSERT_EQ(run(cfg), 0) << err_.str();
    EXPECT_EQ(lines(file("metrics.csv")), 8u);
    EXPECT_NE(file("metrics.csv").find("negativity_ratio,3\n"), std::string::npos);
    EXPECT_NE(file("resolved_config").find("build_periods = 20"), std::string::npos);
}

TEST_F(Cli, SweepDefaultGrid) {
    auto cfg = config(cli::Command::sweep, "");
    cfg.threads = 4;
    ASSERT_EQ(run(cfg), 0) << err_.str();
    EXPECT_EQ(lines(file("sweep_outcomes.csv")), 1u + 78125u);
    const auto summary = nlohmann::json::parse(file("sweep_summary.json"));
    EXPECT_EQ(summary["configurations"], 78125);
    EXPECT_EQ(lines(file("sensitivity.csv")), 1u + 49u);
    const std::string four = file("sweep_outcomes.csv");
    cfg.threads = 1;
    ASSERT_EQ(run(cfg), 0);
    EXPECT_EQ(file("sweep_outcomes.csv"), four);
}

TEST_F(Cli, SweepGridFile) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "small.grid") << "[grid]\nlambda_plus = 0.05 0.15\nlambda_minus = 0.15 0.45\nmu_R = 0.6\n"
                                          "delta_R = 0.02\nxi = 0.5\nrho = 0.2\nkappa_trust = 1\n";
    auto cfg = config(cli::Command::sweep, "");
    cfg.grid = (dir_ / "small.grid").string();
    ASSERT_EQ(run(cfg), 0) << err_.str();
    EXPECT_EQ(lines(file("sweep_outcomes.csv")), 5u);
    const auto back = io::parse_sweep_config(io::parse_document(file("resolved_config"), "resolved"));
    EXPECT_EQ(back.grid.levels[0], (std::vector<double>{0.05, 0.15}));
}

TEST_F(Cli, EquilibriumSmallGrid) {
    auto cfg = config(cli::Command::equilibrium, (data_dir / "equilibrium_toy.scenario").string());
    cfg.overrides = {"equilibrium.trust_levels=5", "equilibrium.reputation_levels=3", "equilibrium.action_levels=7",
                     "equilibrium.path_periods=10"};
    ASSERT_EQ(run(cfg), 0) << err_.str();
    EXPECT_EQ(lines(file("policy.csv")), 1u + 15u * 15u);
    EXPECT_EQ(lines(file("equilibrium_path.csv")), 11u);
    const auto j = nlohmann::json::parse(file("equilibrium.json"));
    EXPECT_EQ(j["horizon"], "infinite");
    EXPECT_LT(j["residual"].get<double>(), 1e-6);
    EXPECT_EQ(lines(file("convergence.csv")), 1u + j["sweeps"].get<std::size_t>());
}

TEST_F(Cli, ErrorsMapToExitCodes) {
    EXPECT_EQ(run(config(cli::Command::simulate, "builtin:unknown")), 2);
    EXPECT_NE(err_.str().find("usage error"), std::string::npos);
    auto cfg = config(cli::Command::simulate);
    cfg.overrides = {"nonsense"};
    EXPECT_EQ(run(cfg), 2);

    fs::create_directories(dir_);
    std::ofstream(dir_ / "bad.scenario") << "[scenario]\nname = \"bad\"\n[actors]\na = \"A\"\nb = \"B\"\n"
                                            "[interdependence]\na.b = 0.3\n[phase]\nname = \"p\"\nduration = x\ndeviation = 0\n";
    EXPECT_EQ(run(config(cli::Command::simulate, (dir_ / "bad.scenario").string())), 3);
    EXPECT_NE(err_.str().find("bad.scenario:10"), std::string::npos) << err_.str();

    cfg = config(cli::Command::simulate);
    cfg.overrides = {"trust.lambda_plus=1.5"};
    EXPECT_EQ(run(cfg), 4);
    cfg.overrides = {"trust.lambda_plus=0.15"};
    cfg.overrides.push_back("trust.lambda_minus=0.9");
    EXPECT_EQ(run(cfg), 4);

    EXPECT_EQ(run(config(cli::Command::simulate, (dir_ / "absent.scenario").string())), 5);
    std::ofstream(dir_ / "blocker") << "x";
    cfg = config(cli::Command::simulate);
    cfg.out = dir_ / "blocker" / "out";
    EXPECT_EQ(run(cfg), 5);
}

TEST_F(Cli, FailedRunWritesNothing) {
    auto cfg = config(cli::Command::simulate);
    cfg.overrides = {"trust.lambda_plus=1.5"};
    EXPECT_EQ(run(cfg), 4);
    EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(Cli, Binary) {
    const std::string out = (dir_ / "bin_out").string();
    EXPECT_EQ(shell("simulate --scenario builtin:renault_nissan --out " + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "trajectory.csv"));
    EXPECT_EQ(shell("simulate --out " + out), 2);
    EXPECT_EQ(shell("frobnicate"), 2);
    EXPECT_EQ(shell("validate --scenario " + (dir_ / "missing.scenario").string() + " --out " + out), 5);
    EXPECT_NE(shell_stderr().find("i/o error"), std::string::npos);
    EXPECT_EQ(shell("--help"), 0);
}
