#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

#include "esrinet/esrinet.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using esrinet::testing::fixture_dir;
using esrinet::testing::scratch_dir;

namespace {

struct Result {
  int exit = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args) {
  static int counter = 0;
  const auto dir = fs::temp_directory_path() / "esrinet_cli_capture";
  fs::create_directories(dir);
  const auto out = dir / ("out" + std::to_string(counter));
  const auto err = dir / ("err" + std::to_string(counter++));
  const std::string cmd = std::string(ESRINET_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fig1() { return fixture_dir("fig1").string(); }

nlohmann::json json_file(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST(Cli, ValidateFixture) {
  const auto dir = scratch_dir("cli_validate");
  const auto r = run("validate --net " + fig1() + " --out " + dir.string());
  ASSERT_EQ(r.exit, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["num_firms"], 5);
  EXPECT_EQ(j["num_edges"], 5);
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  EXPECT_TRUE(fs::exists(dir / "validation.json"));
}

TEST(Cli, StrategyRatioOnFixture) {
  const auto dir = scratch_dir("cli_strategy");
  const auto r = run("strategy --heuristic ratio --target 0.5 --net " + fig1() + " --out " + dir.string());
  ASSERT_EQ(r.exit, 0) << r.err;
  const auto s = json_file(dir / "summary.json");
  EXPECT_NEAR(s["expected_job_loss"].get<double>(), 0.30, 1e-9);
  EXPECT_NEAR(s["co2_reduction"].get<double>(), 0.5, 1e-9);
  EXPECT_EQ(s["firms_removed"], 2);
  const auto curve = esrinet::csv::read_file(dir / "curve.csv");
  EXPECT_EQ(curve.header.back(), "benchmark_flag");
  std::size_t flags = 0;
  for (const auto& row : curve.rows) flags += row.back() == "1";
  EXPECT_EQ(flags, 1u);
}

TEST(Cli, StrategyEmittersOnFixture) {
  const auto dir = scratch_dir("cli_emitters");
  const auto r = run("strategy --heuristic emitters --target 0.5 --net " + fig1() + " --out " + dir.string());
  ASSERT_EQ(r.exit, 0) << r.err;
  EXPECT_NEAR(json_file(dir / "summary.json")["expected_job_loss"].get<double>(), 0.70, 1e-9);
}

TEST(Cli, UsageErrors) {
  auto r = run("validate --net " + fig1() + " --no-such-flag");
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  r = run("");
  EXPECT_EQ(r.exit, 2);
  r = run("simulate --remove d");
  EXPECT_EQ(r.exit, 2) << "missing --net";
  r = run("strategy --heuristic random --net " + fig1());
  EXPECT_EQ(r.exit, 2);
  EXPECT_EQ(run("--help").exit, 0);
}

TEST(Cli, DataErrorsAreSingleJsonLines) {
  const auto dir = scratch_dir("cli_data_err");
  auto r = run("simulate --net " + fig1() + " --remove zz --out " + dir.string());
  EXPECT_EQ(r.exit, 3);
  ASSERT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"], "InvalidScenario");

  r = run("validate --net /nonexistent --out " + dir.string());
  EXPECT_EQ(r.exit, 3);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "MissingFile");

  r = run("simulate --net " + fig1() + " --remove d --gamma 2 --out " + dir.string());
  EXPECT_EQ(r.exit, 3);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "InvalidArgument");

  r = run("synth --n-firms 10 --n-edges 500 --out " + dir.string());
  EXPECT_EQ(r.exit, 3);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "InfeasibleParams");
}

TEST(Cli, UnreachableTargetWritesCurveAndFails) {
  const auto dir = scratch_dir("cli_unreachable");
  std::ofstream(dir / "cands.txt") << "a\n";
  const auto r = run("strategy --heuristic ratio --target 0.9 --candidates " + (dir / "cands.txt").string() +
                     " --net " + fig1() + " --out " + (dir / "run").string());
  EXPECT_EQ(r.exit, 3);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "TargetUnreachable");
  EXPECT_TRUE(fs::exists(dir / "run" / "curve.csv"));
  EXPECT_FALSE(json_file(dir / "run" / "summary.json")["benchmark_reached"].get<bool>());
}

TEST(Cli, SimulateOutputs) {
  const auto dir = scratch_dir("cli_simulate");
  std::ofstream(dir / "remove.txt") << "firm_id\nd\n";
  const auto r = run("simulate --net " + fig1() + " --remove " + (dir / "remove.txt").string() + " --out " +
                     (dir / "run").string());
  ASSERT_EQ(r.exit, 0) << r.err;
  const auto meta = json_file(dir / "run" / "equilibrium.json");
  EXPECT_TRUE(meta["converged"].get<bool>());
  EXPECT_TRUE(meta.contains("iterations"));
  EXPECT_TRUE(meta.contains("max_delta"));
  const auto eq = esrinet::csv::read_file(dir / "run" / "equilibrium.csv");
  EXPECT_EQ(eq.header, (std::vector<std::string>{"firm_id", "h_d", "h_u", "h"}));
  EXPECT_EQ(eq.rows[2], (std::vector<std::string>{"c", "0.5", "1", "0.5"}));
  const auto audit = esrinet::csv::read_file(dir / "run" / "calibration_audit.csv");
  EXPECT_EQ(audit.header.front(), "firm_id");
}

TEST(Cli, NonConvergenceExitsZero) {
  const auto dir = scratch_dir("cli_nonconv");
  const auto r = run("simulate --net " + fig1() + " --remove d --max-iter 1 --out " + dir.string());
  EXPECT_EQ(r.exit, 0);
  EXPECT_FALSE(json_file(dir / "equilibrium.json")["converged"].get<bool>());
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, FlagsOverrideNetworkCalibration) {
  const auto dir = scratch_dir("cli_override");
  auto r = run("simulate --net " + fig1() + " --remove d --gamma 0.5 --out " + dir.string());
  ASSERT_EQ(r.exit, 0) << r.err;
  const auto eq = esrinet::csv::read_file(dir / "equilibrium.csv");
  EXPECT_EQ(eq.rows[2][3], "0.75");
  EXPECT_EQ(json_file(dir / "config.json")["calibration"]["gamma"], 0.5);
}

TEST(Cli, ConfigReproducesRun) {
  const auto dir = scratch_dir("cli_repro");
  auto r = run("esri --net " + fig1() + " --candidates all --tol 1e-11 --demand-shock cascade --out " +
               (dir / "a").string());
  ASSERT_EQ(r.exit, 0) << r.err;
  const auto cfg = json_file(dir / "a" / "config.json");
  std::ostringstream args;
  args << cfg["subcommand"].get<std::string>() << " --net " << cfg["net"].get<std::string>() << " --candidates "
       << cfg["options"]["candidates"].get<std::string>() << " --gamma " << cfg["calibration"]["gamma"].dump()
       << " --x0-rule " << cfg["calibration"]["x0_rule"].get<std::string>() << " --essentiality "
       << cfg["calibration"]["essentiality"].get<std::string>() << " --tol "
       << cfg["propagation"]["tolerance"].dump() << " --max-iter " << cfg["propagation"]["max_iterations"].dump()
       << " --demand-shock " << cfg["propagation"]["demand_shock"].get<std::string>() << " --out "
       << (dir / "b").string();
  r = run(args.str());
  ASSERT_EQ(r.exit, 0) << r.err;
  EXPECT_EQ(slurp(dir / "a" / "indices.csv"), slurp(dir / "b" / "indices.csv"));
}

TEST(Cli, SynthIsDeterministicAndValid) {
  const auto dir = scratch_dir("cli_synth");
  const std::string common = "synth --n-firms 300 --n-edges 1500 --n-ets 20 --seed 5 --out ";
  ASSERT_EQ(run(common + (dir / "a").string()).exit, 0);
  ASSERT_EQ(run(common + (dir / "b").string()).exit, 0);
  for (const char* f : {"firms.csv", "edges.csv", "essentiality.csv"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  const auto r = run("validate --net " + (dir / "a").string() + " --out " + (dir / "v").string());
  ASSERT_EQ(r.exit, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["num_ets"], 20);
}

TEST(Cli, SynthFixtureOverride) {
  const auto dir = scratch_dir("cli_synth_fixture");
  ASSERT_EQ(run("synth --n-firms 5 --fixture " + fig1() + " --out " + dir.string()).exit, 0);
  EXPECT_EQ(slurp(dir / "edges.csv"), esrinet::edges_to_csv(esrinet::load_network_dir(fixture_dir("fig1"))));
}

TEST(Cli, ThreadCountDoesNotChangeOutputs) {
  const auto dir = scratch_dir("cli_threads");
  ASSERT_EQ(run("synth --n-firms 400 --n-edges 2000 --n-ets 30 --seed 3 --out " + (dir / "net").string()).exit, 0);
  const std::string base = "report --net " + (dir / "net").string() + " --out ";
  ASSERT_EQ(run(base + (dir / "t1").string() + " --threads 1").exit, 0);
  ASSERT_EQ(run(base + (dir / "t4").string() + " --threads 4").exit, 0);
  for (const char* f : {"indices.csv", "fig3_ratio.csv", "fig4_emitters.csv", "table1.csv", "fig2_inset.csv"}) {
    EXPECT_EQ(slurp(dir / "t1" / f), slurp(dir / "t4" / f)) << f;
  }
}

TEST(Cli, EsriIndicesParseBack) {
  const auto dir = scratch_dir("cli_esri");
  ASSERT_EQ(run("esri --net " + fig1() + " --candidates all --out " + dir.string()).exit, 0);
  const auto net = esrinet::load_network_dir(fixture_dir("fig1"));
  const auto table = esrinet::read_indices_csv(dir / "indices.csv", &net);
  ASSERT_EQ(table.size(), 5u);
  EXPECT_NEAR(table[3].ew_esri, 0.7, 1e-12);
}

TEST(Cli, FitRegimesFromIndices) {
  const auto dir = scratch_dir("cli_fit");
  std::string csv = "firm_id,esri,ew_esri,co2_share_total,co2_share_ets,ratio\n";
  for (int r = 1; r <= 40; ++r) {
    const double ratio = r <= 10 ? 1e3 * std::exp(-0.41 * (r - 11)) : 999.0 * std::exp(-0.05 * (r - 11));
    csv += "f" + std::to_string(r) + ",0,0,0,0," + esrinet::csv::format_double(ratio / 100.0) + "\n";
  }
  std::ofstream(dir / "indices.csv") << csv;
  const auto r = run("fit-regimes --indices " + (dir / "indices.csv").string() + " --out " + (dir / "fit").string());
  ASSERT_EQ(r.exit, 0) << r.err;
  const auto j = json_file(dir / "fit" / "regimes.json");
  EXPECT_NEAR(j["lambda1"].get<double>(), -0.41, 1e-9);
  EXPECT_NEAR(j["lambda2"].get<double>(), -0.05, 1e-9);
  EXPECT_EQ(j["n1"], 10);
  EXPECT_EQ(j["n2"], 30);
  for (const char* k : {"r2_1", "r2_2"}) EXPECT_TRUE(j.contains(k));
}

TEST(Cli, ReportWritesFigureData) {
  const auto dir = scratch_dir("cli_report");
  const auto r = run("report --net " + fig1() + " --target 0.5 --candidates all --out " + dir.string());
  ASSERT_EQ(r.exit, 0) << r.err;
  for (const char* f : {"fig2_scatter.csv", "fig2_inset.csv", "fig3_emitters.csv", "fig3_risk.csv", "fig3_ratio.csv",
                        "fig4_ratio.csv", "table1.csv", "config.json", "indices.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(esrinet::csv::read_file(dir / "fig2_scatter.csv").rows.size(), 5u);
}
