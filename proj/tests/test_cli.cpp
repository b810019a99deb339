#include <gtest/gtest.h>

#include "json.hpp"
#include "ranksense/table_csv.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = RANKSENSE_CLI;
const fs::path kSamples = RANKSENSE_SAMPLES;

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

oracle::CommandResult cli(const std::string& args, bool merge_stderr = false) {
  return oracle::run(q(kCli) + " " + args, merge_stderr);
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name, std::ios::binary) << text;
  return dir / name;
}

json error_json(const std::string& args) {
  const auto r = oracle::run("(" + q(kCli) + " " + args + " 2>&1 >/dev/null)");
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, RankWritesReportAndPlotData) {
  const auto dir = oracle::scratch_dir("cli_rank");
  const auto r = cli("rank --results " + q(kSamples / "results_demo.csv") + " --family case-based --plot-data " +
                     q(dir / "plot.csv"));
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["command"], "rank");
  EXPECT_EQ(j["config"]["scheme"]["family"], "case-based");
  EXPECT_EQ(j["result"]["ranking"]["entries"].size(), 5u);
  EXPECT_EQ(j["inputs"][0]["fnv1a64"].get<std::string>().size(), 16u);
  EXPECT_EQ(oracle::read_file(dir / "plot.csv").substr(0, 18), "series,label,value");
}

TEST(Cli, CompositeAndCustomMetric) {
  const auto dir = oracle::scratch_dir("cli_composite");
  const auto csv = write(dir, "t.csv",
                         "algorithm,case,metric,value\n"
                         "a,c1,DSC,0.9\na,c1,Time,10\n"
                         "b,c1,DSC,0.8\nb,c1,Time,2\n");
  const auto r = cli("rank --results " + q(csv) + " --metrics DSC,Time --metric-spec Time:lower-better:0:1000");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["result"]["ranking"]["winners"], json::array({"b"}));
  EXPECT_EQ(cli("rank --results " + q(csv) + " --metrics DSC,Time").status, 3);
}

TEST(Cli, RobustnessIsByteIdenticalAcrossThreadCounts) {
  const auto dir = oracle::scratch_dir("cli_determinism");
  const std::string base = "robustness --results " + q(kSamples / "results_demo.csv") + " --samples 300 --seed 11";
  ASSERT_EQ(cli(base + " --threads 1 --out " + q(dir / "a.json") + " --plot-data " + q(dir / "a.csv")).status, 0);
  ASSERT_EQ(cli(base + " --threads 4 --out " + q(dir / "b.json") + " --plot-data " + q(dir / "b.csv")).status, 0);
  ASSERT_EQ(cli(base + " --threads 1 --out " + q(dir / "c.json")).status, 0);
  EXPECT_EQ(oracle::read_file(dir / "a.json"), oracle::read_file(dir / "b.json"));
  EXPECT_EQ(oracle::read_file(dir / "a.json"), oracle::read_file(dir / "c.json"));
  EXPECT_EQ(oracle::read_file(dir / "a.csv"), oracle::read_file(dir / "b.csv"));
  EXPECT_EQ(oracle::read_file(dir / "a.json").find("thread"), std::string::npos);
}

TEST(Cli, LeaveOneOutAndAudit) {
  const auto loo = cli("loo --results " + q(kSamples / "results_demo.csv"));
  ASSERT_EQ(loo.status, 0);
  EXPECT_EQ(json::parse(loo.out)["result"]["resamples"], 12);

  const auto dir = oracle::scratch_dir("cli_audit");
  const auto csv = write(dir, "t.csv",
                         "algorithm,case,metric,value\n"
                         "A1,c1,DSC,0.8\nA1,c2,DSC,0.8\nA1,c3,DSC,0.8\n"
                         "A2,c1,DSC,0.9\nA2,c2,DSC,0.9\nA2,c3,DSC,0.4\n");
  const auto audit = cli("audit-missing --results " + q(csv) + " --threshold 0.5");
  ASSERT_EQ(audit.status, 0);
  const auto j = json::parse(audit.out);
  EXPECT_EQ(j["result"]["non_winners_reaching_rank_1"], 1);
  EXPECT_EQ(j["result"]["findings"][1]["audited_rank"], 1.0);
}

TEST(Cli, ObserversAndSchemes) {
  const auto dir = oracle::scratch_dir("cli_observers");
  const auto a = write(dir, "a.csv",
                       "algorithm,case,metric,value\nx,c1,DSC,0.9\ny,c1,DSC,0.5\nz,c1,DSC,0.1\n"
                       "x,c2,DSC,0.8\ny,c2,DSC,0.6\nz,c2,DSC,0.2\n");
  const auto b = write(dir, "b.csv",
                       "algorithm,case,metric,value\nx,c1,DSC,0.1\ny,c1,DSC,0.5\nz,c1,DSC,0.9\n"
                       "x,c2,DSC,0.2\ny,c2,DSC,0.6\nz,c2,DSC,0.8\n");
  const auto r = cli("compare-observers --observer first=" + q(a) + " --observer second=" + q(b));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(json::parse(r.out)["result"]["tau"][0][1], -1.0);

  const auto s = cli("compare-schemes --results " + q(a) + " " + q(b) +
                     " --samples 50 --b-op mean");
  ASSERT_EQ(s.status, 0) << s.out;
  EXPECT_EQ(json::parse(s.out)["result"]["degenerate"], true);
}

TEST(Cli, MetricsFromMasks) {
  const auto dir = oracle::scratch_dir("cli_metrics");
  const auto r = cli("metrics --ref " + q(kSamples / "masks" / "ref") + " --pred " + q(kSamples / "masks" / "pred") +
                     " --out " + q(dir / "table.csv"));
  ASSERT_EQ(r.status, 0) << r.out;
  const auto report = json::parse(r.out);
  EXPECT_EQ(report["result"]["missing_predictions"].size(), 1u);
  std::ifstream in(dir / "table.csv");
  const auto t = ranksense::read_results_csv(in);
  EXPECT_EQ(t.algorithms(), (std::vector<std::string>{"alpha", "beta", "gamma"}));
  EXPECT_EQ(t.cases().size(), 5u);
  const auto beta = *t.algorithm_index("beta"), gamma = *t.algorithm_index("gamma");
  const auto case4 = *t.case_index("case4"), case5 = *t.case_index("case5");
  EXPECT_FALSE(t.value(beta, case4, *t.metric_index("DSC")).has_value());
  EXPECT_EQ(t.value(gamma, case5, *t.metric_index("DSC")), 0.0);
  EXPECT_FALSE(t.value(gamma, case5, *t.metric_index("HD")).has_value());
}

TEST(Cli, SpecValidationAndCoverage) {
  const auto ok = cli("validate-spec --require-gate --doc " + q(kSamples / "challenge_description.json"));
  ASSERT_EQ(ok.status, 0);
  EXPECT_EQ(json::parse(ok.out)["result"]["completeness"]["essential_pct"], 95.0);

  const auto dir = oracle::scratch_dir("cli_spec");
  const auto sparse = write(dir, "sparse.json", R"({"challenge_organization": {"challenge_name": {"value": "x"}}})");
  EXPECT_EQ(cli("validate-spec --doc " + q(sparse)).status, 0);
  EXPECT_EQ(cli("validate-spec --require-gate --doc " + q(sparse)).status, 8);

  const auto bad = write(dir, "bad.json", R"({"challenge_organization": {"challenge_nmae": {"value": "x"}}})");
  EXPECT_EQ(cli("validate-spec --doc " + q(bad)).status, 5);
  const auto err = error_json("validate-spec --doc " + q(bad));
  EXPECT_EQ(err["error"]["class"], "ValidationError");
  EXPECT_NE(err["error"]["message"].get<std::string>().find("challenge_nmae"), std::string::npos);

  const auto cov = cli("coverage --docs " + q(kSamples / "challenge_description.json") + " " + q(sparse));
  ASSERT_EQ(cov.status, 0);
  const auto params = json::parse(cov.out)["result"]["parameters"];
  EXPECT_EQ(params[0]["pct"], 100.0);
  EXPECT_EQ(params[0]["band"], "green");
  EXPECT_EQ(params[1]["band"], "orange");

  const auto reg = cli("validate-spec --print-registry");
  EXPECT_EQ(json::parse(reg.out), json::parse(oracle::read_file(fs::path(RANKSENSE_DATA) / "challenge_registry.v1.json")));
}

TEST(Cli, ErrorClassesAndExitCodes) {
  const auto dir = oracle::scratch_dir("cli_errors");
  EXPECT_EQ(cli("rank --results " + q(dir / "nope.csv")).status, 3);
  EXPECT_EQ(error_json("rank --results " + q(dir / "nope.csv"))["error"]["class"], "InputError");

  const auto bad = write(dir, "bad.csv", "algorithm,case,metric,value\na,c,DSC,zero\n");
  EXPECT_EQ(cli("rank --results " + q(bad)).status, 4);

  const auto small = write(dir, "small.csv", "algorithm,case,metric,value\na,c1,DSC,0.5\nb,c1,DSC,0.4\n");
  EXPECT_EQ(cli("robustness --results " + q(small)).status, 6);
  EXPECT_NE(error_json("robustness --results " + q(small))["error"]["message"].get<std::string>().find(
                "Number of algorithms >= 3"),
            std::string::npos);

  EXPECT_EQ(cli("rank --results " + q(small) + " --family bogus").status, 3);
  EXPECT_EQ(cli("rank").status, 2);
  EXPECT_EQ(cli("").status, 2);
}
