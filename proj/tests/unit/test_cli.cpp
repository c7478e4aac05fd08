#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anontx/cli/app.hpp"
#include "json.hpp"

namespace anontx::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "anontx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("anontx_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv(kOutDirEnv);
  }
  void TearDown() override {
    ::unsetenv(kOutDirEnv);
    fs::remove_all(dir_);
  }
  fs::path dir_;
};

TEST_F(CliTest, AnonSummary) {
  const auto r = invoke({"anon", "--n", "5", "--sender", "2", "--d", "1", "--seed", "7"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "decoded=1\n");
}

TEST_F(CliTest, CollisionSummary) {
  const auto r = invoke({"collision", "--n", "8", "--wishers", "1,4,6", "--seed", "3"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("first_odd_round=1"), std::string::npos);
}

TEST_F(CliTest, VerdictSummary) {
  const auto r = invoke({"verdict", "--protocol", "anon", "--target", "sender", "--t", "0",
                         "--mode", "exact", "--n", "4"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "posterior_max=0.25 baseline=0.25 PASS\n");
}

TEST_F(CliTest, VerdictFailureExitCode) {
  const auto r = invoke({"verdict", "--protocol", "dcnet", "--n", "4", "--traceless",
                         "--d", "1"});
  EXPECT_EQ(r.code, kVerdictFailure);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, MissingSeedIsConfigError) {
  const auto r = invoke({"anon", "--n", "5", "--sender", "2", "--d", "1"});
  EXPECT_EQ(r.code, kConfigError);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"], "config");
  EXPECT_EQ(j["exit_code"], 2);
}

TEST_F(CliTest, BadFlagsAreConfigErrors) {
  EXPECT_EQ(invoke({"anon", "--n", "5", "--sender", "9", "--seed", "1"}).code, kConfigError);
  EXPECT_EQ(invoke({"anon", "--n", "5", "--bogus"}).code, kConfigError);
  EXPECT_EQ(invoke({"collision", "--n", "4", "--wishers", "1,7", "--seed", "1"}).code,
            kConfigError);
  EXPECT_EQ(invoke({"verdict", "--n", "4", "--t", "3"}).code, kConfigError);
  EXPECT_EQ(invoke({"anonq", "--n", "4", "--sender", "0", "--receiver", "1", "--alpha",
                    "1", "--beta", "1", "--seed", "1"})
                .code,
            kConfigError);
  EXPECT_EQ(invoke({"ae", "--n", "4", "--sender", "1", "--receiver", "1", "--seed", "1"}).code,
            kConfigError);
  EXPECT_EQ(invoke({"sweep", "--kind", "nope", "--seed", "1"}).code, kConfigError);
  EXPECT_EQ(invoke({}).code, kConfigError);
}

TEST_F(CliTest, AbortSavesPartialTranscript) {
  const auto path = dir_ / "abort.json";
  const auto r = invoke({"anon", "--n", "4", "--sender", "0", "--d", "1", "--withhold", "2",
                         "--seed", "1", "--out", path.string()});
  EXPECT_EQ(r.code, kProtocolAbort);
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(j["aborted"], true);
  EXPECT_EQ(j["rounds"][0].size(), 3u);
  EXPECT_TRUE(j["verdicts"]["decoded"].is_null());
}

TEST_F(CliTest, OutputIsByteIdenticalPerSeed) {
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"anon", "--n", "6", "--sender", "3", "--d", "1", "--seed", "11"},
           {"ae", "--n", "5", "--sender", "1", "--receiver", "4", "--seed", "11"},
           {"anonq", "--n", "4", "--sender", "0", "--receiver", "2", "--alpha", "0.6",
            "--beta", "0,0.8", "--seed", "11"},
           {"collision", "--n", "9", "--wishers", "0,3,5,8", "--seed", "11"},
           {"dcnet", "--n", "5", "--topology", "cycle", "--sender", "2", "--d", "1",
            "--seed", "11"}}) {
    auto a = cmd, b = cmd;
    a.insert(a.end(), {"--out", (dir_ / "a.json").string()});
    b.insert(b.end(), {"--out", (dir_ / "b.json").string()});
    ASSERT_EQ(invoke(a).code, kOk) << cmd[0];
    ASSERT_EQ(invoke(b).code, kOk) << cmd[0];
    EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json")) << cmd[0];
  }
}

TEST_F(CliTest, EnvironmentDirectory) {
  ::setenv(kOutDirEnv, dir_.c_str(), 1);
  ASSERT_EQ(invoke({"anon", "--n", "3", "--sender", "0", "--d", "0", "--seed", "5"}).code, kOk);
  const auto path = dir_ / "anon-n3-s5.json";
  ASSERT_TRUE(fs::exists(path));
  EXPECT_EQ(nlohmann::json::parse(slurp(path))["verdicts"]["decoded"], 0);
  EXPECT_FALSE(fs::exists(dir_ / "anon-n3-s5.json.tmp"));
}

TEST_F(CliTest, NoFileWithoutDestination) {
  const auto before = std::distance(fs::directory_iterator(dir_), fs::directory_iterator{});
  invoke({"anon", "--n", "3", "--sender", "0", "--d", "0", "--seed", "5"});
  EXPECT_EQ(std::distance(fs::directory_iterator(dir_), fs::directory_iterator{}), before);
}

TEST_F(CliTest, KeygraphFromFiles) {
  {
    std::ofstream f(dir_ / "g.txt");
    f << "# star\n0 1\n0 2\n0 3\n0 4\n";
  }
  const auto r = invoke({"keygraph", "--graph", (dir_ / "g.txt").string(), "--colluders", "0",
                         "--out", (dir_ / "k.json").string()});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("min_degree=1 FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("tolerance=0"), std::string::npos);
  EXPECT_NE(r.out.find("partitions=true"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir_ / "k.json"));
  {
    std::ofstream f(dir_ / "g.json");
    f << j["graph"].dump();
  }
  const auto again = invoke({"keygraph", "--graph", (dir_ / "g.json").string()});
  EXPECT_EQ(again.code, kOk);
  EXPECT_NE(again.out.find("tolerance=0"), std::string::npos);
}

TEST_F(CliTest, DcnetTraces) {
  const auto r =
      invoke({"dcnet", "--n", "4", "--sender", "3", "--d", "1", "--seed", "9"});
  EXPECT_EQ(r.out, "decoded=1 traced=3\n");
}

TEST_F(CliTest, SampledVerdictNeedsSeed) {
  EXPECT_EQ(invoke({"verdict", "--n", "4", "--mode", "sampled", "--trials", "100"}).code,
            kConfigError);
  EXPECT_EQ(invoke({"verdict", "--n", "4", "--mode", "sampled", "--seed", "3", "--d", "1"})
                .code,
            kOk);
}

TEST_F(CliTest, CollisionSweepMatchesPrediction) {
  RunConfig c;
  c.command = "sweep";
  c.kind = "collision";
  c.seed = 1;
  c.n_min = 2;
  c.n_max = 16;
  c.threads = 4;
  const std::string csv = sweep_csv(c);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,n,k,stream,verdict,first_odd_round,expected_round,rounds,match,error");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",true,"), std::string::npos) << line;
  }
  int expected = 0;
  for (int n = 2; n <= 16; ++n) expected += n + 1;
  EXPECT_EQ(rows, expected);
  c.threads = 1;
  EXPECT_EQ(sweep_csv(c), csv);
}

TEST_F(CliTest, AnonAndToleranceSweeps) {
  RunConfig c;
  c.command = "sweep";
  c.seed = 2;
  c.kind = "anon";
  c.n_min = 3;
  c.n_max = 6;
  {
    std::istringstream in(sweep_csv(c));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) EXPECT_NE(line.find(",true,"), std::string::npos) << line;
  }
  c.kind = "tolerance";
  c.n_min = c.n_max = 5;
  std::istringstream in(sweep_csv(c));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",true,"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 1024);
}

TEST_F(CliTest, StreamIdsDependOnCoordinates) {
  EXPECT_NE(cell_stream_id(1, {3, 4}), cell_stream_id(1, {4, 3}));
  EXPECT_NE(cell_stream_id(1, {3, 4}), cell_stream_id(2, {3, 4}));
  EXPECT_EQ(cell_stream_id(1, {3, 4}), cell_stream_id(1, {3, 4}));
}

TEST_F(CliTest, SweepWritesFile) {
  const auto path = dir_ / "sweep.csv";
  const auto r = invoke({"sweep", "--kind", "collision", "--n-min", "2", "--n-max", "3",
                         "--seed", "4", "--out", path.string()});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  const std::string csv = slurp(path);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 + 4);
}

}  // namespace
}  // namespace anontx::cli
