#include "commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nms::cli {
namespace {

namespace fs = std::filesystem;

const std::string kGolden = std::string(NMS_TEST_DATA_DIR) + "/golden_aapl_20160107.csv";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nms-disloc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nms_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"detect", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"detect"}).code, kExitUsage);
  EXPECT_EQ(invoke({"detect", "--input", (dir_ / "missing.csv").string()}).code, kExitUsage);
  EXPECT_EQ(invoke({"detect", "--input", kGolden, "--threshold-us", "-5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"detect", "--input", kGolden, "--ties", "sometimes"}).code, kExitUsage);
  EXPECT_EQ(invoke({"circle", "--input", kGolden, "--filter", "big"}).code, kExitUsage);
  EXPECT_EQ(invoke({"detect", "--input", kGolden, "--symbol", "bad sym"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, DataErrorsCarryLineNumbers) {
  const auto bad = write("bad.csv", "obs_ts_us,feed,kind,symbol,venue,bid_px_e4,bid_sz,ask_px_e4,ask_sz,trade_px_e4,"
                                    "trade_sz,side_hint,origin_ts_us\n10,SIP,Q,AAPL,0,x,1,2,1,,,U,\n");
  auto r = invoke({"detect", "--input", bad.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;

  const auto unordered = write("unordered.csv", "obs_ts_us,feed,kind,symbol,venue,bid_px_e4,bid_sz,ask_px_e4,ask_sz,"
                                                "trade_px_e4,trade_sz,side_hint,origin_ts_us\n"
                                                "20,SIP,Q,AAPL,0,991300,1,991500,1,,,U,\n"
                                                "10,SIP,Q,AAPL,0,991300,1,991500,1,,,U,\n");
  r = invoke({"roc", "--input", unordered.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitData);

  const auto segs = write("segs.csv", "nope\n");
  EXPECT_EQ(invoke({"stats", "--segments", segs.string(), "--out", dir_.string()}).code, kExitData);
}

TEST_F(CliTest, DetectAndRocOnGoldenFile) {
  auto r = invoke({"detect", "--input", kGolden, "--out", dir_.string(), "--snapshots"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto segs = slurp(dir_ / "segments.csv");
  EXPECT_NE(segs.find("AAPL,offer,35335396886,35335398749,1863,-1,-600,-200,200,600,1,1,0,1"), std::string::npos)
      << segs;
  EXPECT_TRUE(fs::exists(dir_ / "histogram.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "snapshots.csv"));

  r = invoke({"roc", "--input", kGolden, "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("trades 97"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("net_roc 17.80 total_roc 41.80"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "trades_roc.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "aggregate.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "table1.csv"));

  r = invoke({"circle", "--segments", (dir_ / "segments.csv").string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "nodes.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "edges.csv"));
  EXPECT_EQ(slurp(dir_ / "components.csv"), "component_id,node_indices,walk_steps\n0,0 1 2,1 1 -2\n");

  r = invoke({"stats", "--segments", (dir_ / "segments.csv").string(), "--days", "1", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "stats.csv"));
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
  const auto sim_dir = dir_ / "sim";
  auto r = invoke({"simulate", "--seed", "4", "--orders", "4000", "--horizon-us", "2000000", "--sip-processing-us",
                   "250", "--symbol", "AAA", "--symbol", "BBB", "--symbol", "CCC", "--out", sim_dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto events = (sim_dir / "events.csv").string();
  std::string first;
  for (const char* threads : {"1", "2", "4"}) {
    const auto out = dir_ / ("t" + std::string(threads));
    r = invoke({"detect", "--input", events, "--threads", threads, "--out", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    r = invoke({"roc", "--input", events, "--threads", threads, "--out", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto text = slurp(out / "segments.csv") + slurp(out / "trades_roc.csv") + slurp(out / "aggregate.csv");
    if (first.empty()) {
      first = text;
    } else {
      EXPECT_EQ(text, first) << threads;
    }
  }
  EXPECT_GT(first.size(), 1000u);
}

TEST_F(CliTest, SimulateTruthMatchesCoalescedDetect) {
  auto r = invoke({"simulate", "--seed", "9", "--orders", "3000", "--horizon-us", "1000000", "--sip-processing-us",
                   "300", "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "scenario.cfg"));
  const auto truth = slurp(dir_ / "truth.csv");
  const auto det = dir_ / "det";
  r = invoke({"detect", "--input", (dir_ / "events.csv").string(), "--ties", "coalesce", "--out", det.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(det / "segments.csv"), truth);

  const auto again = dir_ / "again";
  r = invoke({"simulate", "--scenario", (dir_ / "scenario.cfg").string(), "--sip-processing-us", "300", "--out",
              again.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(again / "events.csv"), slurp(dir_ / "events.csv"));
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  const auto cfg = write("run.ini", "[detect]\nthreshold-us = 5000\nties = coalesce\n");
  const auto a = dir_ / "a";
  auto r = invoke({"--config", cfg.string(), "detect", "--input", kGolden, "--out", a.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(a / "segments.csv").find(",1,1,0,1"), std::string::npos);

  const auto b = dir_ / "b";
  r = invoke({"--config", cfg.string(), "detect", "--input", kGolden, "--threshold-us", "545", "--out", b.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(slurp(b / "segments.csv").find(",1,1,0,1"), std::string::npos);
}

TEST(ResolveThreads, FlagThenEnvironment) {
  EXPECT_EQ(resolve_threads(3), 3u);
  ::setenv("NMS_DISLOC_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0), 5u);
  ::setenv("NMS_DISLOC_THREADS", "junk", 1);
  EXPECT_EQ(resolve_threads(0), 1u);
  ::unsetenv("NMS_DISLOC_THREADS");
  EXPECT_EQ(resolve_threads(0), 1u);
}

} // namespace
} // namespace nms::cli
