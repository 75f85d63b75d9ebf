#include <fstream>
#include <iterator>
#include <sstream>

#include <gtest/gtest.h>
#include <opencv2/imgcodecs.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "stereosal/errors.hpp"

namespace stereosal {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<RgbdSample> small_scenes(int count) {
  std::vector<RgbdSample> out;
  int k = 0;
  for (testing::SceneParams p : testing::fixture_suite(count)) {
    p.width = 160;
    p.height = 120;
    RgbdSample s = testing::make_scene(p);
    s.id = "s" + std::to_string(k++);
    out.push_back(std::move(s));
  }
  return out;
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  return json::parse(is);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = testing::temp_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  fs::path root_;
};

TEST_F(CliTest, RunWritesMapAndManifest) {
  testing::write_dataset(root_ / "data", small_scenes(1));
  const fs::path out = root_ / "out";
  const int code = cli::run_cli({"run", "--rgb", (root_ / "data/rgb/s0.png").string(), "--depth",
                                 (root_ / "data/depth/s0.png").string(), "--out", out.string()});
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(out / "s0.png"));
  EXPECT_FALSE(fs::exists(out / "s0_cs.png"));
  const json m = read_json(out / "manifest.json");
  EXPECT_EQ(m["command"], "run");
  ASSERT_EQ(m["samples"].size(), 1u);
  EXPECT_EQ(m["samples"][0]["id"], "s0");
  EXPECT_TRUE(m["samples"][0].contains("lambda_d"));
  EXPECT_EQ(m["config"]["superpixels"], 200);
  EXPECT_EQ(m["config"]["depth_term"], "neighbor");
  const cv::Mat map = cv::imread((out / "s0.png").string(), cv::IMREAD_UNCHANGED);
  EXPECT_EQ(map.type(), CV_8UC1);
  EXPECT_EQ(map.size(), cv::Size(160, 120));
}

TEST_F(CliTest, RunRejectsMismatchedDimensions) {
  fs::create_directories(root_);
  cv::imwrite((root_ / "rgb.png").string(), cv::Mat(40, 50, CV_8UC3, cv::Scalar::all(90)));
  cv::imwrite((root_ / "depth.png").string(), cv::Mat(30, 50, CV_8U, cv::Scalar(10)));
  ::testing::internal::CaptureStderr();
  const int code = cli::run_cli({"run", "--rgb", (root_ / "rgb.png").string(), "--depth",
                                 (root_ / "depth.png").string(), "--out", (root_ / "out").string()});
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, 1);
  EXPECT_NE(err.find("40x50"), std::string::npos) << err;
  EXPECT_NE(err.find("30x50"), std::string::npos) << err;
  EXPECT_FALSE(fs::exists(root_ / "out" / "rgb.png"));
}

TEST_F(CliTest, RunEmitsIntermediates) {
  testing::write_dataset(root_ / "data", small_scenes(1));
  const fs::path out = root_ / "out";
  ASSERT_EQ(cli::run_cli({"run", "--rgb", (root_ / "data/rgb/s0.png").string(), "--depth",
                          (root_ / "data/depth/s0.png").string(), "--out", out.string(),
                          "--emit-intermediate"}),
            0);
  for (const char* suffix : {".png", "_cs.png", "_fs.png", "_seeds.png"}) {
    EXPECT_TRUE(fs::exists(out / (std::string("s0") + suffix))) << suffix;
  }
  const json row = read_json(out / "manifest.json")["samples"][0];
  EXPECT_TRUE(row.contains("compactness"));
  EXPECT_TRUE(row.contains("seeds"));
}

TEST_F(CliTest, RunRejectsBadFlag) {
  ::testing::internal::CaptureStderr();
  ::testing::internal::CaptureStdout();
  const int code = cli::run_cli({"run", "--rgb", "a.png", "--depth", "b.png", "--out", "o",
                                 "--depth-term", "sideways"});
  ::testing::internal::GetCapturedStdout();
  ::testing::internal::GetCapturedStderr();
  EXPECT_NE(code, 0);
}

TEST_F(CliTest, BatchTwoSamples) {
  testing::write_dataset(root_ / "data", small_scenes(2));
  const fs::path out = root_ / "out";
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", out.string()}),
            0);
  EXPECT_TRUE(fs::exists(out / "s0.png"));
  EXPECT_TRUE(fs::exists(out / "s1.png"));
  const json m = read_json(out / "manifest.json");
  EXPECT_EQ(m["command"], "batch");
  ASSERT_EQ(m["samples"].size(), 2u);
  EXPECT_EQ(m["samples"][0]["id"], "s0");
  EXPECT_EQ(m["samples"][1]["id"], "s1");
  EXPECT_TRUE(m["failures"].empty());
}

TEST_F(CliTest, BatchIndependentOfWorkerCount) {
  testing::write_dataset(root_ / "data", small_scenes(5));
  const fs::path one = root_ / "one";
  const fs::path eight = root_ / "eight";
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", one.string(),
                          "--jobs", "1"}),
            0);
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", eight.string(),
                          "--jobs", "8"}),
            0);
  for (int k = 0; k < 5; ++k) {
    const std::string name = "s" + std::to_string(k) + ".png";
    EXPECT_EQ(read_bytes(one / name), read_bytes(eight / name)) << name;
  }
  const json a = read_json(one / "manifest.json");
  const json b = read_json(eight / "manifest.json");
  ASSERT_EQ(a["samples"].size(), b["samples"].size());
  for (std::size_t k = 0; k < a["samples"].size(); ++k) {
    EXPECT_EQ(a["samples"][k]["id"], b["samples"][k]["id"]);
    EXPECT_EQ(a["samples"][k]["lambda_d"], b["samples"][k]["lambda_d"]);
  }
}

TEST_F(CliTest, BatchReportsCorruptSample) {
  testing::write_dataset(root_ / "data", small_scenes(3));
  std::ofstream(root_ / "data/depth/s1.png", std::ios::trunc) << "corrupt";
  const fs::path out = root_ / "out";
  ::testing::internal::CaptureStderr();
  const int code = cli::run_cli(
      {"batch", "--dataset", (root_ / "data").string(), "--out", out.string(), "--jobs", "2"});
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(code, 0);
  EXPECT_TRUE(fs::exists(out / "s0.png"));
  EXPECT_FALSE(fs::exists(out / "s1.png"));
  EXPECT_TRUE(fs::exists(out / "s2.png"));
  const json m = read_json(out / "manifest.json");
  EXPECT_EQ(m["samples"].size(), 2u);
  ASSERT_EQ(m["failures"].size(), 1u);
  EXPECT_EQ(m["failures"][0]["id"], "s1");
  EXPECT_NE(err.find("s1"), std::string::npos);
}

TEST_F(CliTest, BatchListsSkippedIds) {
  testing::write_dataset(root_ / "data", small_scenes(2));
  fs::remove(root_ / "data/depth/s1.png");
  const fs::path out = root_ / "out";
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", out.string()}),
            0);
  const json m = read_json(out / "manifest.json");
  EXPECT_EQ(m["samples"].size(), 1u);
  EXPECT_EQ(m["skipped"], json::array({"s1"}));
}

TEST_F(CliTest, ManifestConfigReproducesMaps) {
  testing::write_dataset(root_ / "data", small_scenes(2));
  const fs::path first = root_ / "first";
  const fs::path second = root_ / "second";
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", first.string(),
                          "--superpixels", "120", "--tau", "0.4", "--gamma", "0.7", "--levels",
                          "0.3,0.7", "--depth-term", "own", "--no-drss"}),
            0);
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", second.string(),
                          "--config", (first / "manifest.json").string()}),
            0);
  const json a = read_json(first / "manifest.json");
  const json b = read_json(second / "manifest.json");
  EXPECT_EQ(a["config"], b["config"]);
  EXPECT_EQ(a["config"]["superpixels"], 120);
  EXPECT_EQ(a["config"]["depth_term"], "own");
  EXPECT_EQ(a["config"]["drss"], false);
  for (const char* name : {"s0.png", "s1.png"}) {
    EXPECT_EQ(read_bytes(first / name), read_bytes(second / name)) << name;
  }

  const fs::path third = root_ / "third";
  ASSERT_EQ(cli::run_cli({"batch", "--dataset", (root_ / "data").string(), "--out", third.string(),
                          "--config", (first / "manifest.json").string(), "--superpixels", "90"}),
            0);
  const json c = read_json(third / "manifest.json");
  EXPECT_EQ(c["config"]["superpixels"], 90);
  EXPECT_EQ(c["config"]["tau"], 0.4);
}

TEST(CliConfig, JsonRoundTrip) {
  PipelineConfig cfg;
  cfg.superpixels = 150;
  cfg.levels = {0.2, 0.5, 0.8};
  cfg.alpha = 0.9;
  cfg.ring = 2;
  cfg.invert_depth = true;
  cfg.diffusion = false;
  cfg.depth_term = DepthTermIndex::Own;
  cfg.objectness_path = "/tmp/obj";
  const PipelineConfig back = cli::config_from_json(cli::config_to_json(cfg));
  EXPECT_EQ(cli::config_to_json(back), cli::config_to_json(cfg));
  EXPECT_EQ(back.levels, cfg.levels);
  EXPECT_EQ(back.depth_term, DepthTermIndex::Own);
  EXPECT_THROW(cli::config_from_json(json{{"tau", 2.0}}), ConfigError);
  EXPECT_THROW(cli::config_from_json(json{{"tau", "high"}}), ConfigError);
}

void write_u8(const fs::path& p, const cv::Mat& m) {
  fs::create_directories(p.parent_path());
  ASSERT_TRUE(cv::imwrite(p.string(), m));
}

cv::Mat half_mask() {
  cv::Mat m(8, 8, CV_8U, cv::Scalar(0));
  m.rowRange(0, 4).setTo(255);
  return m;
}

TEST_F(CliTest, EvalPerfectMaps) {
  for (const char* id : {"a", "b"}) {
    write_u8(root_ / "pred" / (std::string(id) + ".png"), half_mask());
    write_u8(root_ / "gt" / (std::string(id) + ".png"), half_mask());
  }
  ::testing::internal::CaptureStdout();
  const int code = cli::run_cli({"eval", "--pred-dir", (root_ / "pred").string(), "--gt-dir",
                                 (root_ / "gt").string(), "--report",
                                 (root_ / "report.csv").string()});
  ::testing::internal::GetCapturedStdout();
  ASSERT_EQ(code, 0);
  const auto rows = read_csv(root_ / "report.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.back()[0], "mean");
  EXPECT_DOUBLE_EQ(std::stod(rows.back()[3]), 1.0);
  EXPECT_DOUBLE_EQ(std::stod(rows.back()[4]), 0.0);
  EXPECT_EQ(read_csv(root_ / "report_pr.csv").size(), 257u);
}

TEST_F(CliTest, EvalDisjointBasenames) {
  write_u8(root_ / "pred" / "a.png", half_mask());
  write_u8(root_ / "gt" / "b.png", half_mask());
  ::testing::internal::CaptureStderr();
  const int code = cli::run_cli({"eval", "--pred-dir", (root_ / "pred").string(), "--gt-dir",
                                 (root_ / "gt").string(), "--report",
                                 (root_ / "report.csv").string()});
  ::testing::internal::GetCapturedStderr();
  EXPECT_EQ(code, 1);
}

TEST_F(CliTest, EvalMixedMatchesHandMeans) {
  const cv::Mat gt = half_mask();
  write_u8(root_ / "pred" / "a.png", gt);                                      // P=R=F=1, MAE 0
  write_u8(root_ / "pred" / "b.png", cv::Mat(8, 8, CV_8U, cv::Scalar(51)));  // empty, MAE 0.5
  write_u8(root_ / "pred" / "c.png", 255 - gt);                                // P=R=F=0, MAE 1
  write_u8(root_ / "pred" / "d.png", gt);                                      // empty gt
  for (const char* id : {"a", "b", "c"}) write_u8(root_ / "gt" / (std::string(id) + ".png"), gt);
  write_u8(root_ / "gt" / "d.png", cv::Mat(8, 8, CV_8U, cv::Scalar(0)));
  ::testing::internal::CaptureStdout();
  ::testing::internal::CaptureStderr();
  const int code = cli::run_cli({"eval", "--pred-dir", (root_ / "pred").string(), "--gt-dir",
                                 (root_ / "gt").string(), "--report",
                                 (root_ / "r" / "report.csv").string(), "--pr-curve",
                                 (root_ / "curve.csv").string()});
  ::testing::internal::GetCapturedStdout();
  const std::string err = ::testing::internal::GetCapturedStderr();
  ASSERT_EQ(code, 0);
  EXPECT_NE(err.find("d excluded"), std::string::npos) << err;
  const auto rows = read_csv(root_ / "r" / "report.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[1][0], "a");
  EXPECT_EQ(rows[2][0], "b");
  EXPECT_EQ(rows[3][0], "c");
  const std::vector<std::string>& mean = rows[4];
  EXPECT_EQ(mean[0], "mean");
  EXPECT_NEAR(std::stod(mean[1]), 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(std::stod(mean[2]), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(std::stod(mean[3]), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(std::stod(mean[4]), 0.5, 1e-9);
  EXPECT_TRUE(fs::exists(root_ / "curve.csv"));
}

}  // namespace
}  // namespace stereosal
