#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <string>

#include <unistd.h>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace stereosal::testing {

namespace {

double uniform(std::mt19937& rng) {
  // portable mapping, independent of the standard library's distributions
  return static_cast<double>(rng() >> 8) / static_cast<double>(1u << 24);
}

}  // namespace

RgbdSample make_scene(const SceneParams& p) {
  std::mt19937 rng(p.seed);
  RgbdSample s;
  s.id = "scene_" + std::to_string(p.seed);
  s.rgb.create(p.height, p.width, CV_8UC3);
  s.depth.create(p.height, p.width);
  cv::Mat_<std::uint8_t> gt(p.height, p.width, std::uint8_t{0});

  // muted block texture, 16 px cells
  constexpr int cell = 16;
  const int gx = (p.width + cell - 1) / cell;
  const int gy = (p.height + cell - 1) / cell;
  std::vector<cv::Vec3b> palette(static_cast<std::size_t>(gx * gy));
  for (auto& c : palette) {
    const int base = 90 + static_cast<int>(uniform(rng) * 70);
    c = cv::Vec3b(static_cast<uchar>(base + uniform(rng) * 30),
                  static_cast<uchar>(base + uniform(rng) * 30),
                  static_cast<uchar>(base + uniform(rng) * 20));
  }

  const double ocx = p.cx * p.width;
  const double ocy = p.cy * p.height;
  const double orx = p.rx * p.width;
  const double ory = p.ry * p.height;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const double u = (x - ocx) / orx;
      const double v = (y - ocy) / ory;
      const bool inside = u * u + v * v <= 1.0;
      const bool in_distractor =
          p.distractor && std::hypot(x - p.distractor_cx * p.width,
                                     y - p.distractor_cy * p.height) <=
                              p.distractor_radius * p.height;
      const double jitter = (uniform(rng) - 0.5) * 16.0;
      cv::Vec3b px;
      if (inside) {
        for (int c = 0; c < 3; ++c) {
          px[c] = cv::saturate_cast<uchar>(p.object_bgr[c] + jitter);
        }
        s.depth(y, x) = p.object_depth + 0.05 * (1.0 - (u * u + v * v));
        gt(y, x) = 1;
      } else if (in_distractor) {
        for (int c = 0; c < 3; ++c) {
          px[c] = cv::saturate_cast<uchar>(p.distractor_bgr[c] + jitter);
        }
        s.depth(y, x) = 0.05 + 0.3 * y / (p.height - 1.0) + 0.02 * uniform(rng);
      } else {
        const cv::Vec3b& base = palette[(y / cell) * gx + (x / cell)];
        for (int c = 0; c < 3; ++c) px[c] = cv::saturate_cast<uchar>(base[c] + jitter);
        // ground plane: nearer towards the bottom edge
        s.depth(y, x) = 0.05 + 0.3 * y / (p.height - 1.0) + 0.02 * uniform(rng);
      }
      s.rgb.at<cv::Vec3b>(y, x) = px;
    }
  }
  s.depth = normalize_minmax(s.depth);
  s.gt = gt;
  return s;
}

std::vector<SceneParams> fixture_suite(int count) {
  static const cv::Vec3b colors[] = {{40, 40, 220}, {220, 60, 40},  {40, 200, 60},
                                     {30, 200, 230}, {200, 40, 200}, {230, 230, 240},
                                     {20, 20, 20}};
  std::vector<SceneParams> out;
  std::mt19937 rng(2016);
  for (int i = 0; i < count; ++i) {
    SceneParams p;
    p.seed = static_cast<std::uint32_t>(100 + i);
    p.cx = 0.5 + (uniform(rng) - 0.5) * 0.2;
    p.cy = 0.5 + (uniform(rng) - 0.5) * 0.2;
    p.rx = 0.12 + uniform(rng) * 0.1;
    p.ry = 0.15 + uniform(rng) * 0.12;
    p.object_bgr = colors[i % 7];
    p.object_depth = 0.8 + uniform(rng) * 0.1;
    p.distractor = i % 2 == 1;
    p.distractor_cx = uniform(rng) < 0.5 ? 0.12 : 0.88;
    p.distractor_cy = 0.15 + uniform(rng) * 0.2;
    p.distractor_radius = 0.07 + uniform(rng) * 0.04;
    p.distractor_bgr = colors[(i + 3) % 7];
    out.push_back(p);
  }
  return out;
}

cv::Mat_<double> corrupt_depth(cv::Size size, std::uint32_t seed) {
  std::mt19937 rng(seed);
  cv::Mat_<double> d(size);
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      d(y, x) = 0.75 + 0.15 * uniform(rng);
    }
  }
  cv::GaussianBlur(d, d, cv::Size(0, 0), 3.0);
  // spurious near blob somewhere off-centre
  const double bx = (uniform(rng) < 0.5 ? 0.15 : 0.85) * size.width;
  const double by = (0.2 + 0.6 * uniform(rng)) * size.height;
  const double br = 0.12 * size.height;
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      const double r = std::hypot(x - bx, y - by);
      if (r < br) d(y, x) = 1.0;
    }
  }
  d.row(0).setTo(0.0);
  d.row(size.height - 1).setTo(0.0);
  d.col(0).setTo(0.0);
  d.col(size.width - 1).setTo(0.0);
  return d;
}

void write_dataset(const std::filesystem::path& root, const std::vector<RgbdSample>& samples) {
  namespace fs = std::filesystem;
  fs::create_directories(root / "rgb");
  fs::create_directories(root / "depth");
  fs::create_directories(root / "gt");
  for (const RgbdSample& s : samples) {
    cv::imwrite((root / "rgb" / (s.id + ".png")).string(), s.rgb);
    cv::Mat_<std::uint8_t> depth8;
    s.depth.convertTo(depth8, CV_8U, 255.0);
    cv::imwrite((root / "depth" / (s.id + ".png")).string(), depth8);
    if (s.gt) {
      cv::Mat_<std::uint8_t> gt8 = *s.gt * 255;
      cv::imwrite((root / "gt" / (s.id + ".png")).string(), gt8);
    }
  }
}

std::filesystem::path temp_dir(const std::string& tag) {
  namespace fs = std::filesystem;
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("stereosal_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace stereosal::testing
