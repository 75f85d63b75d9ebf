#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <opencv2/core.hpp>

#include "stereosal/dataset_io.hpp"

namespace stereosal::testing {

/// A generated RGB-D scene: one near, high-contrast elliptical object on a
/// far, block-textured background whose depth recedes towards the top.
struct SceneParams {
  int width = 320;
  int height = 240;
  std::uint32_t seed = 1;
  // object centre and radii as fractions of width / height
  double cx = 0.5;
  double cy = 0.5;
  double rx = 0.18;
  double ry = 0.22;
  cv::Vec3b object_bgr{40, 40, 220};
  double object_depth = 0.9;
  // optional far distractor: a compact saturated patch in the background
  bool distractor = false;
  double distractor_cx = 0.15;
  double distractor_cy = 0.2;
  double distractor_radius = 0.08;  // fraction of height
  cv::Vec3b distractor_bgr{200, 200, 40};
};

RgbdSample make_scene(const SceneParams& params);

/// Varied scenes (object placement, size, colour, texture seed); every
/// other scene carries a far distractor patch.
std::vector<SceneParams> fixture_suite(int count = 20);

/// A poor depth map of the kind that should be distrusted: values packed
/// into the bright end with noise, a spurious near blob in the background
/// and no separation of the true object. Pixels on a one-pixel frame are
/// holes (0) so the field still spans [0,1].
cv::Mat_<double> corrupt_depth(cv::Size size, std::uint32_t seed);

/// Writes rgb/, depth/ and gt/ PNGs for each sample under root.
void write_dataset(const std::filesystem::path& root, const std::vector<RgbdSample>& samples);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace stereosal::testing
