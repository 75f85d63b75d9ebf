#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace stereosal {

namespace fs = std::filesystem;

/// One aligned RGB-D triple.
///
/// `rgb` is 8-bit BGR (OpenCV channel order). `depth` holds values in
/// [0,1] where 1.0 is nearest to the camera. `gt`, when present, is a
/// binary mask with values exactly 0 or 1.
struct RgbdSample {
  std::string id;
  cv::Mat rgb;
  cv::Mat_<double> depth;
  std::optional<cv::Mat_<std::uint8_t>> gt;

  cv::Size size() const { return rgb.size(); }

  // Throws DimensionError / DomainError when the invariants above fail.
  void validate() const;
};

struct SaliencyMap {
  std::string id;
  cv::Mat_<double> values;

  cv::Size size() const { return values.size(); }
};

/// Min-max normalize a single-channel plane of any depth to [0,1].
/// A constant plane maps to all zeros.
cv::Mat_<double> normalize_minmax(const cv::Mat& plane);

RgbdSample load_rgbd_pair(const fs::path& rgb_path, const fs::path& depth_path,
                          bool invert_depth);

/// Ground-truth mask, binarized as pixel > 127 -> 1.
cv::Mat_<std::uint8_t> load_mask(const fs::path& path);

/// Grayscale image scaled to [0,1] by 1/255 (8-bit) or 1/65535 (16-bit).
cv::Mat_<double> load_unit_map(const fs::path& path);

SaliencyMap read_saliency_map(const fs::path& path);

/// Single-channel 8-bit PNG, pixel = floor(value * 255 + 0.5).
void write_saliency_map(const SaliencyMap& map, const fs::path& path);

std::uint8_t quantize_unit(double value);

struct DatasetEntry {
  std::string id;
  fs::path rgb;
  fs::path depth;
  std::optional<fs::path> gt;
};

struct DatasetScan {
  std::vector<DatasetEntry> entries;
  // ids present under rgb/ without a depth partner
  std::vector<std::string> skipped;
};

/// Match <root>/rgb, <root>/depth and optional <root>/gt by basename.
DatasetScan scan_dataset(const fs::path& root);

/// Image files (png/jpg/jpeg/bmp) in `dir`, keyed by stem, sorted.
std::map<std::string, fs::path> index_images(const fs::path& dir);

bool is_image_file(const fs::path& path);

}  // namespace stereosal
