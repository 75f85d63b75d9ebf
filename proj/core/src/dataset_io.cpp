#include "stereosal/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <spdlog/spdlog.h>

#include "stereosal/errors.hpp"

namespace stereosal {

namespace {

std::string shape_string(cv::Size s) {
  std::ostringstream os;
  os << s.height << "x" << s.width;
  return os.str();
}

cv::Mat read_image(const fs::path& path, int flags) {
  if (!fs::exists(path)) {
    throw IoError("file not found: " + path.string());
  }
  cv::Mat img;
  try {
    img = cv::imread(path.string(), flags);
  } catch (const cv::Exception& e) {
    throw IoError("cannot decode " + path.string() + ": " + e.what());
  }
  if (img.empty()) {
    throw IoError("cannot decode image: " + path.string());
  }
  return img;
}

double unit_scale(int depth) {
  switch (depth) {
    case CV_8U:
      return 1.0 / 255.0;
    case CV_16U:
      return 1.0 / 65535.0;
    default:
      return 1.0;
  }
}

}  // namespace

void RgbdSample::validate() const {
  if (rgb.empty() || rgb.type() != CV_8UC3) {
    throw DomainError("sample " + id + ": rgb must be a non-empty 8-bit 3-channel image");
  }
  if (depth.size() != rgb.size()) {
    throw DimensionError("sample " + id + ": rgb is " + shape_string(rgb.size()) +
                         " but depth is " + shape_string(depth.size()));
  }
  double lo = 0.0;
  double hi = 0.0;
  cv::minMaxLoc(depth, &lo, &hi);
  if (lo < 0.0 || hi > 1.0) {
    throw DomainError("sample " + id + ": depth values outside [0,1]");
  }
  if (gt) {
    if (gt->size() != rgb.size()) {
      throw DimensionError("sample " + id + ": rgb is " + shape_string(rgb.size()) +
                           " but gt is " + shape_string(gt->size()));
    }
    cv::minMaxLoc(*gt, &lo, &hi);
    if (hi > 1.0) {
      throw DomainError("sample " + id + ": gt must be binary {0,1}");
    }
  }
}

cv::Mat_<double> normalize_minmax(const cv::Mat& plane) {
  CV_Assert(plane.channels() == 1);
  cv::Mat_<double> out;
  plane.convertTo(out, CV_64F);
  double lo = 0.0;
  double hi = 0.0;
  cv::minMaxLoc(out, &lo, &hi);
  if (!(hi > lo)) {
    out.setTo(0.0);
    return out;
  }
  const double range = hi - lo;
  out.forEach([&](double& v, const int*) { v = std::clamp((v - lo) / range, 0.0, 1.0); });
  return out;
}

RgbdSample load_rgbd_pair(const fs::path& rgb_path, const fs::path& depth_path,
                          bool invert_depth) {
  RgbdSample sample;
  sample.id = rgb_path.stem().string();
  sample.rgb = read_image(rgb_path, cv::IMREAD_COLOR);
  // ANYDEPTH without ANYCOLOR yields one channel and keeps 16-bit data
  cv::Mat raw_depth = read_image(depth_path, cv::IMREAD_ANYDEPTH);
  if (raw_depth.size() != sample.rgb.size()) {
    throw DimensionError("dimension mismatch: rgb " + rgb_path.string() + " is " +
                         shape_string(sample.rgb.size()) + ", depth " +
                         depth_path.string() + " is " +
                         shape_string(raw_depth.size()));
  }
  sample.depth = normalize_minmax(raw_depth);
  if (invert_depth) {
    sample.depth = 1.0 - sample.depth;
  }
  return sample;
}

cv::Mat_<std::uint8_t> load_mask(const fs::path& path) {
  cv::Mat raw = read_image(path, cv::IMREAD_GRAYSCALE);
  cv::Mat_<std::uint8_t> mask;
  cv::threshold(raw, mask, 127, 1, cv::THRESH_BINARY);
  return mask;
}

cv::Mat_<double> load_unit_map(const fs::path& path) {
  cv::Mat raw = read_image(path, cv::IMREAD_ANYDEPTH);
  cv::Mat_<double> out;
  raw.convertTo(out, CV_64F, unit_scale(raw.depth()));
  return out;
}

SaliencyMap read_saliency_map(const fs::path& path) {
  return SaliencyMap{path.stem().string(), load_unit_map(path)};
}

std::uint8_t quantize_unit(double value) {
  const double v = std::clamp(value, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

void write_saliency_map(const SaliencyMap& map, const fs::path& path) {
  cv::Mat_<std::uint8_t> out(map.values.size());
  for (int y = 0; y < out.rows; ++y) {
    for (int x = 0; x < out.cols; ++x) {
      out(y, x) = quantize_unit(map.values(y, x));
    }
  }
  bool ok = false;
  try {
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
    }
    ok = cv::imwrite(path.string(), out);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) {
    throw IoError("cannot write " + path.string());
  }
}

bool is_image_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

std::map<std::string, fs::path> index_images(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) {
    return out;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_image_file(entry.path())) {
      continue;
    }
    auto [it, inserted] = out.emplace(entry.path().stem().string(), entry.path());
    if (!inserted) {
      // keep the lexicographically smallest file name for determinism
      if (entry.path().filename() < it->second.filename()) {
        it->second = entry.path();
      }
    }
  }
  return out;
}

DatasetScan scan_dataset(const fs::path& root) {
  const fs::path rgb_dir = root / "rgb";
  const fs::path depth_dir = root / "depth";
  const fs::path gt_dir = root / "gt";
  if (!fs::is_directory(rgb_dir)) {
    throw ConfigError("missing directory " + rgb_dir.string());
  }
  if (!fs::is_directory(depth_dir)) {
    throw ConfigError("missing directory " + depth_dir.string());
  }
  const auto rgbs = index_images(rgb_dir);
  const auto depths = index_images(depth_dir);
  const auto gts = index_images(gt_dir);

  DatasetScan scan;
  for (const auto& [id, rgb] : rgbs) {
    auto d = depths.find(id);
    if (d == depths.end()) {
      scan.skipped.push_back(id);
      spdlog::warn("sample {} has no depth map, skipped", id);
      continue;
    }
    DatasetEntry entry{id, rgb, d->second, std::nullopt};
    if (auto g = gts.find(id); g != gts.end()) {
      entry.gt = g->second;
    }
    scan.entries.push_back(std::move(entry));
  }
  if (scan.entries.empty()) {
    spdlog::warn("dataset {} contains no usable samples", root.string());
  }
  return scan;
}

}  // namespace stereosal
