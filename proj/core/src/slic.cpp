#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "stereosal/errors.hpp"
#include "stereosal/superpixel_graph.hpp"

namespace stereosal {

namespace {

struct Center {
  cv::Vec3d lab;
  double x = 0.0;
  double y = 0.0;
};

double lab_dist2(const cv::Vec3d& a, const cv::Vec3d& b) {
  const cv::Vec3d d = a - b;
  return d.dot(d);
}

cv::Mat_<double> gradient_magnitude(const cv::Mat_<cv::Vec3d>& lab) {
  const int h = lab.rows;
  const int w = lab.cols;
  cv::Mat_<double> grad(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, w - 1);
      const int yu = std::max(y - 1, 0);
      const int yd = std::min(y + 1, h - 1);
      grad(y, x) = lab_dist2(lab(y, xr), lab(y, xl)) + lab_dist2(lab(yd, x), lab(yu, x));
    }
  }
  return grad;
}

std::vector<Center> seed_centers(const cv::Mat_<cv::Vec3d>& lab, int requested) {
  const int h = lab.rows;
  const int w = lab.cols;
  const int nx = std::max(
      1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(requested) * w / h))));
  const int ny = std::max(1, static_cast<int>(std::lround(static_cast<double>(requested) / nx)));
  const double step_x = static_cast<double>(w) / nx;
  const double step_y = static_cast<double>(h) / ny;

  const cv::Mat_<double> grad = gradient_magnitude(lab);
  std::vector<Center> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      double cx = (i + 0.5) * step_x - 0.5;
      double cy = (j + 0.5) * step_y - 0.5;
      int px = std::clamp(static_cast<int>(std::lround(cx)), 0, w - 1);
      int py = std::clamp(static_cast<int>(std::lround(cy)), 0, h - 1);
      // move off edges: lowest gradient in the 3x3 neighbourhood
      double best = grad(py, px);
      int bx = px;
      int by = py;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int qx = px + dx;
          const int qy = py + dy;
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          if (grad(qy, qx) < best) {
            best = grad(qy, qx);
            bx = qx;
            by = qy;
          }
        }
      }
      if (bx != px || by != py) {
        cx = bx;
        cy = by;
      }
      centers.push_back({lab(by, bx), cx, cy});
    }
  }
  return centers;
}

class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void attach(int child_root, int parent_root) { parent_[child_root] = parent_root; }

 private:
  std::vector<int> parent_;
};

// Every label keeps only its largest 4-connected component. Other
// fragments, and kept components below min_size, are absorbed into the
// largest adjacent surviving region.
SegmentationMap enforce_connectivity(const cv::Mat_<int>& raw, int label_count,
                                     int min_size) {
  const int h = raw.rows;
  const int w = raw.cols;
  cv::Mat_<int> comp(h, w, -1);
  std::vector<int> comp_size;
  std::vector<int> comp_label;
  std::vector<int> stack;
  const int dx4[4] = {1, -1, 0, 0};
  const int dy4[4] = {0, 0, 1, -1};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (comp(y, x) >= 0) continue;
      const int id = static_cast<int>(comp_size.size());
      const int label = raw(y, x);
      int size = 0;
      comp(y, x) = id;
      stack.assign(1, y * w + x);
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        ++size;
        const int py = p / w;
        const int px = p % w;
        for (int k = 0; k < 4; ++k) {
          const int qx = px + dx4[k];
          const int qy = py + dy4[k];
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          if (comp(qy, qx) >= 0 || raw(qy, qx) != label) continue;
          comp(qy, qx) = id;
          stack.push_back(qy * w + qx);
        }
      }
      comp_size.push_back(size);
      comp_label.push_back(label);
    }
  }

  const int n_comp = static_cast<int>(comp_size.size());
  std::vector<int> largest(static_cast<std::size_t>(label_count), -1);
  for (int c = 0; c < n_comp; ++c) {
    int& best = largest[comp_label[c]];
    if (best < 0 || comp_size[c] > comp_size[best]) best = c;
  }
  const int global_largest = static_cast<int>(
      std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());

  std::vector<char> alive(static_cast<std::size_t>(n_comp), 0);
  for (int c = 0; c < n_comp; ++c) {
    alive[c] = (largest[comp_label[c]] == c && comp_size[c] >= min_size) ? 1 : 0;
  }
  alive[global_largest] = 1;

  std::vector<std::vector<int>> comp_adj(static_cast<std::size_t>(n_comp));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = comp(y, x);
      if (x + 1 < w && comp(y, x + 1) != a) {
        comp_adj[a].push_back(comp(y, x + 1));
        comp_adj[comp(y, x + 1)].push_back(a);
      }
      if (y + 1 < h && comp(y + 1, x) != a) {
        comp_adj[a].push_back(comp(y + 1, x));
        comp_adj[comp(y + 1, x)].push_back(a);
      }
    }
  }
  for (auto& adj : comp_adj) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }

  DisjointSet sets(n_comp);
  std::vector<int> root_size = comp_size;
  bool pending = true;
  while (pending) {
    pending = false;
    bool progressed = false;
    for (int c = 0; c < n_comp; ++c) {
      if (alive[c] || sets.find(c) != c) continue;
      int target = -1;
      for (int n : comp_adj[c]) {
        const int r = sets.find(n);
        if (r == c || !alive[r]) continue;
        if (target < 0 || root_size[r] > root_size[target] ||
            (root_size[r] == root_size[target] && r < target)) {
          target = r;
        }
      }
      if (target < 0) {
        pending = true;
        continue;
      }
      sets.attach(c, target);
      root_size[target] += root_size[c];
      progressed = true;
    }
    if (pending && !progressed) {
      break;  // unreachable on a connected pixel grid
    }
  }

  SegmentationMap seg;
  seg.labels.create(h, w);
  std::vector<int> relabel(static_cast<std::size_t>(n_comp), -1);
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int r = sets.find(comp(y, x));
      if (relabel[r] < 0) relabel[r] = next++;
      seg.labels(y, x) = relabel[r];
    }
  }
  seg.count = next;
  return seg;
}

}  // namespace

SegmentationMap slic_segment(const cv::Mat& bgr, const SlicParams& params) {
  if (bgr.empty() || bgr.rows < 2 || bgr.cols < 2) {
    throw DomainError("SLIC requires an image of at least 2x2 pixels");
  }
  if (bgr.type() != CV_8UC3) {
    throw DomainError("SLIC expects an 8-bit 3-channel image");
  }
  const int h = bgr.rows;
  const int w = bgr.cols;
  if (params.superpixels < 2 || params.superpixels > h * w) {
    throw ConfigError("superpixel count must lie in [2, H*W]");
  }
  if (!(params.compactness > 0.0) || params.iterations < 1) {
    throw ConfigError("SLIC compactness must be positive and iterations >= 1");
  }

  const cv::Mat_<cv::Vec3d> lab = bgr_to_lab(bgr);
  std::vector<Center> centers = seed_centers(lab, params.superpixels);
  const int k = static_cast<int>(centers.size());

  const double step = std::sqrt(static_cast<double>(h) * w / k);
  const double spatial_weight = (params.compactness * params.compactness) / (step * step);
  const int nx = std::max(
      1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(params.superpixels) * w / h))));
  const int ny = std::max(1, k / nx);
  const int radius = static_cast<int>(
      std::ceil(std::max(static_cast<double>(w) / nx, static_cast<double>(h) / ny)));

  cv::Mat_<int> labels(h, w, -1);
  cv::Mat_<double> dist(h, w);
  for (int iter = 0; iter < params.iterations; ++iter) {
    dist.setTo(std::numeric_limits<double>::infinity());
    for (int c = 0; c < k; ++c) {
      const Center& ctr = centers[c];
      const int x0 = std::max(0, static_cast<int>(std::floor(ctr.x)) - radius);
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(ctr.x)) + radius);
      const int y0 = std::max(0, static_cast<int>(std::floor(ctr.y)) - radius);
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(ctr.y)) + radius);
      for (int y = y0; y <= y1; ++y) {
        const double ddy = y - ctr.y;
        for (int x = x0; x <= x1; ++x) {
          const double ddx = x - ctr.x;
          const double d = lab_dist2(lab(y, x), ctr.lab) +
                           spatial_weight * (ddx * ddx + ddy * ddy);
          if (d < dist(y, x)) {
            dist(y, x) = d;
            labels(y, x) = c;
          }
        }
      }
    }

    std::vector<cv::Vec3d> sum_lab(static_cast<std::size_t>(k), cv::Vec3d(0, 0, 0));
    std::vector<double> sum_x(static_cast<std::size_t>(k), 0.0);
    std::vector<double> sum_y(static_cast<std::size_t>(k), 0.0);
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int c = labels(y, x);
        if (c < 0) continue;
        sum_lab[c] += lab(y, x);
        sum_x[c] += x;
        sum_y[c] += y;
        ++count[c];
      }
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      const double inv = 1.0 / count[c];
      centers[c].lab = sum_lab[c] * inv;
      centers[c].x = sum_x[c] * inv;
      centers[c].y = sum_y[c] * inv;
    }
  }

  // Pixels outside every search window go to the nearest center.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (labels(y, x) >= 0) continue;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double ddx = x - centers[c].x;
        const double ddy = y - centers[c].y;
        const double d = lab_dist2(lab(y, x), centers[c].lab) +
                         spatial_weight * (ddx * ddx + ddy * ddy);
        if (d < best) {
          best = d;
          labels(y, x) = c;
        }
      }
    }
  }

  const int min_size = std::max(1, static_cast<int>(step * step / 8.0));
  return enforce_connectivity(labels, k, min_size);
}

}  // namespace stereosal
