#include "stereosal/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "stereosal/dataset_io.hpp"
#include "stereosal/errors.hpp"

namespace stereosal {

namespace {

void require_same_size(const cv::Mat& a, const cv::Mat& b) {
  if (a.size() != b.size()) {
    throw DimensionError("prediction and ground truth differ in size");
  }
}

struct Confusion {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;

  double precision() const { return tp + fp > 0.0 ? tp / (tp + fp) : 1.0; }
  double recall() const { return tp + fn > 0.0 ? tp / (tp + fn) : 0.0; }
};

std::size_t positives(const cv::Mat_<std::uint8_t>& gt) {
  return static_cast<std::size_t>(cv::countNonZero(gt));
}

}  // namespace

PrCurve pr_curve(const cv::Mat_<double>& pred, const cv::Mat_<std::uint8_t>& gt) {
  require_same_size(pred, gt);
  const std::size_t total_pos = positives(gt);
  if (total_pos == 0) {
    throw DomainError("ground truth has no positive pixel");
  }
  // histogram of quantized levels, split by label
  std::array<double, kThresholdCount> pos_hist{};
  std::array<double, kThresholdCount> neg_hist{};
  for (int y = 0; y < pred.rows; ++y) {
    for (int x = 0; x < pred.cols; ++x) {
      const int level = quantize_unit(pred(y, x));
      (gt(y, x) ? pos_hist : neg_hist)[level] += 1.0;
    }
  }
  PrCurve curve{};
  double tp = 0.0;
  double fp = 0.0;
  for (int t = kThresholdCount - 1; t >= 0; --t) {
    tp += pos_hist[t];
    fp += neg_hist[t];
    Confusion c{tp, fp, static_cast<double>(total_pos) - tp};
    curve[t] = PrPoint{t, c.precision(), c.recall()};
  }
  return curve;
}

double adaptive_threshold(const cv::Mat_<double>& pred) {
  return std::min(2.0 * cv::mean(pred)[0], 1.0);
}

double f_score(double precision, double recall, double beta2) {
  const double denom = beta2 * precision + recall;
  if (!(denom > 0.0)) return 0.0;
  return (1.0 + beta2) * precision * recall / denom;
}

FMeasure f_measure(const cv::Mat_<double>& pred, const cv::Mat_<std::uint8_t>& gt, double beta2) {
  require_same_size(pred, gt);
  if (positives(gt) == 0) {
    throw DomainError("ground truth has no positive pixel");
  }
  FMeasure out;
  out.threshold = adaptive_threshold(pred);
  Confusion c;
  for (int y = 0; y < pred.rows; ++y) {
    for (int x = 0; x < pred.cols; ++x) {
      const bool predicted = pred(y, x) >= out.threshold;
      const bool truth = gt(y, x) != 0;
      if (predicted && truth) c.tp += 1.0;
      else if (predicted) c.fp += 1.0;
      else if (truth) c.fn += 1.0;
    }
  }
  out.precision = c.precision();
  out.recall = c.recall();
  out.f = f_score(out.precision, out.recall, beta2);
  return out;
}

double mae(const cv::Mat_<double>& a, const cv::Mat_<double>& b) {
  require_same_size(a, b);
  if (a.empty()) throw DomainError("MAE of empty maps");
  return cv::norm(a, b, cv::NORM_L1) / static_cast<double>(a.total());
}

double mae(const cv::Mat_<double>& pred, const cv::Mat_<std::uint8_t>& gt) {
  require_same_size(pred, gt);
  cv::Mat_<double> truth;
  gt.convertTo(truth, CV_64F);
  return mae(pred, truth);
}

ImageEval evaluate_image(const std::string& id, const cv::Mat_<double>& pred,
                         const cv::Mat_<std::uint8_t>& gt, double beta2) {
  ImageEval row;
  row.id = id;
  row.curve = pr_curve(pred, gt);
  const FMeasure f = f_measure(pred, gt, beta2);
  row.precision = f.precision;
  row.recall = f.recall;
  row.f_measure = f.f;
  row.mae = mae(pred, gt);
  return row;
}

EvalReport aggregate(std::vector<ImageEval> rows, std::vector<std::string> excluded) {
  if (rows.empty()) {
    throw DomainError("no valid samples to aggregate");
  }
  EvalReport report;
  const double n = static_cast<double>(rows.size());
  for (int t = 0; t < kThresholdCount; ++t) report.pr_curve[t].threshold = t;
  for (const ImageEval& r : rows) {
    report.aggregate.precision += r.precision / n;
    report.aggregate.recall += r.recall / n;
    report.aggregate.f_measure += r.f_measure / n;
    report.aggregate.mae += r.mae / n;
    for (int t = 0; t < kThresholdCount; ++t) {
      report.pr_curve[t].precision += r.curve[t].precision / n;
      report.pr_curve[t].recall += r.curve[t].recall / n;
    }
  }
  report.rows = std::move(rows);
  report.excluded = std::move(excluded);
  return report;
}

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << std::setprecision(10);
  os << "id,precision,recall,f_measure,mae\n";
  for (const ImageEval& r : report.rows) {
    os << r.id << ',' << r.precision << ',' << r.recall << ',' << r.f_measure << ',' << r.mae
       << '\n';
  }
  const EvalAggregate& a = report.aggregate;
  os << "mean," << a.precision << ',' << a.recall << ',' << a.f_measure << ',' << a.mae << '\n';
  if (!os) throw IoError("error while writing " + path.string());
}

void write_pr_curve_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << std::setprecision(10);
  os << "threshold,precision,recall\n";
  for (const PrPoint& p : report.pr_curve) {
    os << p.threshold << ',' << p.precision << ',' << p.recall << '\n';
  }
  if (!os) throw IoError("error while writing " + path.string());
}

}  // namespace stereosal
