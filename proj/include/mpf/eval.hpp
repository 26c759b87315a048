#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/types.hpp"

namespace mpf {

// C x C counts, rows = ground truth, cols = prediction. Points whose ground
// truth equals the ignore class are never accumulated. Matrices can be
// merged, so accumulation shards across workers and reduces deterministically.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::int32_t class_count = kDefaultClassCount,
                           std::optional<std::int32_t> ignore_class = kIgnoreClass)
      : class_count_(class_count), ignore_class_(ignore_class),
        counts_(static_cast<std::size_t>(class_count) * class_count, 0) {
    if (class_count < 1) throw InvalidConfig("class count must be >= 1");
    if (ignore_class && (*ignore_class < 0 || *ignore_class >= class_count))
      throw InvalidConfig("ignore class outside [0, C)");
  }

  void add(std::int32_t gt, std::int32_t pred) {
    if (ignore_class_ && gt == *ignore_class_) return;
    ++counts_[static_cast<std::size_t>(gt) * class_count_ + pred];
  }

  void accumulate(const LabelVector& pred, const LabelVector& gt) {
    if (pred.size() != gt.size())
      throw LengthMismatch("prediction and ground truth lengths differ");
    for (std::size_t i = 0; i < pred.size(); ++i) add(gt[i], pred[i]);
  }

  void merge(const ConfusionMatrix& other) {
    if (other.class_count_ != class_count_ || other.ignore_class_ != ignore_class_)
      throw ShapeMismatch("cannot merge confusion matrices of different shape");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  }

  std::uint64_t count(std::int32_t gt, std::int32_t pred) const {
    return counts_[static_cast<std::size_t>(gt) * class_count_ + pred];
  }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto v : counts_) t += v;
    return t;
  }

  std::uint64_t true_positives(std::int32_t c) const { return count(c, c); }

  std::uint64_t false_positives(std::int32_t c) const {
    std::uint64_t t = 0;
    for (std::int32_t g = 0; g < class_count_; ++g)
      if (g != c) t += count(g, c);
    return t;
  }

  std::uint64_t false_negatives(std::int32_t c) const {
    std::uint64_t t = 0;
    for (std::int32_t p = 0; p < class_count_; ++p)
      if (p != c) t += count(c, p);
    return t;
  }

  std::int32_t class_count() const { return class_count_; }
  std::optional<std::int32_t> ignore_class() const { return ignore_class_; }

 private:
  std::int32_t class_count_;
  std::optional<std::int32_t> ignore_class_;
  std::vector<std::uint64_t> counts_;
};

// Intersection over union for one class; nullopt when the class appears in
// neither prediction nor ground truth.
inline std::optional<double> iou(const ConfusionMatrix& cm, std::int32_t c) {
  const std::uint64_t tp = cm.true_positives(c);
  const std::uint64_t denom = tp + cm.false_positives(c) + cm.false_negatives(c);
  if (denom == 0) return std::nullopt;
  return static_cast<double>(tp) / static_cast<double>(denom);
}

// Mean IoU over the evaluated (non-ignored) classes, skipping classes that
// are undefined in this matrix.
inline double miou(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int defined = 0;
  for (std::int32_t c = 0; c < cm.class_count(); ++c) {
    if (cm.ignore_class() && c == *cm.ignore_class()) continue;
    if (const auto v = iou(cm, c)) {
      sum += *v;
      ++defined;
    }
  }
  if (defined == 0) throw AllUndefined("every class is undefined in this matrix");
  return sum / defined;
}

// Per-distance-bin statistics. Binning uses planar range sqrt(x^2 + y^2);
// accuracy counts only points with non-ignored ground truth.
struct BinStat {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t count = 0;
  std::uint64_t correct = 0;
  std::optional<double> accuracy;
  ConfusionMatrix cm;
};

inline std::vector<BinStat> binned_accuracy(const PointCloud& cloud, const LabelVector& pred,
                                            const LabelVector& gt, double bin_width,
                                            std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  if (pred.size() != gt.size() || pred.size() != cloud.size())
    throw LengthMismatch("cloud, prediction and ground truth lengths differ");
  if (!(bin_width > 0.0)) throw InvalidConfig("bin width must be positive");

  std::size_t bins = 0;
  std::vector<std::size_t> bin_of(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud[i];
    const double planar = std::sqrt(static_cast<double>(p.x) * p.x +
                                    static_cast<double>(p.y) * p.y);
    bin_of[i] = static_cast<std::size_t>(planar / bin_width);
    bins = std::max(bins, bin_of[i] + 1);
  }

  std::vector<BinStat> out;
  out.reserve(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.push_back({b * bin_width, (b + 1) * bin_width, 0, 0, std::nullopt,
                   ConfusionMatrix(gt.class_count(), ignore_class)});
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (ignore_class && gt[i] == *ignore_class) continue;
    BinStat& bin = out[bin_of[i]];
    ++bin.count;
    bin.correct += pred[i] == gt[i];
    bin.cm.add(gt[i], pred[i]);
  }
  for (BinStat& bin : out) {
    if (bin.count > 0)
      bin.accuracy = static_cast<double>(bin.correct) / static_cast<double>(bin.count);
  }
  return out;
}

namespace detail {

inline double checked_prob(float p) {
  if (p <= 0.0f)
    throw DomainError("ground-truth-class probability must be positive");
  if (p > 1.0f + 1e-6f)
    throw DomainError("ground-truth-class probability exceeds 1");
  return std::min(static_cast<double>(p), 1.0);
}

inline double focal_term(double p, double gamma) {
  return -std::pow(1.0 - p, gamma) * std::log(p);
}

}  // namespace detail

// Focal loss summed over points whose ground truth is not ignored:
//   L = -sum (1 - p)^gamma * log(p)
// with p the score assigned to the ground-truth class.
inline double focal_loss(const PointScores& scores, const LabelVector& gt, double gamma,
                         std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  if (scores.size() != gt.size())
    throw LengthMismatch("scores and ground truth lengths differ");
  if (gamma < 0.0) throw InvalidConfig("gamma must be nonnegative");
  double loss = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (ignore_class && gt[i] == *ignore_class) continue;
    loss += detail::focal_term(detail::checked_prob(scores.row(i)[gt[i]]), gamma);
  }
  return loss;
}

// Same loss over the valid pixels of a score map; each valid pixel's ground
// truth is the label of its source point.
inline double focal_loss(const ScoreMap& scores, const ProjectedImage& img,
                         const LabelVector& labels, double gamma,
                         std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  if (scores.height() != img.height() || scores.width() != img.width())
    throw ShapeMismatch("score map and image sizes differ");
  if (labels.size() != img.point_count())
    throw LengthMismatch("labels do not cover the image's source cloud");
  if (gamma < 0.0) throw InvalidConfig("gamma must be nonnegative");
  double loss = 0.0;
  for (int row = 0; row < img.height(); ++row) {
    for (int col = 0; col < img.width(); ++col) {
      if (!img.is_valid(row, col)) continue;
      const std::int32_t label = labels[img.source_index(row, col)];
      if (ignore_class && label == *ignore_class) continue;
      loss += detail::focal_term(detail::checked_prob(scores.at(row, col)[label]), gamma);
    }
  }
  return loss;
}

inline double focal_loss_mean(const PointScores& scores, const LabelVector& gt, double gamma,
                              std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < gt.size(); ++i)
    n += !(ignore_class && gt[i] == *ignore_class);
  const double total = focal_loss(scores, gt, gamma, ignore_class);
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

inline double focal_loss_mean(const ScoreMap& scores, const ProjectedImage& img,
                              const LabelVector& labels, double gamma,
                              std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  std::size_t n = 0;
  for (int row = 0; row < img.height(); ++row) {
    for (int col = 0; col < img.width(); ++col) {
      if (!img.is_valid(row, col)) continue;
      const std::int32_t label = labels[img.source_index(row, col)];
      n += !(ignore_class && label == *ignore_class);
    }
  }
  const double total = focal_loss(scores, img, labels, gamma, ignore_class);
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

inline double cross_entropy(const PointScores& scores, const LabelVector& gt,
                            std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  return focal_loss(scores, gt, 0.0, ignore_class);
}

inline double cross_entropy(const ScoreMap& scores, const ProjectedImage& img,
                            const LabelVector& labels,
                            std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  return focal_loss(scores, img, labels, 0.0, ignore_class);
}

inline double cross_entropy_mean(const PointScores& scores, const LabelVector& gt,
                                 std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  return focal_loss_mean(scores, gt, 0.0, ignore_class);
}

// --- CSV emitters

inline void write_class_iou_csv(std::ostream& out, const ConfusionMatrix& cm,
                                std::span<const std::string> class_names) {
  out << "train_id,name,iou\n";
  for (std::int32_t c = 0; c < cm.class_count(); ++c) {
    if (cm.ignore_class() && c == *cm.ignore_class()) continue;
    const std::string name =
        c < static_cast<std::int32_t>(class_names.size()) ? class_names[c] : "";
    out << c << ',' << name << ',';
    if (const auto v = iou(cm, c))
      out << std::setprecision(10) << *v;
    else
      out << "NA";
    out << '\n';
  }
}

inline void write_bins_csv(std::ostream& out, std::span<const BinStat> bins) {
  out << "bin_lo,bin_hi,count,correct,accuracy,miou\n";
  for (const BinStat& bin : bins) {
    out << bin.lo << ',' << bin.hi << ',' << bin.count << ',' << bin.correct << ',';
    if (bin.accuracy)
      out << std::setprecision(10) << *bin.accuracy;
    else
      out << "NA";
    out << ',';
    try {
      out << std::setprecision(10) << miou(bin.cm);
    } catch (const AllUndefined&) {
      out << "NA";
    }
    out << '\n';
  }
}

}  // namespace mpf
