#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpf/error.hpp"

namespace mpf {

// 19 evaluated classes plus class 0 (unlabeled / ignore).
inline constexpr std::int32_t kDefaultClassCount = 20;
inline constexpr std::int32_t kIgnoreClass = 0;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// One LiDAR return: sensor-frame coordinates in meters plus remission.
// Remission is carried through exactly as the sensor file provides it.
struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float rem = 0.0f;
};

// Throws NonFiniteCoordinate naming the first offending point.
inline void validate(std::span<const Point> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
        !std::isfinite(p.rem)) {
      throw NonFiniteCoordinate(i);
    }
  }
}

// Immutable point cloud. Point order is meaningful: collision tie-breaking
// in the projections is defined in terms of the original index.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point> points) : points_(std::move(points)) {
    validate(points_);
  }
  PointCloud(std::initializer_list<Point> points)
      : PointCloud(std::vector<Point>(points)) {}

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }

 private:
  std::vector<Point> points_;
};

inline void validate(const PointCloud&) {}  // enforced at construction

// Per-point class ids in the training taxonomy, 0 = unlabeled/ignore.
class LabelVector {
 public:
  LabelVector() = default;
  LabelVector(std::vector<std::int32_t> labels, std::int32_t class_count)
      : labels_(std::move(labels)), class_count_(class_count) {
    if (class_count_ < 1) throw InvalidConfig("class count must be >= 1");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] < 0 || labels_[i] >= class_count_) {
        throw InvalidConfig("label " + std::to_string(labels_[i]) + " at index " +
                            std::to_string(i) + " outside [0, " +
                            std::to_string(class_count_) + ")");
      }
    }
  }

  std::size_t size() const { return labels_.size(); }
  std::int32_t operator[](std::size_t i) const { return labels_[i]; }
  std::int32_t class_count() const { return class_count_; }
  std::span<const std::int32_t> labels() const { return labels_; }

 private:
  std::vector<std::int32_t> labels_;
  std::int32_t class_count_ = kDefaultClassCount;
};

// H x W multi-channel raster produced by a projection. A pixel is either
// valid (it stores the features of exactly one source point, and that
// point's index) or sparse (zero features, no source index).
//
// Channel layouts by producing view:
//   spherical: x, y, z, r, rem   (5)
//   bird's-eye: x, y, z, rem     (4)
// Both start with x, y, z so window distances read channels 0..2.
class ProjectedImage {
 public:
  static constexpr std::int32_t kSparse = -1;

  ProjectedImage(int height, int width, int channels, std::size_t point_count)
      : height_(height),
        width_(width),
        channels_(channels),
        point_count_(point_count) {
    if (height < 1 || width < 1 || channels < 1)
      throw InvalidConfig("projected image dimensions must be positive");
    if (point_count > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
      throw InvalidConfig("point count exceeds source index range");
    features_.assign(static_cast<std::size_t>(height) * width * channels, 0.0f);
    valid_.assign(static_cast<std::size_t>(height) * width, 0);
    source_.assign(static_cast<std::size_t>(height) * width, kSparse);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t point_count() const { return point_count_; }

  bool is_valid(int row, int col) const { return valid_[flat(row, col)] != 0; }
  std::int32_t source_index(int row, int col) const { return source_[flat(row, col)]; }

  std::span<const float> pixel(int row, int col) const {
    return {features_.data() + flat(row, col) * channels_,
            static_cast<std::size_t>(channels_)};
  }
  const float* pixel_ptr(int row, int col) const {
    return features_.data() + flat(row, col) * channels_;
  }

  void set_pixel(int row, int col, std::span<const float> features, std::int32_t source) {
    if (features.size() != static_cast<std::size_t>(channels_))
      throw ShapeMismatch("feature vector length does not match channel count");
    if (source < 0 || static_cast<std::size_t>(source) >= point_count_)
      throw InvalidConfig("source index outside the producing cloud");
    const std::size_t f = flat(row, col);
    std::copy(features.begin(), features.end(), features_.begin() + f * channels_);
    valid_[f] = 1;
    source_[f] = source;
  }

  void clear_pixel(int row, int col) {
    const std::size_t f = flat(row, col);
    std::fill_n(features_.begin() + f * channels_, channels_, 0.0f);
    valid_[f] = 0;
    source_[f] = kSparse;
  }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto v : valid_) n += v != 0;
    return n;
  }

  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }
  const std::vector<float>& features() const { return features_; }
  const std::vector<std::int32_t>& source_indices() const { return source_; }

  // Optional cache filled by the projections: the pixel every source point
  // maps to (row < 0 where the point has none), so consumers that need
  // per-point pixels can skip re-deriving them. The values are exactly what
  // recomputation under the producing config yields.
  void set_point_pixels(std::vector<std::int32_t> rows, std::vector<std::int32_t> cols) {
    if (rows.size() != point_count_ || cols.size() != point_count_)
      throw ShapeMismatch("point pixel table does not cover the cloud");
    point_rows_ = std::move(rows);
    point_cols_ = std::move(cols);
  }
  bool has_point_pixels() const { return point_rows_.size() == point_count_; }
  std::span<const std::int32_t> point_rows() const { return point_rows_; }
  std::span<const std::int32_t> point_cols() const { return point_cols_; }

 private:
  std::size_t flat(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::size_t point_count_ = 0;
  std::vector<float> features_;
  std::vector<std::uint8_t> valid_;
  std::vector<std::int32_t> source_;
  std::vector<std::int32_t> point_rows_;
  std::vector<std::int32_t> point_cols_;
};

// H x W x C per-pixel class scores, softmax-normalized at valid pixels.
// Row-major, channel-fastest, matching the on-disk score-map layout.
class ScoreMap {
 public:
  static constexpr float kSumTolerance = 1e-5f;

  ScoreMap(int height, int width, int class_count, std::vector<float> scores,
           std::vector<std::uint8_t> valid)
      : height_(height),
        width_(width),
        class_count_(class_count),
        scores_(std::move(scores)),
        valid_(std::move(valid)) {
    if (height < 1 || width < 1 || class_count < 1)
      throw InvalidConfig("score map dimensions must be positive");
    const std::size_t pixels = static_cast<std::size_t>(height) * width;
    if (valid_.size() != pixels)
      throw ShapeMismatch("validity mask size does not match H*W");
    if (scores_.size() != pixels * class_count)
      throw ShapeMismatch("score payload size does not match H*W*C");
    for (std::size_t p = 0; p < pixels; ++p) {
      const float* s = scores_.data() + p * class_count;
      double sum = 0.0;
      for (int c = 0; c < class_count; ++c) {
        if (!std::isfinite(s[c]) || s[c] < 0.0f)
          throw InvalidConfig("score map entries must be finite and nonnegative");
        sum += s[c];
      }
      if (valid_[p] && std::abs(sum - 1.0) > kSumTolerance)
        throw InvalidConfig("scores at valid pixel " + std::to_string(p) +
                            " sum to " + std::to_string(sum));
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int class_count() const { return class_count_; }

  bool is_valid(int row, int col) const {
    return valid_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  const float* at(int row, int col) const {
    return scores_.data() + (static_cast<std::size_t>(row) * width_ + col) * class_count_;
  }

  const std::vector<float>& scores() const { return scores_; }
  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }

 private:
  int height_ = 0;
  int width_ = 0;
  int class_count_ = 0;
  std::vector<float> scores_;
  std::vector<std::uint8_t> valid_;
};

// N x C per-point class scores. Entries are finite and nonnegative; an
// all-zero row means the point was invisible to the producing view.
class PointScores {
 public:
  PointScores(std::size_t count, int class_count)
      : count_(count), class_count_(class_count) {
    if (class_count < 1) throw InvalidConfig("class count must be >= 1");
    data_.assign(count * class_count, 0.0f);
  }

  PointScores(std::size_t count, int class_count, std::vector<float> data)
      : count_(count), class_count_(class_count), data_(std::move(data)) {
    if (class_count < 1) throw InvalidConfig("class count must be >= 1");
    if (data_.size() != count * static_cast<std::size_t>(class_count))
      throw ShapeMismatch("point score payload size does not match N*C");
    for (float v : data_) {
      if (!std::isfinite(v) || v < 0.0f)
        throw InvalidConfig("point scores must be finite and nonnegative");
    }
  }

  std::size_t size() const { return count_; }
  int class_count() const { return class_count_; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * class_count_, static_cast<std::size_t>(class_count_)};
  }
  std::span<float> row(std::size_t i) {
    return {data_.data() + i * class_count_, static_cast<std::size_t>(class_count_)};
  }

  const std::vector<float>& data() const { return data_; }

 private:
  std::size_t count_ = 0;
  int class_count_ = 0;
  std::vector<float> data_;
};

// Spherical image geometry. Field-of-view angles are positive magnitudes in
// radians; the sensor pitch interval is [-fov_down, +fov_up].
class SphericalConfig {
 public:
  SphericalConfig(int height, int width, double fov_up, double fov_down)
      : height_(height), width_(width), fov_up_(fov_up), fov_down_(fov_down) {
    if (height < 1 || width < 1)
      throw InvalidConfig("spherical image size must be positive");
    if (!(fov_up + fov_down > 0.0))
      throw InvalidConfig("vertical field of view must be positive");
  }

  static SphericalConfig from_degrees(int height, int width, double fov_up_deg,
                                      double fov_down_deg) {
    return SphericalConfig(height, width, fov_up_deg * kPi / 180.0,
                           fov_down_deg * kPi / 180.0);
  }

  // HDL-64E-style vertical field of view (+3 deg .. -25 deg).
  static SphericalConfig hdl64(int height = 64, int width = 2048) {
    return from_degrees(height, width, 3.0, 25.0);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  double fov_up() const { return fov_up_; }
  double fov_down() const { return fov_down_; }
  double fov() const { return fov_up_ + fov_down_; }

 private:
  int height_;
  int width_;
  double fov_up_;
  double fov_down_;
};

// Bird's-eye raster geometry. Columns index x, rows index y; the upper
// boundary of each extent is exclusive.
class BevConfig {
 public:
  BevConfig(int rows, int cols, double x_min, double x_max, double y_min, double y_max)
      : rows_(rows), cols_(cols), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
    if (rows < 1 || cols < 1) throw InvalidConfig("bev grid size must be positive");
    if (!(x_min < x_max) || !(y_min < y_max))
      throw InvalidConfig("bev extent must be a nonempty rectangle");
  }

  static BevConfig square(int size = 256, double extent = 50.0) {
    return BevConfig(size, size, -extent, extent, -extent, extent);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }

 private:
  int rows_;
  int cols_;
  double x_min_, x_max_, y_min_, y_max_;
};

enum class DistanceMetric { Euclidean, Manhattan };

inline const char* to_string(DistanceMetric m) {
  return m == DistanceMetric::Euclidean ? "euclidean" : "manhattan";
}

inline std::optional<DistanceMetric> parse_metric(const std::string& s) {
  if (s == "euclidean") return DistanceMetric::Euclidean;
  if (s == "manhattan") return DistanceMetric::Manhattan;
  return std::nullopt;
}

// Soft-voting window parameters. Defaults follow the best ablation setting:
// 3x3 window, sigma 1, Manhattan distance.
class PostProcessConfig {
 public:
  explicit PostProcessConfig(int window = 3, double sigma = 1.0,
                             DistanceMetric metric = DistanceMetric::Manhattan,
                             bool wrap_horizontal = false)
      : window_(window), sigma_(sigma), metric_(metric), wrap_horizontal_(wrap_horizontal) {
    if (window < 1 || window % 2 == 0)
      throw InvalidConfig("window side must be an odd positive integer");
    if (!(sigma > 0.0)) throw InvalidConfig("sigma must be positive");
  }

  int window() const { return window_; }
  double sigma() const { return sigma_; }
  DistanceMetric metric() const { return metric_; }
  // Wrap window columns across the spherical seam; ignored by the BEV view.
  bool wrap_horizontal() const { return wrap_horizontal_; }

 private:
  int window_;
  double sigma_;
  DistanceMetric metric_;
  bool wrap_horizontal_;
};

}  // namespace mpf
