#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/io.hpp"
#include "mpf/types.hpp"

namespace mpf {

// Anything that turns a projected view into per-pixel class scores. This is
// the seam where trained models plug into the pipeline; everything else is
// agnostic to how the scores were produced.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual ScoreMap segment(const ProjectedImage& img) const = 0;
};

// Ground-truth-backed scores: at a valid pixel with source point i the map
// holds a smoothed one-hot (1-eps on labels[i], eps/(C-1) elsewhere);
// sparse pixels hold the uniform distribution.
inline ScoreMap oracle_segment(const ProjectedImage& img, const LabelVector& labels,
                               double smoothing = 0.0) {
  if (labels.size() != img.point_count())
    throw LengthMismatch("labels cover " + std::to_string(labels.size()) +
                         " points, image was projected from " +
                         std::to_string(img.point_count()));
  const std::int32_t c = labels.class_count();
  if (smoothing < 0.0 || smoothing >= 1.0)
    throw InvalidConfig("smoothing must lie in [0, 1)");
  const float off = c > 1 ? static_cast<float>(smoothing / (c - 1)) : 0.0f;
  const float on = static_cast<float>(1.0 - smoothing);
  const float uniform = 1.0f / static_cast<float>(c);

  const std::size_t pixels = static_cast<std::size_t>(img.height()) * img.width();
  std::vector<float> scores(pixels * c);
  std::vector<std::uint8_t> valid(img.valid_mask());
  for (std::size_t p = 0; p < pixels; ++p) {
    float* s = scores.data() + p * c;
    const std::int32_t src = img.source_indices()[p];
    if (src == ProjectedImage::kSparse) {
      std::fill_n(s, c, uniform);
    } else {
      std::fill_n(s, c, off);
      s[labels[static_cast<std::size_t>(src)]] = on;
    }
  }
  return ScoreMap(img.height(), img.width(), c, std::move(scores), std::move(valid));
}

// Load externally produced scores for img. The file's validity mask must
// equal the image's: a disagreement means the producer projected with
// different parameters, which would silently corrupt back-projection.
inline ScoreMap external_segment(const ProjectedImage& img,
                                 const std::filesystem::path& path) {
  ScoreMap map = read_scores(path);
  if (map.height() != img.height() || map.width() != img.width())
    throw ShapeMismatch(path.string() + ": score map is " + std::to_string(map.height()) +
                        "x" + std::to_string(map.width()) + ", image is " +
                        std::to_string(img.height()) + "x" + std::to_string(img.width()));
  const auto& file_mask = map.valid_mask();
  const auto& img_mask = img.valid_mask();
  for (std::size_t p = 0; p < img_mask.size(); ++p) {
    if ((file_mask[p] != 0) != (img_mask[p] != 0))
      throw MaskMismatch(path.string() + ": validity mask differs at pixel " +
                         std::to_string(p));
  }
  return map;
}

class OracleSegmenter : public Segmenter {
 public:
  explicit OracleSegmenter(LabelVector labels, double smoothing = 0.0)
      : labels_(std::move(labels)), smoothing_(smoothing) {}

  ScoreMap segment(const ProjectedImage& img) const override {
    return oracle_segment(img, labels_, smoothing_);
  }

 private:
  LabelVector labels_;
  double smoothing_;
};

class FileSegmenter : public Segmenter {
 public:
  explicit FileSegmenter(std::filesystem::path path) : path_(std::move(path)) {}

  ScoreMap segment(const ProjectedImage& img) const override {
    return external_segment(img, path_);
  }

 private:
  std::filesystem::path path_;
};

}  // namespace mpf
