#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/types.hpp"

namespace mpf {

// Every augmentation draws exclusively from the caller's generator; a fixed
// seed reproduces the exact output. Cloud-level transforms keep point order,
// so the label vector stays aligned and is returned untouched.

struct SphericalCloudAugmentParams {
  double translate_prob = 0.5;
  double rotate_prob = 0.5;
  double scale_prob = 0.5;
  double flip_prob = 0.5;
  double translate_y_min = -5.0, translate_y_max = 5.0;  // meters
  double rotate_min = -kPi, rotate_max = kPi;            // radians about z
  double scale_min = 0.95, scale_max = 1.05;             // uniform, about origin
};

struct BevCloudAugmentParams {
  double rotate_prob = 0.5;
  double scale_prob = 0.5;
  double translate_prob = 0.5;
  double z_noise_prob = 0.5;
  double rotate_min = -kPi, rotate_max = kPi;
  double scale_min = 0.95, scale_max = 1.05;
  double translate_min = -5.0, translate_max = 5.0;  // drawn separately for x and y
  double z_noise_std = 0.2;                          // meters
};

struct ImageAugmentParams {
  double dropout_rate = 0.005;  // expected fraction of pixels invalidated
  int block_rows_min = 1, block_rows_max = 4;
  int block_cols_min = 1, block_cols_max = 8;
};

namespace detail {

inline bool coin(std::mt19937_64& rng, double prob) {
  if (prob <= 0.0) return false;
  if (prob >= 1.0) return true;
  return std::bernoulli_distribution(prob)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace detail

// Transform pipeline for the spherical branch, each step taken with its own
// probability: translate along y, rotate about z, scale about the origin,
// flip across the y-axis (negate x).
inline std::pair<PointCloud, LabelVector> augment_cloud_spherical(
    const PointCloud& cloud, const LabelVector& labels, std::mt19937_64& rng,
    const SphericalCloudAugmentParams& params = {}) {
  if (labels.size() != cloud.size())
    throw LengthMismatch("labels do not cover the cloud");

  const bool do_translate = detail::coin(rng, params.translate_prob);
  const double ty = do_translate
      ? detail::uniform(rng, params.translate_y_min, params.translate_y_max) : 0.0;
  const bool do_rotate = detail::coin(rng, params.rotate_prob);
  const double angle = do_rotate
      ? detail::uniform(rng, params.rotate_min, params.rotate_max) : 0.0;
  const bool do_scale = detail::coin(rng, params.scale_prob);
  const double scale = do_scale
      ? detail::uniform(rng, params.scale_min, params.scale_max) : 1.0;
  const bool do_flip = detail::coin(rng, params.flip_prob);
  const double cos_a = std::cos(angle), sin_a = std::sin(angle);

  std::vector<Point> out(cloud.points().begin(), cloud.points().end());
  for (Point& p : out) {
    double x = p.x, y = p.y, z = p.z;
    if (do_translate) y += ty;
    if (do_rotate) {
      const double rx = x * cos_a - y * sin_a;
      const double ry = x * sin_a + y * cos_a;
      x = rx;
      y = ry;
    }
    if (do_scale) {
      x *= scale;
      y *= scale;
      z *= scale;
    }
    if (do_flip) x = -x;
    p.x = static_cast<float>(x);
    p.y = static_cast<float>(y);
    p.z = static_cast<float>(z);
  }
  return {PointCloud(std::move(out)), labels};
}

// Transform pipeline for the bird's-eye branch: rotate about z, uniform
// scale, translate in x and y, Gaussian noise on z.
inline std::pair<PointCloud, LabelVector> augment_cloud_bev(
    const PointCloud& cloud, const LabelVector& labels, std::mt19937_64& rng,
    const BevCloudAugmentParams& params = {}) {
  if (labels.size() != cloud.size())
    throw LengthMismatch("labels do not cover the cloud");

  const bool do_rotate = detail::coin(rng, params.rotate_prob);
  const double angle = do_rotate
      ? detail::uniform(rng, params.rotate_min, params.rotate_max) : 0.0;
  const bool do_scale = detail::coin(rng, params.scale_prob);
  const double scale = do_scale
      ? detail::uniform(rng, params.scale_min, params.scale_max) : 1.0;
  const bool do_translate = detail::coin(rng, params.translate_prob);
  const double tx = do_translate
      ? detail::uniform(rng, params.translate_min, params.translate_max) : 0.0;
  const double ty = do_translate
      ? detail::uniform(rng, params.translate_min, params.translate_max) : 0.0;
  const bool do_noise = detail::coin(rng, params.z_noise_prob);
  const double cos_a = std::cos(angle), sin_a = std::sin(angle);
  std::normal_distribution<double> noise(0.0, params.z_noise_std);

  std::vector<Point> out(cloud.points().begin(), cloud.points().end());
  for (Point& p : out) {
    double x = p.x, y = p.y, z = p.z;
    if (do_rotate) {
      const double rx = x * cos_a - y * sin_a;
      const double ry = x * sin_a + y * cos_a;
      x = rx;
      y = ry;
    }
    if (do_scale) {
      x *= scale;
      y *= scale;
      z *= scale;
    }
    if (do_translate) {
      x += tx;
      y += ty;
    }
    if (do_noise) z += noise(rng);
    p.x = static_cast<float>(x);
    p.y = static_cast<float>(y);
    p.z = static_cast<float>(z);
  }
  return {PointCloud(std::move(out)), labels};
}

// Invalidate rectangular blocks covering an expected dropout_rate fraction
// of the image. Blocks are placed fully inside the raster.
inline ProjectedImage coarse_dropout(ProjectedImage img, std::mt19937_64& rng,
                                     const ImageAugmentParams& params = {}) {
  if (params.dropout_rate < 0.0 || params.dropout_rate > 1.0)
    throw InvalidConfig("dropout rate must lie in [0, 1]");
  if (params.block_rows_min < 1 || params.block_rows_max < params.block_rows_min ||
      params.block_cols_min < 1 || params.block_cols_max < params.block_cols_min)
    throw InvalidConfig("dropout block ranges must be positive and ordered");
  const double mean_area = 0.5 * (params.block_rows_min + params.block_rows_max) *
                           0.5 * (params.block_cols_min + params.block_cols_max);
  const double pixels = static_cast<double>(img.height()) * img.width();
  const long blocks = std::lround(params.dropout_rate * pixels / mean_area);

  std::uniform_int_distribution<int> rows_dist(params.block_rows_min,
                                               std::min(params.block_rows_max, img.height()));
  std::uniform_int_distribution<int> cols_dist(params.block_cols_min,
                                               std::min(params.block_cols_max, img.width()));
  for (long b = 0; b < blocks; ++b) {
    const int h = rows_dist(rng);
    const int w = cols_dist(rng);
    const int top = std::uniform_int_distribution<int>(0, img.height() - h)(rng);
    const int left = std::uniform_int_distribution<int>(0, img.width() - w)(rng);
    for (int row = top; row < top + h; ++row)
      for (int col = left; col < left + w; ++col) img.clear_pixel(row, col);
  }
  return img;
}

// Horizontal crop of width W/2 starting at start_col, wrapping across the
// yaw seam.
inline ProjectedImage horizontal_crop(const ProjectedImage& img, int start_col) {
  const int out_width = img.width() / 2;
  if (out_width < 1) throw InvalidConfig("image too narrow to crop in half");
  const int start = ((start_col % img.width()) + img.width()) % img.width();
  ProjectedImage out(img.height(), out_width, img.channels(), img.point_count());
  for (int row = 0; row < img.height(); ++row) {
    for (int col = 0; col < out_width; ++col) {
      const int src = (start + col) % img.width();
      if (!img.is_valid(row, src)) continue;
      out.set_pixel(row, col, img.pixel(row, src), img.source_index(row, src));
    }
  }
  return out;
}

// CoarseDropout followed by a half-width crop at a uniformly sampled start.
inline ProjectedImage augment_image_spherical(const ProjectedImage& img,
                                              std::mt19937_64& rng,
                                              const ImageAugmentParams& params = {}) {
  ProjectedImage dropped = coarse_dropout(img, rng, params);
  const int start = std::uniform_int_distribution<int>(0, img.width() - 1)(rng);
  return horizontal_crop(dropped, start);
}

}  // namespace mpf
