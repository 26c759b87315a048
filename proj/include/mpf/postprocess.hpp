#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "mpf/bev.hpp"
#include "mpf/error.hpp"
#include "mpf/spherical.hpp"
#include "mpf/types.hpp"

namespace mpf {

inline double gaussian_weight(double d, double sigma) {
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

inline double distance(double px, double py, double pz, const float* q, DistanceMetric metric) {
  const double dx = px - q[0];
  const double dy = py - q[1];
  const double dz = pz - q[2];
  if (metric == DistanceMetric::Euclidean)
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  return std::abs(dx) + std::abs(dy) + std::abs(dz);
}

inline double distance(const Point& p, const Point& q, DistanceMetric metric) {
  const float qf[3] = {q.x, q.y, q.z};
  return distance(p.x, p.y, p.z, qf, metric);
}

namespace detail {

// Below this exponent the vote is under 1e-20 of a softmax unit; the pixel
// still counts toward M but its contribution is dropped, which also keeps
// the hot loop away from subnormal arithmetic.
inline constexpr double kMinExpArg = -46.5;

// Soft voting over the K x K window centered on the point's own pixel.
// Window pixels outside the image are skipped (columns wrap instead when
// wrap is set); sparse pixels are skipped; the accumulated vector is
// divided by the number M of contributing pixels. Accumulation is
// row-major over the window so results are bit-stable under data-parallel
// execution over points.
//
// kHalf fixes the window radius and kClasses the class count at compile
// time for the common configuration, letting the window loops unroll and
// the accumulator live in registers; -1 selects the generic fallback.
template <int kHalf, int kClasses, bool kWrap, bool kManhattan>
void back_project_core(const PointCloud& cloud, const ProjectedImage& img,
                       const ScoreMap& scores, const PostProcessConfig& cfg,
                       const std::int32_t* prow, const std::int32_t* pcol,
                       PointScores& out) {
  const int height = img.height();
  const int width = img.width();
  const int classes = kClasses > 0 ? kClasses : scores.class_count();
  const int channels = img.channels();
  const int half = kHalf >= 0 ? kHalf : cfg.window() / 2;
  const double inv_two_sigma_sq = 1.0 / (2.0 * cfg.sigma() * cfg.sigma());

  const float* feat = img.features().data();
  const std::uint8_t* valid = img.valid_mask().data();
  const float* score = scores.scores().data();
  const std::size_t n = cloud.size();

  constexpr int kAccFixed = kClasses > 0 ? kClasses : 1;
  std::array<double, kAccFixed> acc_fixed;
  std::vector<double> acc_storage(kClasses > 0 ? 0 : classes);
  double* const __restrict acc = kClasses > 0 ? acc_fixed.data() : acc_storage.data();

  for (std::size_t i = 0; i < n; ++i) {
    if (prow[i] < 0) continue;  // no pixel: the output row stays all-zero
    const double px_x = cloud[i].x;
    const double px_y = cloud[i].y;
    const double px_z = cloud[i].z;
    for (int c = 0; c < classes; ++c) acc[c] = 0.0;
    int contributors = 0;

    const int row_lo = std::max(prow[i] - half, 0);
    const int row_hi = std::min(prow[i] + half, height - 1);
    for (int row = row_lo; row <= row_hi; ++row) {
      const std::size_t base = static_cast<std::size_t>(row) * width;
      for (int du = -half; du <= half; ++du) {
        int col = pcol[i] + du;
        if (kWrap) {
          col = (col % width + width) % width;
        } else if (col < 0 || col >= width) {
          continue;
        }
        const std::size_t flat = base + col;
        if (!valid[flat]) continue;
        ++contributors;
        const float* cell = feat + flat * channels;
        const double dx = px_x - cell[0];
        const double dy = px_y - cell[1];
        const double dz = px_z - cell[2];
        const double d = kManhattan ? std::abs(dx) + std::abs(dy) + std::abs(dz)
                                    : std::sqrt(dx * dx + dy * dy + dz * dz);
        const double arg = -(d * d) * inv_two_sigma_sq;
        if (arg < kMinExpArg) continue;
        const double weight = std::exp(arg);
        const float* __restrict s = score + flat * classes;
        for (int c = 0; c < classes; ++c) acc[c] += weight * s[c];
      }
    }

    if (contributors > 0) {
      const double inv_m = 1.0 / contributors;
      float* o = out.row(i).data();
      for (int c = 0; c < classes; ++c)
        o[c] = static_cast<float>(acc[c] * inv_m);
    }
  }
}

template <typename PixelOf>
PointScores back_project_impl(const PointCloud& cloud, const ProjectedImage& img,
                              const ScoreMap& scores, const PostProcessConfig& cfg,
                              bool wrap, PixelOf&& pixel_of) {
  if (scores.height() != img.height() || scores.width() != img.width())
    throw ShapeMismatch("score map is " + std::to_string(scores.height()) + "x" +
                        std::to_string(scores.width()) + ", image is " +
                        std::to_string(img.height()) + "x" + std::to_string(img.width()));
  if (img.point_count() != cloud.size())
    throw ShapeMismatch("image was projected from a cloud of different size");

  const std::size_t n = cloud.size();

  // Per-point pixels: the projection caches them on the image; re-derive
  // from the config when the image was assembled by hand.
  std::vector<std::int32_t> derived_rows, derived_cols;
  const std::int32_t* prow;
  const std::int32_t* pcol;
  if (img.has_point_pixels()) {
    prow = img.point_rows().data();
    pcol = img.point_cols().data();
  } else {
    derived_rows.assign(n, -1);
    derived_cols.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::optional<std::pair<int, int>> px = pixel_of(cloud[i]);  // (row, col)
      if (px) {
        derived_rows[i] = px->first;
        derived_cols[i] = px->second;
      }
    }
    prow = derived_rows.data();
    pcol = derived_cols.data();
  }

  PointScores out(n, scores.class_count());
  const int half = cfg.window() / 2;
  const bool manhattan = cfg.metric() == DistanceMetric::Manhattan;
  const bool twenty = scores.class_count() == kDefaultClassCount;

  auto dispatch_rest = [&]<int kHalf, int kClasses>() {
    if (wrap) {
      if (manhattan)
        back_project_core<kHalf, kClasses, true, true>(cloud, img, scores, cfg, prow, pcol, out);
      else
        back_project_core<kHalf, kClasses, true, false>(cloud, img, scores, cfg, prow, pcol, out);
    } else {
      if (manhattan)
        back_project_core<kHalf, kClasses, false, true>(cloud, img, scores, cfg, prow, pcol, out);
      else
        back_project_core<kHalf, kClasses, false, false>(cloud, img, scores, cfg, prow, pcol, out);
    }
  };
  auto dispatch_half = [&]<int kClasses>() {
    switch (half) {
      case 0: dispatch_rest.template operator()<0, kClasses>(); break;
      case 1: dispatch_rest.template operator()<1, kClasses>(); break;
      case 2: dispatch_rest.template operator()<2, kClasses>(); break;
      default: dispatch_rest.template operator()<-1, kClasses>(); break;
    }
  };
  if (twenty)
    dispatch_half.template operator()<kDefaultClassCount>();
  else
    dispatch_half.template operator()<-1>();
  return out;
}

}  // namespace detail

inline PointScores back_project(const PointCloud& cloud, const ProjectedImage& img,
                                const ScoreMap& scores, const PostProcessConfig& cfg,
                                const SphericalConfig& proj) {
  if (img.height() != proj.height() || img.width() != proj.width())
    throw ShapeMismatch("image size does not match the spherical config");
  return detail::back_project_impl(
      cloud, img, scores, cfg, cfg.wrap_horizontal(),
      [&proj](const Point& p) -> std::optional<std::pair<int, int>> {
        const double r = std::sqrt(static_cast<double>(p.x) * p.x +
                                   static_cast<double>(p.y) * p.y +
                                   static_cast<double>(p.z) * p.z);
        if (r == 0.0) return std::nullopt;
        double phi = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
        if (phi == -kPi) phi = kPi;
        const PixelCoords px = pixel_coords({std::asin(p.z / r), phi, r}, proj);
        return std::pair<int, int>{px.v, px.u};
      });
}

inline PointScores back_project(const PointCloud& cloud, const ProjectedImage& img,
                                const ScoreMap& scores, const PostProcessConfig& cfg,
                                const BevConfig& proj) {
  if (img.height() != proj.rows() || img.width() != proj.cols())
    throw ShapeMismatch("image size does not match the bev config");
  // The seam-wrap flag is meaningless on a bird's-eye raster; always clip.
  return detail::back_project_impl(
      cloud, img, scores, cfg, /*wrap=*/false,
      [&proj](const Point& p) -> std::optional<std::pair<int, int>> {
        const auto cell = cell_coords(p.x, p.y, proj);
        if (!cell) return std::nullopt;
        return std::pair<int, int>{cell->row, cell->col};
      });
}

}  // namespace mpf
