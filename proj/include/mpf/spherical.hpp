#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/types.hpp"

namespace mpf {

struct SphericalCoords {
  double theta = 0.0;  // pitch, radians
  double phi = 0.0;    // yaw, radians, in (-pi, pi]
  double r = 0.0;      // range, meters
};

struct PixelCoords {
  int u = 0;  // column, [0, W-1]
  int v = 0;  // row, [0, H-1]
};

inline SphericalCoords spherical_coords(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r == 0.0) throw DegeneratePoint("point at sensor origin has no direction");
  double phi = std::atan2(y, x);
  if (phi == -kPi) phi = kPi;  // keep yaw in (-pi, pi]
  return {std::asin(z / r), phi, r};
}

inline SphericalCoords spherical_coords(const Point& p) {
  return spherical_coords(p.x, p.y, p.z);
}

// Discretize angles into image indices:
//   u = floor(1/2 * (1 - phi/pi) * W)
//   v = floor((1 - (theta + fov_down)/fov) * H)
// so the pitch interval [-fov_down, +fov_up] spans rows H-1 .. 0. Both
// indices are clamped into bounds, so out-of-FOV points land on the border.
inline PixelCoords pixel_coords(const SphericalCoords& s, const SphericalConfig& cfg) {
  const double uu = 0.5 * (1.0 - s.phi / kPi) * cfg.width();
  const double vv = (1.0 - (s.theta + cfg.fov_down()) / cfg.fov()) * cfg.height();
  const int u = std::clamp(static_cast<int>(std::floor(uu)), 0, cfg.width() - 1);
  const int v = std::clamp(static_cast<int>(std::floor(vv)), 0, cfg.height() - 1);
  return {u, v};
}

// Project a 360-degree cloud onto the range image. When several points fall
// into one pixel the closest wins; equal ranges keep the lowest original
// index. Origin points (r = 0) are skipped. Channels are (x, y, z, r, rem).
inline ProjectedImage project_spherical(const PointCloud& cloud, const SphericalConfig& cfg) {
  ProjectedImage img(cfg.height(), cfg.width(), 5, cloud.size());
  const std::size_t pixels = static_cast<std::size_t>(cfg.height()) * cfg.width();
  std::vector<double> best_range(pixels, std::numeric_limits<double>::infinity());
  std::vector<std::int32_t> winner(pixels, ProjectedImage::kSparse);
  std::vector<std::int32_t> prow(cloud.size(), -1), pcol(cloud.size(), -1);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud[i];
    const double r = std::sqrt(static_cast<double>(p.x) * p.x +
                               static_cast<double>(p.y) * p.y +
                               static_cast<double>(p.z) * p.z);
    if (r == 0.0) continue;
    double phi = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
    if (phi == -kPi) phi = kPi;
    const double theta = std::asin(p.z / r);
    const PixelCoords px = pixel_coords({theta, phi, r}, cfg);
    prow[i] = px.v;
    pcol[i] = px.u;
    const std::size_t f = static_cast<std::size_t>(px.v) * cfg.width() + px.u;
    const std::int32_t idx = static_cast<std::int32_t>(i);
    if (r < best_range[f] || (r == best_range[f] && idx < winner[f])) {
      best_range[f] = r;
      winner[f] = idx;
    }
  }

  for (int v = 0; v < cfg.height(); ++v) {
    for (int u = 0; u < cfg.width(); ++u) {
      const std::size_t f = static_cast<std::size_t>(v) * cfg.width() + u;
      if (winner[f] == ProjectedImage::kSparse) continue;
      const Point& p = cloud[winner[f]];
      const float feat[5] = {p.x, p.y, p.z, static_cast<float>(best_range[f]), p.rem};
      img.set_pixel(v, u, feat, winner[f]);
    }
  }
  img.set_point_pixels(std::move(prow), std::move(pcol));
  return img;
}

}  // namespace mpf
