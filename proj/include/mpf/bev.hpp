#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mpf/types.hpp"

namespace mpf {

struct CellCoords {
  int row = 0;  // indexes y
  int col = 0;  // indexes x
};

// nullopt signals discard: the point lies outside the grid extent. The
// lower boundary is inclusive, the upper boundary exclusive.
inline std::optional<CellCoords> cell_coords(double x, double y, const BevConfig& cfg) {
  if (!(x >= cfg.x_min() && x < cfg.x_max() && y >= cfg.y_min() && y < cfg.y_max()))
    return std::nullopt;
  int col = static_cast<int>(std::floor((x - cfg.x_min()) * cfg.cols() / (cfg.x_max() - cfg.x_min())));
  int row = static_cast<int>(std::floor((y - cfg.y_min()) * cfg.rows() / (cfg.y_max() - cfg.y_min())));
  // In-range inputs can still round onto the upper edge.
  col = std::min(col, cfg.cols() - 1);
  row = std::min(row, cfg.rows() - 1);
  return CellCoords{row, col};
}

// Rasterize onto the x-y plane. Each cell keeps the in-bounds point with
// maximum z; equal heights keep the lowest original index. Channels are
// (x, y, z, rem).
inline ProjectedImage project_bev(const PointCloud& cloud, const BevConfig& cfg) {
  ProjectedImage img(cfg.rows(), cfg.cols(), 4, cloud.size());
  const std::size_t cells = static_cast<std::size_t>(cfg.rows()) * cfg.cols();
  std::vector<float> best_z(cells, -std::numeric_limits<float>::infinity());
  std::vector<std::int32_t> winner(cells, ProjectedImage::kSparse);
  std::vector<std::int32_t> prow(cloud.size(), -1), pcol(cloud.size(), -1);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud[i];
    const auto cell = cell_coords(p.x, p.y, cfg);
    if (!cell) continue;
    prow[i] = cell->row;
    pcol[i] = cell->col;
    const std::size_t f = static_cast<std::size_t>(cell->row) * cfg.cols() + cell->col;
    const std::int32_t idx = static_cast<std::int32_t>(i);
    if (p.z > best_z[f] || (p.z == best_z[f] && idx < winner[f])) {
      best_z[f] = p.z;
      winner[f] = idx;
    }
  }

  for (int row = 0; row < cfg.rows(); ++row) {
    for (int col = 0; col < cfg.cols(); ++col) {
      const std::size_t f = static_cast<std::size_t>(row) * cfg.cols() + col;
      if (winner[f] == ProjectedImage::kSparse) continue;
      const Point& p = cloud[winner[f]];
      const float feat[4] = {p.x, p.y, p.z, p.rem};
      img.set_pixel(row, col, feat, winner[f]);
    }
  }
  img.set_point_pixels(std::move(prow), std::move(pcol));
  return img;
}

}  // namespace mpf
