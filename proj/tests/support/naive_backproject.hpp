#pragma once

// Test-only oracle: a deliberately plain transcription of the soft-voting
// back-projection, written against the published pseudocode and kept
// independent of the library's optimized implementation. Everything is
// recomputed from first principles here, including projection indices.

#include <vector>

#include "mpf/types.hpp"

namespace testsupport {

using ScoreRows = std::vector<std::vector<double>>;  // N rows of C scores

ScoreRows naive_back_project_spherical(const mpf::PointCloud& cloud,
                                       const mpf::ProjectedImage& img,
                                       const mpf::ScoreMap& scores, int window,
                                       double sigma, bool manhattan, bool wrap,
                                       double fov_up, double fov_down);

ScoreRows naive_back_project_bev(const mpf::PointCloud& cloud,
                                 const mpf::ProjectedImage& img,
                                 const mpf::ScoreMap& scores, int window, double sigma,
                                 bool manhattan, double x_min, double x_max,
                                 double y_min, double y_max);

}  // namespace testsupport
