#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/types.hpp"

namespace mpf {

// Elementwise sum of per-point scores from several views. A view that
// missed a point contributes a zero row and defers entirely to the others.
inline PointScores fuse(std::span<const PointScores* const> views) {
  if (views.empty()) throw ShapeMismatch("fuse needs at least one view");
  const std::size_t n = views[0]->size();
  const int c = views[0]->class_count();
  for (const PointScores* v : views) {
    if (v->size() != n || v->class_count() != c)
      throw ShapeMismatch("fused views must share N and C");
  }
  PointScores out(n, c);
  if (n == 0) return out;
  const std::size_t total = n * static_cast<std::size_t>(c);
  float* dst = out.row(0).data();
  for (const PointScores* v : views) {
    const float* src = v->data().data();
    for (std::size_t k = 0; k < total; ++k) dst[k] += src[k];
  }
  return out;
}

inline PointScores fuse(const PointScores& a, const PointScores& b) {
  const PointScores* views[2] = {&a, &b};
  return fuse(std::span<const PointScores* const>(views));
}

// Sum the views' rows for one point into acc (caller-provided, class_count
// long), then argmax with the same contract as predict().
namespace detail {

inline std::int32_t argmax_row(const float* row, int c, std::int32_t fallback, int skip) {
  bool all_zero = true;
  for (int k = 0; k < c; ++k) {
    if (row[k] != 0.0f) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return fallback;
  std::int32_t best = -1;
  float best_score = 0.0f;
  for (int k = 0; k < c; ++k) {
    if (k == skip) continue;
    if (best < 0 || row[k] > best_score) {
      best = k;
      best_score = row[k];
    }
  }
  return best < 0 ? fallback : best;
}

}  // namespace detail

// predict(fuse(views...)) in one pass, without materializing the sum.
inline LabelVector predict_fused(std::span<const PointScores* const> views,
                                 std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  if (views.empty()) throw ShapeMismatch("fuse needs at least one view");
  const std::size_t n = views[0]->size();
  const int c = views[0]->class_count();
  for (const PointScores* v : views) {
    if (v->size() != n || v->class_count() != c)
      throw ShapeMismatch("fused views must share N and C");
  }
  if (ignore_class && (*ignore_class < 0 || *ignore_class >= c))
    throw InvalidConfig("ignore class outside [0, C)");
  const std::int32_t fallback = ignore_class.value_or(0);
  const int skip = ignore_class.value_or(-1);

  std::vector<std::int32_t> labels(n);
  std::vector<float> acc(c);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = i * c;
    for (int k = 0; k < c; ++k) acc[k] = views[0]->data()[base + k];
    for (std::size_t v = 1; v < views.size(); ++v) {
      const float* src = views[v]->data().data() + base;
      for (int k = 0; k < c; ++k) acc[k] += src[k];
    }
    labels[i] = detail::argmax_row(acc.data(), c, fallback, skip);
  }
  return LabelVector(std::move(labels), c);
}

inline LabelVector predict_fused(const PointScores& a, const PointScores& b,
                                 std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  const PointScores* views[2] = {&a, &b};
  return predict_fused(std::span<const PointScores* const>(views), ignore_class);
}

// Argmax per point, excluding the ignore class when one is set. Ties go to
// the lowest class index; an all-zero row (point invisible to every view)
// yields the ignore class.
inline LabelVector predict(const PointScores& s,
                           std::optional<std::int32_t> ignore_class = kIgnoreClass) {
  const int c = s.class_count();
  if (ignore_class && (*ignore_class < 0 || *ignore_class >= c))
    throw InvalidConfig("ignore class outside [0, C)");
  const std::int32_t fallback = ignore_class.value_or(0);
  const int skip = ignore_class.value_or(-1);
  std::vector<std::int32_t> labels(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    labels[i] = detail::argmax_row(s.data().data() + i * c, c, fallback, skip);
  return LabelVector(std::move(labels), c);
}

}  // namespace mpf
