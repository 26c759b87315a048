#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "mpf/types.hpp"

using namespace mpf;

namespace {
constexpr float kNan = std::numeric_limits<float>::quiet_NaN();
constexpr float kInf = std::numeric_limits<float>::infinity();
}  // namespace

TEST_CASE("cloud validation accepts finite points") {
  REQUIRE_NOTHROW(PointCloud({{1.0f, 2.0f, 3.0f, 0.5f}}));
  REQUIRE_NOTHROW(PointCloud({}));  // empty cloud is fine
}

TEST_CASE("cloud validation reports the first offending point") {
  try {
    PointCloud cloud({{kNan, 0.0f, 0.0f, 0.0f}});
    FAIL("expected NonFiniteCoordinate");
  } catch (const NonFiniteCoordinate& e) {
    REQUIRE(e.index() == 0);
  }
  try {
    PointCloud cloud({{1.0f, 1.0f, 1.0f, 0.0f}, {0.0f, kInf, 0.0f, 0.0f}});
    FAIL("expected NonFiniteCoordinate");
  } catch (const NonFiniteCoordinate& e) {
    REQUIRE(e.index() == 1);
  }
  REQUIRE_THROWS_AS(PointCloud({{0.0f, 0.0f, 0.0f, kNan}}), NonFiniteCoordinate);
}

TEST_CASE("label vector rejects out-of-range classes") {
  REQUIRE_NOTHROW(LabelVector({0, 5, 19}, 20));
  REQUIRE_THROWS_AS(LabelVector({20}, 20), InvalidConfig);
  REQUIRE_THROWS_AS(LabelVector({-1}, 20), InvalidConfig);
}

TEST_CASE("projected image tracks validity and source together") {
  ProjectedImage img(2, 3, 5, 10);
  REQUIRE(img.valid_count() == 0);
  REQUIRE(img.source_index(1, 2) == ProjectedImage::kSparse);

  const float feat[5] = {1.0f, 2.0f, 3.0f, 4.0f, 0.5f};
  img.set_pixel(1, 2, feat, 7);
  REQUIRE(img.is_valid(1, 2));
  REQUIRE(img.source_index(1, 2) == 7);
  REQUIRE(img.pixel(1, 2)[3] == 4.0f);
  REQUIRE(img.valid_count() == 1);

  img.clear_pixel(1, 2);
  REQUIRE_FALSE(img.is_valid(1, 2));
  REQUIRE(img.source_index(1, 2) == ProjectedImage::kSparse);
  REQUIRE(img.pixel(1, 2)[3] == 0.0f);

  const float short_feat[2] = {0.0f, 0.0f};
  REQUIRE_THROWS_AS(img.set_pixel(0, 0, short_feat, 0), ShapeMismatch);
  REQUIRE_THROWS_AS(img.set_pixel(0, 0, feat, 10), InvalidConfig);  // index >= N
}

TEST_CASE("score map enforces the softmax contract at valid pixels") {
  // 1x2 map, C=2: first pixel valid and normalized, second sparse and junk.
  REQUIRE_NOTHROW(ScoreMap(1, 2, 2, {0.25f, 0.75f, 3.0f, 9.0f}, {1, 0}));
  REQUIRE_THROWS_AS(ScoreMap(1, 2, 2, {0.25f, 0.80f, 0.5f, 0.5f}, {1, 0}), InvalidConfig);
  REQUIRE_THROWS_AS(ScoreMap(1, 1, 2, {-0.1f, 1.1f}, {0}), InvalidConfig);
  REQUIRE_THROWS_AS(ScoreMap(1, 1, 2, {kNan, 1.0f}, {0}), InvalidConfig);
  REQUIRE_THROWS_AS(ScoreMap(1, 1, 2, {0.5f, 0.5f}, {0, 0}), ShapeMismatch);
}

TEST_CASE("point scores require finite nonnegative entries") {
  REQUIRE_NOTHROW(PointScores(2, 2, {0.0f, 0.0f, 1.4f, 0.2f}));
  REQUIRE_THROWS_AS(PointScores(1, 2, {-0.5f, 0.5f}), InvalidConfig);
  REQUIRE_THROWS_AS(PointScores(1, 2, {0.5f}), ShapeMismatch);
}

TEST_CASE("configs reject invalid geometry") {
  REQUIRE_THROWS_AS(SphericalConfig(0, 2048, 0.05, 0.44), InvalidConfig);
  REQUIRE_THROWS_AS(SphericalConfig(64, 2048, 0.0, 0.0), InvalidConfig);
  REQUIRE_THROWS_AS(BevConfig(256, 256, 50.0, -50.0, -50.0, 50.0), InvalidConfig);
  REQUIRE_THROWS_AS(BevConfig(0, 256, -50.0, 50.0, -50.0, 50.0), InvalidConfig);
  REQUIRE_THROWS_AS(PostProcessConfig(2), InvalidConfig);   // even window
  REQUIRE_THROWS_AS(PostProcessConfig(-3), InvalidConfig);
  REQUIRE_THROWS_AS(PostProcessConfig(3, 0.0), InvalidConfig);
  REQUIRE_NOTHROW(PostProcessConfig(1, 0.5, DistanceMetric::Euclidean));
  REQUIRE(SphericalConfig::hdl64().fov() ==
          Catch::Approx(28.0 * kPi / 180.0).epsilon(1e-12));
}
