#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "mpf/io.hpp"
#include "support/synthetic_world.hpp"

using namespace mpf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "mpf_io_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir / name;
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("scan parser reads little-endian float quadruples in order") {
  // (1,0,0,0.5), (0,1,0,0.25)
  std::vector<unsigned char> bytes;
  auto push_f32 = [&](float v) {
    unsigned char b[4];
    std::memcpy(b, &v, 4);
    bytes.insert(bytes.end(), b, b + 4);
  };
  for (float v : {1.0f, 0.0f, 0.0f, 0.5f, 0.0f, 1.0f, 0.0f, 0.25f}) push_f32(v);
  const fs::path p = temp_file("two_points.bin");
  write_bytes(p, bytes);

  const PointCloud cloud = read_scan(p);
  REQUIRE(cloud.size() == 2);
  REQUIRE(cloud[0].x == 1.0f);
  REQUIRE(cloud[0].rem == 0.5f);
  REQUIRE(cloud[1].y == 1.0f);
  REQUIRE(cloud[1].rem == 0.25f);
}

TEST_CASE("scan parser rejects lengths that are not multiples of 16") {
  const fs::path p = temp_file("truncated.bin");
  write_bytes(p, std::vector<unsigned char>(17, 0));
  REQUIRE_THROWS_AS(read_scan(p), TruncatedFile);
  REQUIRE_THROWS_AS(read_scan(temp_file("missing.bin")), IoError);
}

TEST_CASE("scan writer round-trips synthetic clouds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> coord(-80.0f, 80.0f);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts(rng() % 500);
    for (Point& p : pts) p = {coord(rng), coord(rng), coord(rng), coord(rng)};
    const PointCloud cloud{std::move(pts)};
    const fs::path p = temp_file("roundtrip.bin");
    write_scan(p, cloud);
    const PointCloud back = read_scan(p);
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      REQUIRE(back[i].x == cloud[i].x);
      REQUIRE(back[i].y == cloud[i].y);
      REQUIRE(back[i].z == cloud[i].z);
      REQUIRE(back[i].rem == cloud[i].rem);
    }
  }
}

TEST_CASE("real scan has six figures of points when the dataset is present") {
  const char* root = std::getenv("MPF_SEMANTICKITTI_ROOT");
  if (root == nullptr) SKIP("MPF_SEMANTICKITTI_ROOT not set");
  const fs::path scan = fs::path(root) / "sequences/08/velodyne/000000.bin";
  if (!fs::exists(scan)) SKIP("sequence 08 not found under the dataset root");
  REQUIRE(read_scan(scan).size() > 100000);
}

TEST_CASE("label words keep the low 16 bits and remap via the class map") {
  ClassMap map(20);
  map.add(40, 9, "road");
  const fs::path p = temp_file("labels.label");
  // 0x00010028: raw id 40, instance id 1. Then a zero word, then an unknown id.
  write_bytes(p, {0x28, 0x00, 0x01, 0x00,  0x00, 0x00, 0x00, 0x00,  0x63, 0x00, 0x00, 0x00});

  const LabelVector labels = read_labels(p, map);
  REQUIRE(labels.size() == 3);
  REQUIRE(labels[0] == 9);   // instance bits dropped
  REQUIRE(labels[1] == 0);
  REQUIRE(labels[2] == 0);   // raw id 99 absent from the map
}

TEST_CASE("label parsing checks alignment and pairing") {
  const fs::path p = temp_file("labels_bad.label");
  write_bytes(p, std::vector<unsigned char>(6, 0));
  ClassMap map(20);
  REQUIRE_THROWS_AS(read_labels(p, map), TruncatedFile);

  write_bytes(p, std::vector<unsigned char>(8, 0));
  REQUIRE_THROWS_AS(read_labels(p, map, 3), LengthMismatch);
  REQUIRE_NOTHROW(read_labels(p, map, 2));
}

TEST_CASE("label parsing is total on arbitrary aligned bytes") {
  std::mt19937_64 rng(11);
  const ClassMap map = testsupport::standard_class_map();
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<unsigned char> bytes(4 * (rng() % 200));
    for (auto& b : bytes) b = static_cast<unsigned char>(rng());
    const fs::path p = temp_file("labels_fuzz.label");
    write_bytes(p, bytes);
    const LabelVector labels = read_labels(p, map);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      REQUIRE(labels[i] >= 0);
      REQUIRE(labels[i] < 20);
    }
  }
}

TEST_CASE("class map loader parses the line format") {
  const fs::path p = temp_file("classes.txt");
  {
    std::ofstream out(p);
    out << "# comment line\n";
    out << "0 0 unlabeled\n";
    out << "10 1 car  # trailing comment\n";
    out << "\n";
    out << "252 1 moving-car\n";
  }
  const ClassMap map = load_class_map(p, 20);
  REQUIRE(map.size() == 3);
  REQUIRE(map.to_train(10) == 1);
  REQUIRE(map.to_train(252) == 1);
  REQUIRE(map.to_train(12345) == 0);
  REQUIRE(map.class_names()[1] == "car");   // first mapping names the class
  REQUIRE(map.to_raw(1) == 10);
}

TEST_CASE("class map loader rejects malformed input") {
  const fs::path p = temp_file("classes_bad.txt");
  auto write_text = [&](const std::string& text) {
    std::ofstream out(p);
    out << text;
  };
  write_text("10 1 car\n10 2 bicycle\n");
  REQUIRE_THROWS_AS(load_class_map(p, 20), DuplicateRawId);
  write_text("10 25 car\n");
  REQUIRE_THROWS_AS(load_class_map(p, 20), TrainIdOutOfRange);
  write_text("10\n");
  REQUIRE_THROWS_AS(load_class_map(p, 20), ParseError);
  write_text("70000 1 toolarge\n");
  REQUIRE_THROWS_AS(load_class_map(p, 20), ParseError);
}

TEST_CASE("score map header arithmetic") {
  // H=1, W=1, C=2: 4 magic + 16 header + 1 mask + 8 payload = 29 bytes.
  const fs::path p = temp_file("tiny.mpfs");
  write_scores(p, ScoreMap(1, 1, 2, {0.25f, 0.75f}, {1}));
  REQUIRE(fs::file_size(p) == 29);

  const ScoreMap back = read_scores(p);
  REQUIRE(back.height() == 1);
  REQUIRE(back.class_count() == 2);
  REQUIRE(back.at(0, 0)[0] == 0.25f);
  REQUIRE(back.is_valid(0, 0));
}

TEST_CASE("score map codec round-trips bit-exactly on random maps") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 8);
    const int w = 1 + static_cast<int>(rng() % 8);
    const int c = 1 + static_cast<int>(rng() % 6);
    std::vector<float> scores(static_cast<std::size_t>(h) * w * c);
    std::vector<std::uint8_t> valid(static_cast<std::size_t>(h) * w);
    for (std::size_t px = 0; px < valid.size(); ++px) {
      valid[px] = rng() % 3 == 0 ? 0 : 1;
      float sum = 0.0f;
      for (int k = 0; k < c; ++k) {
        scores[px * c + k] = unit(rng) + 1e-3f;
        sum += scores[px * c + k];
      }
      if (valid[px]) {
        for (int k = 0; k < c; ++k) scores[px * c + k] /= sum;
      }
    }
    const ScoreMap map(h, w, c, scores, valid);
    const fs::path p1 = temp_file("rt1.mpfs");
    const fs::path p2 = temp_file("rt2.mpfs");
    write_scores(p1, map);
    write_scores(p2, read_scores(p1));
    REQUIRE(read_bytes(p1) == read_bytes(p2));
  }
}

TEST_CASE("score map codec rejects corrupt files") {
  const fs::path p = temp_file("bad.mpfs");
  write_scores(p, ScoreMap(1, 1, 2, {0.25f, 0.75f}, {1}));

  auto bytes = read_bytes(p);
  auto corrupted = bytes;
  corrupted[0] = 'X';
  write_bytes(p, corrupted);
  REQUIRE_THROWS_AS(read_scores(p), BadMagic);

  corrupted = bytes;
  corrupted[4] = 9;  // version
  write_bytes(p, corrupted);
  REQUIRE_THROWS_AS(read_scores(p), UnsupportedVersion);

  corrupted = bytes;
  corrupted.pop_back();
  write_bytes(p, corrupted);
  REQUIRE_THROWS_AS(read_scores(p), TruncatedFile);

  write_bytes(p, {'M', 'P', 'F'});
  REQUIRE_THROWS_AS(read_scores(p), TruncatedFile);
}
