#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mpf/error.hpp"
#include "mpf/types.hpp"

// All file formats here are little-endian on disk.
static_assert(std::endian::native == std::endian::little,
              "codecs assume a little-endian host");

namespace mpf {

namespace detail {

inline std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<char> buf(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(buf.data(), size))
    throw IoError("cannot read " + path.string());
  return buf;
}

inline void write_file(const std::filesystem::path& path, std::span<const char> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

inline std::uint32_t read_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

inline void append_u32(std::vector<char>& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.insert(out.end(), b, b + 4);
}

}  // namespace detail

// --- SemanticKITTI scan format: consecutive little-endian f32 (x, y, z, rem).

inline PointCloud read_scan(const std::filesystem::path& path) {
  const std::vector<char> buf = detail::read_file(path);
  if (buf.size() % 16 != 0)
    throw TruncatedFile(path.string() + ": size " + std::to_string(buf.size()) +
                        " is not a multiple of 16");
  std::vector<Point> points(buf.size() / 16);
  if (!points.empty())
    std::memcpy(points.data(), buf.data(), buf.size());
  return PointCloud(std::move(points));
}

inline void write_scan(const std::filesystem::path& path, const PointCloud& cloud) {
  static_assert(sizeof(Point) == 16);
  std::span<const Point> pts = cloud.points();
  detail::write_file(path, {reinterpret_cast<const char*>(pts.data()), pts.size() * 16});
}

// --- Class remapping: raw SemanticKITTI ids (16-bit) to train ids in [0, C).

class ClassMap {
 public:
  explicit ClassMap(std::int32_t class_count = kDefaultClassCount)
      : class_count_(class_count), train_to_raw_(class_count, 0),
        class_names_(class_count), named_(class_count, false) {
    if (class_count < 1) throw InvalidConfig("class count must be >= 1");
    for (std::int32_t c = 0; c < class_count; ++c)
      class_names_[c] = "class_" + std::to_string(c);
    class_names_[0] = "unlabeled";
  }

  // The first mapping seen for a train id provides its reported name and
  // representative raw id; later aliases only extend raw_to_train.
  void add(std::uint32_t raw_id, std::int32_t train_id, const std::string& name) {
    if (raw_to_train_.count(raw_id))
      throw DuplicateRawId("raw id " + std::to_string(raw_id) + " mapped twice");
    if (train_id < 0 || train_id >= class_count_)
      throw TrainIdOutOfRange("train id " + std::to_string(train_id) +
                              " outside [0, " + std::to_string(class_count_) + ")");
    raw_to_train_.emplace(raw_id, train_id);
    if (!named_[train_id]) {
      if (!name.empty()) class_names_[train_id] = name;
      train_to_raw_[train_id] = raw_id;
      named_[train_id] = true;
    }
  }

  std::int32_t to_train(std::uint32_t raw_id) const {
    const auto it = raw_to_train_.find(raw_id);
    return it == raw_to_train_.end() ? 0 : it->second;
  }

  std::uint32_t to_raw(std::int32_t train_id) const { return train_to_raw_.at(train_id); }

  std::int32_t class_count() const { return class_count_; }
  std::size_t size() const { return raw_to_train_.size(); }
  const std::vector<std::string>& class_names() const { return class_names_; }

 private:
  std::int32_t class_count_;
  std::unordered_map<std::uint32_t, std::int32_t> raw_to_train_;
  std::vector<std::uint32_t> train_to_raw_;
  std::vector<std::string> class_names_;
  std::vector<bool> named_;
};

// Text format, one mapping per line: `<raw_id> <train_id> <name>`.
// '#' starts a comment; blank lines are allowed.
inline ClassMap load_class_map(const std::filesystem::path& path,
                               std::int32_t class_count = kDefaultClassCount) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ClassMap map(class_count);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream fields(line);
    long long raw = 0, train = 0;
    if (!(fields >> raw)) continue;  // blank or comment-only line
    if (!(fields >> train)) throw ParseError("missing train id", line_no);
    std::string name;
    std::getline(fields, name);
    const auto start = name.find_first_not_of(" \t");
    const auto end = name.find_last_not_of(" \t\r");
    name = start == std::string::npos ? "" : name.substr(start, end - start + 1);
    if (raw < 0 || raw > 0xFFFF) throw ParseError("raw id outside 16-bit range", line_no);
    if (train < 0 || train >= class_count)
      throw TrainIdOutOfRange("train id " + std::to_string(train) + " outside [0, " +
                              std::to_string(class_count) + ") at line " +
                              std::to_string(line_no));
    map.add(static_cast<std::uint32_t>(raw), static_cast<std::int32_t>(train), name);
  }
  return map;
}

// --- SemanticKITTI label format: little-endian u32 per point; semantic raw
// id in the lower 16 bits, instance id in the upper 16 (discarded here).

inline std::vector<std::uint32_t> read_label_words(const std::filesystem::path& path) {
  const std::vector<char> buf = detail::read_file(path);
  if (buf.size() % 4 != 0)
    throw TruncatedFile(path.string() + ": size " + std::to_string(buf.size()) +
                        " is not a multiple of 4");
  std::vector<std::uint32_t> words(buf.size() / 4);
  if (!words.empty())
    std::memcpy(words.data(), buf.data(), buf.size());
  return words;
}

inline LabelVector read_labels(const std::filesystem::path& path, const ClassMap& map,
                               std::optional<std::size_t> expected_count = std::nullopt) {
  const std::vector<std::uint32_t> words = read_label_words(path);
  if (expected_count && words.size() != *expected_count)
    throw LengthMismatch(path.string() + ": " + std::to_string(words.size()) +
                         " labels for " + std::to_string(*expected_count) + " points");
  std::vector<std::int32_t> labels(words.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    labels[i] = map.to_train(words[i] & 0xFFFFu);
  return LabelVector(std::move(labels), map.class_count());
}

inline void write_labels(const std::filesystem::path& path,
                         std::span<const std::uint32_t> raw_words) {
  detail::write_file(path, {reinterpret_cast<const char*>(raw_words.data()),
                            raw_words.size() * 4});
}

// --- Score-map exchange format (MPFS), bit-exact:
//   magic "MPFS"
//   u32 version (= 1), height, width, class count
//   H*W validity bytes, row-major, 1 = valid
//   H*W*C f32 scores, row-major, channel-fastest

inline constexpr char kScoreMagic[4] = {'M', 'P', 'F', 'S'};
inline constexpr std::uint32_t kScoreVersion = 1;

inline void write_scores(const std::filesystem::path& path, const ScoreMap& map) {
  std::vector<char> out;
  const std::size_t pixels = static_cast<std::size_t>(map.height()) * map.width();
  out.reserve(20 + pixels + map.scores().size() * 4);
  out.insert(out.end(), kScoreMagic, kScoreMagic + 4);
  detail::append_u32(out, kScoreVersion);
  detail::append_u32(out, static_cast<std::uint32_t>(map.height()));
  detail::append_u32(out, static_cast<std::uint32_t>(map.width()));
  detail::append_u32(out, static_cast<std::uint32_t>(map.class_count()));
  out.insert(out.end(), map.valid_mask().begin(), map.valid_mask().end());
  const std::size_t payload = map.scores().size() * 4;
  const std::size_t base = out.size();
  out.resize(base + payload);
  std::memcpy(out.data() + base, map.scores().data(), payload);
  detail::write_file(path, out);
}

inline ScoreMap read_scores(const std::filesystem::path& path) {
  const std::vector<char> buf = detail::read_file(path);
  if (buf.size() < 20) throw TruncatedFile(path.string() + ": shorter than the header");
  if (std::memcmp(buf.data(), kScoreMagic, 4) != 0)
    throw BadMagic(path.string() + ": not a score-map file");
  const std::uint32_t version = detail::read_u32(buf.data() + 4);
  if (version != kScoreVersion)
    throw UnsupportedVersion(path.string() + ": version " + std::to_string(version));
  const std::uint64_t h = detail::read_u32(buf.data() + 8);
  const std::uint64_t w = detail::read_u32(buf.data() + 12);
  const std::uint64_t c = detail::read_u32(buf.data() + 16);
  if (h < 1 || w < 1 || c < 1)
    throw TruncatedFile(path.string() + ": degenerate dimensions in header");
  const std::uint64_t pixels = h * w;
  const std::uint64_t expected = 20 + pixels + pixels * c * 4;
  if (buf.size() != expected)
    throw TruncatedFile(path.string() + ": expected " + std::to_string(expected) +
                        " bytes, found " + std::to_string(buf.size()));
  std::vector<std::uint8_t> valid(pixels);
  for (std::uint64_t p = 0; p < pixels; ++p)
    valid[p] = buf[20 + p] != 0;
  std::vector<float> scores(pixels * c);
  std::memcpy(scores.data(), buf.data() + 20 + pixels, scores.size() * 4);
  return ScoreMap(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c),
                  std::move(scores), std::move(valid));
}

}  // namespace mpf
