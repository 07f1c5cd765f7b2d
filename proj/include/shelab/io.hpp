#pragma once

// CSV and JSON artifacts: round-trip number formatting, atomic writes
// (temporary file + rename), content hashing, and run manifests.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shelab/errors.hpp"
#include "shelab/spde.hpp"

namespace shelab::io {

inline constexpr int kManifestSchemaVersion = 1;

/// Shortest text that reads back to the same double (%.17g).
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Writes `content` to `path` via a sibling temporary file and rename.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Builds a CSV in memory: a header row, then numeric or text rows.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header) { row_text(header); }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_number(values[i]);
    }
    out_ << '\n';
  }

  void row_text(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

/// Snapshot CSV with columns t, x, u.
inline std::string field_csv(const SolutionField& f) {
  CsvBuilder csv({"t", "x", "u"});
  for (std::size_t k = 0; k < f.n_times(); ++k) {
    const auto r = f.row(k);
    for (std::size_t j = 0; j < f.grid.n_points; ++j) csv.row({f.times[k], f.grid.x(j), r[j]});
  }
  return csv.str();
}

struct ArtifactRecord {
  std::string name;
  std::string fnv1a;
  std::size_t bytes = 0;
};

/// Collects the files of one run and writes them atomically under `dir`.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    write_atomic(dir_ / name, content);
    records_.push_back({name, hex64(fnv1a(content)), content.size()});
  }

  const std::vector<ArtifactRecord>& records() const { return records_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<ArtifactRecord> records_;
};

inline nlohmann::json records_json(const std::vector<ArtifactRecord>& recs) {
  auto arr = nlohmann::json::array();
  for (const auto& r : recs) arr.push_back({{"name", r.name}, {"fnv1a", r.fnv1a}, {"bytes", r.bytes}});
  return arr;
}

}  // namespace shelab::io
