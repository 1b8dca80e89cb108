#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lsl {

inline constexpr const char* kArtifactVersion = "lsl-lab 1.0.0";

// Shortest-round-trip formatting for doubles, stable across reruns.
std::string format_double(double v);

// Row table rendered with a schema comment line
//   # lsl-lab csv v1 <experiment>
// followed by the header and one comma-joined line per row. Column order is
// fixed at construction; every accessor sees the same bytes.
class CsvTable {
 public:
  CsvTable(std::string experiment, std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& cells);

  long long row_count() const { return static_cast<long long>(rows_.size()); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

// SHA-256 digest as lowercase hex; used to pin output files in manifests.
std::string sha256_hex(const std::string& bytes);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// One run's provenance: the validated config, seed, timing, per-check
// verdicts, and digests of every file the run wrote.
struct RunManifest {
  std::string experiment;
  std::string config_json;  // validated config echoed back, canonical form
  std::uint64_t seed = 0;
  int threads = 1;
  double wall_seconds = 0;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, std::string>> outputs;  // name -> digest

  bool all_passed() const;
  std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace lsl
