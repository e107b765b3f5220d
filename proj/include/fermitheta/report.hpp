#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fermitheta {

inline constexpr int kReportSchemaVersion = 1;

struct Verdict {
  std::string name;
  bool passed;
  std::string bound;  // formula checked
  std::string note;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<Verdict> verdicts;
  double duration_ms = 0.0;

  void add_verdict(std::string name, bool passed, std::string bound, std::string note = {});
  bool all_passed() const;
  const Verdict* find(std::string_view name) const;

  nlohmann::ordered_json to_json() const;
  static ExperimentReport from_json(const nlohmann::ordered_json& j);
  // Flattened per-sample records; columns are the union of record keys.
  std::string records_csv() const;
};

// Checks the top-level field set and types; returns an empty string when valid.
std::string validate_report_json(const nlohmann::ordered_json& j);

// Write-temp-then-rename in the destination directory.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace fermitheta
