#include "fermitheta/report.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fermitheta/errors.hpp"

namespace fermitheta {

void ExperimentReport::add_verdict(std::string name, bool passed, std::string bound, std::string note) {
  verdicts.push_back({std::move(name), passed, std::move(bound), std::move(note)});
}

bool ExperimentReport::all_passed() const {
  for (const auto& v : verdicts) {
    if (!v.passed) return false;
  }
  return true;
}

const Verdict* ExperimentReport::find(std::string_view name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = experiment;
  j["params"] = params;
  j["seed"] = seed;
  j["records"] = records;
  j["summary"] = summary;
  auto vs = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    vs.push_back({{"name", v.name}, {"passed", v.passed}, {"bound", v.bound}, {"note", v.note}});
  }
  j["verdicts"] = std::move(vs);
  j["duration_ms"] = duration_ms;
  return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::ordered_json& j) {
  if (const auto err = validate_report_json(j); !err.empty()) throw InputError("invalid report: " + err);
  ExperimentReport r;
  r.experiment = j["experiment"].get<std::string>();
  r.params = j["params"];
  r.seed = j["seed"].get<std::uint64_t>();
  r.records = j["records"];
  r.summary = j["summary"];
  for (const auto& v : j["verdicts"]) {
    r.verdicts.push_back({v["name"].get<std::string>(), v["passed"].get<bool>(), v["bound"].get<std::string>(),
                          v["note"].get<std::string>()});
  }
  r.duration_ms = j["duration_ms"].get<double>();
  return r;
}

std::string validate_report_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) return "report is not an object";
  static const char* kFields[] = {"schema_version", "experiment", "params", "seed",
                                  "records",        "summary",    "verdicts", "duration_ms"};
  for (const char* f : kFields) {
    if (!j.contains(f)) return std::string("missing field ") + f;
  }
  if (j["schema_version"] != kReportSchemaVersion) return "unsupported schema_version";
  if (!j["experiment"].is_string()) return "experiment must be a string";
  if (!j["params"].is_object()) return "params must be an object";
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) return "seed must be an integer";
  if (!j["records"].is_array()) return "records must be an array";
  if (!j["summary"].is_object()) return "summary must be an object";
  if (!j["verdicts"].is_array()) return "verdicts must be an array";
  for (const auto& v : j["verdicts"]) {
    if (!v.is_object() || !v.contains("name") || !v.contains("passed") || !v.contains("bound") || !v.contains("note")) {
      return "verdict entries need name, passed, bound, note";
    }
    if (!v["passed"].is_boolean()) return "verdict passed must be boolean";
  }
  if (!j["duration_ms"].is_number()) return "duration_ms must be a number";
  return {};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string ExperimentReport::records_csv() const {
  std::vector<std::string> columns;
  std::set<std::string> seen;
  for (const auto& rec : records) {
    if (!rec.is_object()) continue;
    for (auto it = rec.begin(); it != rec.end(); ++it) {
      if (seen.insert(it.key()).second) columns.push_back(it.key());
    }
  }
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& rec : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      if (!rec.contains(columns[c])) continue;
      const auto& v = rec[columns[c]];
      os << csv_field(v.is_string() ? v.get<std::string>() : v.dump());
    }
    os << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fermitheta
