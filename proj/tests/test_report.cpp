#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "fermitheta/errors.hpp"
#include "fermitheta/report.hpp"

using namespace fermitheta;

TEST_CASE("report JSON round trip") {
  ExperimentReport r;
  r.experiment = "demo";
  r.seed = 7;
  r.params = {{"n", 4}};
  r.records.push_back({{"sample", 0}, {"x", 1.5}, {"v", {1, 2}}});
  r.records.push_back({{"sample", 1}, {"x", 2.5}});
  r.summary = {{"mean", 2.0}};
  r.add_verdict("ok", true, "x <= 3");
  r.add_verdict("bad", false, "x <= 2", "x = 2.5");
  const auto j = r.to_json();
  CHECK(validate_report_json(j).empty());
  CHECK(j["schema_version"] == kReportSchemaVersion);
  const auto back = ExperimentReport::from_json(nlohmann::ordered_json::parse(j.dump()));
  CHECK(back.to_json() == j);
  CHECK_FALSE(back.all_passed());
  REQUIRE(back.find("bad") != nullptr);
  CHECK(back.find("bad")->note == "x = 2.5");
  CHECK(back.find("missing") == nullptr);

  auto broken = j;
  broken.erase("verdicts");
  CHECK_FALSE(validate_report_json(broken).empty());
  CHECK_THROWS_AS(ExperimentReport::from_json(broken), InputError);
}

TEST_CASE("records CSV") {
  ExperimentReport r;
  r.records.push_back({{"a", 1}, {"b", "x,y"}});
  r.records.push_back({{"a", 2}, {"c", {1, 2}}});
  CHECK(r.records_csv() == "a,b,c\n1,\"x,y\",\n2,,\"[1,2]\"\n");
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "fermitheta_report_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(s == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}
