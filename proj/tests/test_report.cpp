#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "acm/report.hpp"

using namespace acm;
namespace rep = acm::report;

TEST_CASE("number formatting") {
  CHECK(rep::format_number(0.1) == "0.1");
  CHECK(rep::format_number(1e-20) == "1e-20");
  CHECK(rep::format_number(2.0) == "2");
  CHECK(rep::format_number(NAN) == "nan");
  CHECK(rep::format_number(INFINITY) == "inf");
  CHECK(rep::format_number(-INFINITY) == "-inf");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(rep::format_number(x)) == x);
}

TEST_CASE("csv output") {
  std::ostringstream os;
  rep::write_csv(os, {{"a", "b"}, {{1.0, 0.5}, {2.0, NAN}}});
  CHECK(os.str() == "a,b\n1,0.5\n2,nan\n");
}

TEST_CASE("empty summary is valid JSON") {
  const auto j = nlohmann::json::parse(rep::summary_json({}));
  CHECK(j["schema_version"] == rep::kSchemaVersion);
  CHECK(j["records"].empty());
}

TEST_CASE("records and quantities") {
  McEstimate e;
  e.value = 3.0;
  e.std_error = 0.1;
  e.n = 100;
  e.seed = 7;
  rep::ReportRecord r;
  r.experiment_id = "x";
  r.config_hash = "abc";
  r.parameters = {{"eps", 0.1}, {"N", 4}};
  r.quantities = {rep::Quantity::exact("prefactor", 20.0), rep::Quantity::from_mc("E_sim", e)};
  r.seeds = {7};
  CHECK(r.valid());
  REQUIRE(r.find("E_sim") != nullptr);
  CHECK(r.find("E_sim")->n_samples == 100);
  CHECK(r.find("missing") == nullptr);
  const auto j = nlohmann::json::parse(rep::summary_json({r}));
  const auto& rec = j["records"][0];
  CHECK(rec["experiment_id"] == "x");
  CHECK(rec["parameters"]["eps"] == 0.1);
  CHECK(rec["quantities"][1]["std_error"] == 0.1);
  CHECK(rec["valid"] == true);

  r.quantities.push_back(rep::Quantity::exact("bad", NAN));
  r.quantities.back().valid = false;
  CHECK_FALSE(r.valid());
  const auto j2 = nlohmann::json::parse(rep::summary_json({r}));
  CHECK(j2["records"][0]["quantities"][2]["value"] == "nan");
  CHECK(j2["records"][0]["valid"] == false);
}

TEST_CASE("error record") {
  const auto j = nlohmann::json::parse(rep::error_json("config", "bad \"key\""));
  CHECK(j.dump().find("config") != std::string::npos);
  CHECK(j.dump().find("bad \\\"key\\\"") != std::string::npos);
}

TEST_CASE("artifacts on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "acm_test_report";
  std::filesystem::remove_all(dir);
  rep::emit_report(dir, {}, {{"a"}, {{1.0}}}, std::vector<dynamics::TrajectoryRow>{{0.0, -1.0, 0.0, -0.25}});
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "trajectory.csv"));
  std::ifstream is(dir / "samples.csv");
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == "a\n1\n");
  std::filesystem::remove_all(dir);
  rep::emit_report(dir, {}, {{"a"}, {}});
  CHECK_FALSE(std::filesystem::exists(dir / "trajectory.csv"));
  std::filesystem::remove_all(dir);
}
