#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "acm/config.hpp"

using namespace acm;

TEST_CASE("defaults serialise and parse back unchanged") {
  const ExperimentConfig def;
  CHECK(parse_config(serialize_config(def)) == def);
  const auto text = serialize_config(def);
  CHECK(text.find("L = 1\n") != std::string::npos);
  CHECK(text.find("bc = periodic\n") != std::string::npos);
  CHECK(text.find("integrator = exponential-euler\n") != std::string::npos);
}

TEST_CASE("every key serialises in order") {
  const auto text = serialize_config(ExperimentConfig{});
  std::size_t pos = 0;
  for (const auto& key : config_keys()) {
    const auto p = text.find(key + " = ", pos);
    REQUIRE(p != std::string::npos);
    pos = p;
  }
  CHECK(config_keys().size() == 15);
}

TEST_CASE("parsing with comments, spacing and lists") {
  const auto cfg = parse_config(
      "# sweep\n"
      "experiment_id = sweep-a\n"
      "  N=6   # cutoff\n"
      "eps = 0.12, 0.08,0.05\n"
      "L = 2.5\n"
      "\n"
      "integrator = euler-maruyama\n"
      "dt = 0.0001\n");
  CHECK(cfg.experiment_id == "sweep-a");
  CHECK(cfg.domain.N == 6);
  CHECK(cfg.domain.L == 2.5);
  CHECK(cfg.eps == std::vector<double>{0.12, 0.08, 0.05});
  CHECK(cfg.integrator == dynamics::Integrator::euler_maruyama);
  CHECK(parse_config(serialize_config(cfg)) == cfg);
}

TEST_CASE("shortest round-trip numbers survive serialisation") {
  ExperimentConfig cfg;
  cfg.eps = {0.1 + 0.2, 1.0 / 3.0};
  cfg.domain.L = 6.283;
  cfg.seed = 18446744073709551615ull;
  const auto back = parse_config(serialize_config(cfg));
  CHECK(back.eps == cfg.eps);
  CHECK(back.seed == cfg.seed);
  CHECK(back == cfg);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N = four\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("L = 7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("bc = neumann\nL = 3.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("eps = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("delta = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("sobolev_s = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("integrator = euler-maruyama\nN = 8\ndt = 0.01\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("paths = 0\n"), ConfigError);
  try {
    parse_config("N = 2\nfoo = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("git blob hashes") {
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  const ExperimentConfig cfg;
  CHECK(config_hash(cfg) == git_blob_hash(serialize_config(cfg)));
  ExperimentConfig other = cfg;
  other.seed = 2;
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "acm_test_config.cfg";
  {
    std::ofstream os(path);
    os << "N = 3\nseed = 9\n";
  }
  const auto cfg = load_config(path);
  CHECK(cfg.domain.N == 3);
  CHECK(cfg.seed == 9);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}
