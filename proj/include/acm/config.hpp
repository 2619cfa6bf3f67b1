#pragma once

// Experiment configuration: a key = value text format with one canonical
// serialisation, and its git-style content hash.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "acm/dynamics.hpp"
#include "acm/spectra.hpp"

namespace acm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment_id = "default";
  DomainSpec domain{1.0, Boundary::periodic, 4};
  std::vector<double> eps{0.1};
  double delta = 0.5;
  double sobolev_s = -0.25;
  double radius_r = 5.0;
  double dt = 0.01;
  /// 0 selects 50 times the Eyring-Kramers prediction per eps.
  double t_max = 0.0;
  std::size_t paths = 200;
  std::size_t mc_samples = 20000;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  dynamics::Integrator integrator = dynamics::Integrator::exponential_euler;

  /// Re-checks every physical invariant; throws ConfigError.
  void validate() const;
  [[nodiscard]] dynamics::HitSets hit_sets() const { return {delta, sobolev_s, radius_r}; }

  bool operator==(const ExperimentConfig&) const = default;
};

/// Keys accepted by set_config_value, in serialisation order.
const std::vector<std::string>& config_keys();

/// Assigns one key from its textual value. Throws ConfigError on an unknown
/// key or a malformed value.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; '#' starts a comment. Validates the result.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text: every key in config_keys() order, shortest round-trip
/// number formatting.
std::string serialize_config(const ExperimentConfig& cfg);

/// SHA-1 of "blob <size>\0" + serialize_config(cfg), as lowercase hex.
std::string config_hash(const ExperimentConfig& cfg);

/// Git blob hash of arbitrary content.
std::string git_blob_hash(std::string_view content);

}  // namespace acm
