#pragma once

// Result records and their on-disk form: summary.json, samples.csv and an
// optional trajectory.csv.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "acm/dynamics.hpp"
#include "acm/gff.hpp"

namespace acm::report {

inline constexpr int kSchemaVersion = 1;

struct Quantity {
  std::string name;
  double value = 0.0;
  /// 0 for deterministic quantities.
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  bool valid = true;

  static Quantity exact(std::string name, double value);
  static Quantity from_mc(std::string name, const McEstimate& e);
};

struct ReportRecord {
  std::string experiment_id;
  std::string config_hash;
  /// Parameters the record was computed at (eps, N, cutoff, ...), in insertion order.
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<Quantity> quantities;
  std::vector<std::uint64_t> seeds;
  double wall_clock_s = 0.0;
  double censored_fraction = 0.0;

  [[nodiscard]] bool valid() const;
  [[nodiscard]] const Quantity* find(const std::string& name) const;
};

/// Numeric table written as CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& t);

/// {"schema_version": 1, "records": [...]} with fixed key order.
std::string summary_json(const std::vector<ReportRecord>& records);

/// Machine-readable error record for a failed run.
std::string error_json(const std::string& kind, const std::string& message);

/// Writes summary.json and samples.csv (and trajectory.csv when given) into
/// `dir`, creating it. Throws std::runtime_error on any I/O failure.
void emit_report(const std::filesystem::path& dir, const std::vector<ReportRecord>& records,
                 const Table& samples, const std::optional<std::vector<dynamics::TrajectoryRow>>& trajectory = {});

}  // namespace acm::report
