#include "acm/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <json.hpp>
#include <stdexcept>

namespace acm::report {

namespace {

using json = nlohmann::ordered_json;

json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

Quantity Quantity::exact(std::string name, double value) {
  Quantity q;
  q.name = std::move(name);
  q.value = value;
  q.valid = std::isfinite(value);
  return q;
}

Quantity Quantity::from_mc(std::string name, const McEstimate& e) {
  Quantity q;
  q.name = std::move(name);
  q.value = e.value;
  q.std_error = e.std_error;
  q.n_samples = e.n;
  q.seed = e.seed;
  q.valid = e.valid && std::isfinite(e.value);
  return q;
}

bool ReportRecord::valid() const {
  for (const auto& q : quantities)
    if (!q.valid) return false;
  return true;
}

const Quantity* ReportRecord::find(const std::string& name) const {
  for (const auto& q : quantities)
    if (q.name == name) return &q;
  return nullptr;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), r.ptr);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
  os << '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw std::runtime_error("CSV row width does not match the header");
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_number(row[j]);
    os << '\n';
  }
}

std::string summary_json(const std::vector<ReportRecord>& records) {
  json root;
  root["schema_version"] = kSchemaVersion;
  json arr = json::array();
  for (const auto& r : records) {
    json rec;
    rec["experiment_id"] = r.experiment_id;
    rec["config_hash"] = r.config_hash;
    json params = json::object();
    for (const auto& [k, v] : r.parameters) params[k] = number(v);
    rec["parameters"] = params;
    json qs = json::array();
    for (const auto& q : r.quantities) {
      json jq;
      jq["name"] = q.name;
      jq["value"] = number(q.value);
      jq["std_error"] = number(q.std_error);
      jq["n_samples"] = q.n_samples;
      jq["seed"] = q.seed;
      jq["valid"] = q.valid;
      qs.push_back(jq);
    }
    rec["quantities"] = qs;
    rec["seeds"] = r.seeds;
    rec["censored_fraction"] = number(r.censored_fraction);
    rec["wall_clock_s"] = number(r.wall_clock_s);
    rec["valid"] = r.valid();
    arr.push_back(rec);
  }
  root["records"] = arr;
  return root.dump(2) + "\n";
}

std::string error_json(const std::string& kind, const std::string& message) {
  json root;
  root["schema_version"] = kSchemaVersion;
  root["error"] = {{"kind", kind}, {"message", message}};
  return root.dump(2) + "\n";
}

void emit_report(const std::filesystem::path& dir, const std::vector<ReportRecord>& records, const Table& samples,
                 const std::optional<std::vector<dynamics::TrajectoryRow>>& trajectory) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "summary.json", summary_json(records));
  std::ostringstream csv;
  write_csv(csv, samples);
  write_file(dir / "samples.csv", csv.str());
  if (trajectory) {
    std::ostringstream tr;
    dynamics::write_trajectory_csv(tr, *trajectory);
    write_file(dir / "trajectory.csv", tr.str());
  }
}

}  // namespace acm::report
