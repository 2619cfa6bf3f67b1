#include "acm/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace acm {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("key '" + std::string(key) + "': not a finite number: '" + std::string(v) + "'");
  }
  return out;
}

template <class T>
T parse_unsigned(std::string_view key, std::string_view v) {
  T out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
    throw ConfigError("key '" + std::string(key) + "': not a nonnegative integer: '" + std::string(v) + "'");
  }
  return out;
}

std::string fmt(double x) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), r.ptr);
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    domain.validate();
    hit_sets().validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (experiment_id.empty()) throw ConfigError("experiment_id must not be empty");
  if (eps.empty()) throw ConfigError("eps list must not be empty");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("every eps must lie in (0, 1)");
  }
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (integrator == dynamics::Integrator::euler_maruyama) {
    const double c = domain.wave_scale();
    const double lmax = c * c * 2.0 * domain.N * domain.N - 1.0;
    if (dt * lmax > 2.0) throw ConfigError("euler-maruyama unstable: dt * max lambda > 2");
  }
  if (!(t_max >= 0.0)) throw ConfigError("t_max must be nonnegative (0 = automatic)");
  if (paths == 0) throw ConfigError("paths must be positive");
  if (mc_samples < 100) throw ConfigError("mc_samples must be at least 100");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "experiment_id", "L",  "bc",    "N",     "eps",        "delta",   "sobolev_s", "radius_r",
      "dt",            "t_max", "paths", "mc_samples", "seed", "output_dir", "integrator"};
  return keys;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "experiment_id") {
    cfg.experiment_id = std::string(value);
  } else if (key == "L") {
    cfg.domain.L = parse_double(key, value);
  } else if (key == "bc") {
    try {
      cfg.domain.bc = boundary_from_string(std::string(value));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "N") {
    cfg.domain.N = parse_unsigned<int>(key, value);
  } else if (key == "eps") {
    cfg.eps.clear();
    std::size_t pos = 0;
    while (pos <= value.size()) {
      const auto comma = value.find(',', pos);
      const auto item = trim(value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos));
      if (item.empty()) throw ConfigError("key 'eps': empty list entry");
      cfg.eps.push_back(parse_double(key, item));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  } else if (key == "delta") {
    cfg.delta = parse_double(key, value);
  } else if (key == "sobolev_s") {
    cfg.sobolev_s = parse_double(key, value);
  } else if (key == "radius_r") {
    cfg.radius_r = parse_double(key, value);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, value);
  } else if (key == "t_max") {
    cfg.t_max = parse_double(key, value);
  } else if (key == "paths") {
    cfg.paths = parse_unsigned<std::size_t>(key, value);
  } else if (key == "mc_samples") {
    cfg.mc_samples = parse_unsigned<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(value);
  } else if (key == "integrator") {
    try {
      cfg.integrator = dynamics::integrator_from_string(std::string(value));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    try {
      set_config_value(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment_id = " << cfg.experiment_id << '\n';
  os << "L = " << fmt(cfg.domain.L) << '\n';
  os << "bc = " << to_string(cfg.domain.bc) << '\n';
  os << "N = " << cfg.domain.N << '\n';
  os << "eps = ";
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) os << (i ? "," : "") << fmt(cfg.eps[i]);
  os << '\n';
  os << "delta = " << fmt(cfg.delta) << '\n';
  os << "sobolev_s = " << fmt(cfg.sobolev_s) << '\n';
  os << "radius_r = " << fmt(cfg.radius_r) << '\n';
  os << "dt = " << fmt(cfg.dt) << '\n';
  os << "t_max = " << fmt(cfg.t_max) << '\n';
  os << "paths = " << cfg.paths << '\n';
  os << "mc_samples = " << cfg.mc_samples << '\n';
  os << "seed = " << cfg.seed << '\n';
  os << "output_dir = " << cfg.output_dir << '\n';
  os << "integrator = " << dynamics::to_string(cfg.integrator) << '\n';
  return os.str();
}

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("cannot allocate digest context");
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) { return git_blob_hash(serialize_config(cfg)); }

}  // namespace acm
