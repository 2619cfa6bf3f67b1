#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acm/checks.hpp"
#include "acm/config.hpp"
#include "acm/dynamics.hpp"
#include "acm/estimators.hpp"
#include "acm/report.hpp"
#include "acm/spectra.hpp"

namespace acm::cli {

namespace {

namespace est = acm::estimators;
using report::Quantity;
using report::ReportRecord;
using report::Table;

struct Artifacts {
  std::vector<ReportRecord> records;
  Table samples;
  std::optional<std::vector<dynamics::TrajectoryRow>> trajectory;
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

ReportRecord record(const ExperimentConfig& cfg, std::vector<std::pair<std::string, double>> params) {
  ReportRecord r;
  r.experiment_id = cfg.experiment_id;
  r.config_hash = config_hash(cfg);
  r.parameters = std::move(params);
  r.seeds = {cfg.seed};
  return r;
}

est::McConfig mc_config(const ExperimentConfig& cfg) { return {cfg.mc_samples, cfg.seed, ExecPolicy::parallel}; }

est::SetParams set_params(const ExperimentConfig& cfg) { return {cfg.delta, cfg.sobolev_s, cfg.radius_r}; }

Quantity log_quantity(const std::string& name, const est::LogEstimate& e) {
  Quantity q = Quantity::from_mc(name, e.factor);
  q.value = e.value();
  q.std_error = e.std_error();
  q.valid = e.valid() && std::isfinite(q.value);
  return q;
}

dynamics::SimConfig sim_config(const ExperimentConfig& cfg, double eps, double t_max) {
  dynamics::SimConfig s;
  s.eps = eps;
  s.dt = cfg.dt;
  s.t_max = t_max;
  s.seed = cfg.seed;
  s.integrator = cfg.integrator;
  return s;
}

double horizon(const ExperimentConfig& cfg, double ek_value) { return cfg.t_max > 0.0 ? cfg.t_max : 50.0 * ek_value; }

// ---------------------------------------------------------------------------

struct PrefactorOpts {
  bool limit = false;
  double tol = 1e-8;
  int cutoff = -1;
};

Artifacts cmd_prefactor(const ExperimentConfig& cfg, const PrefactorOpts& o) {
  Stopwatch sw;
  Artifacts a;
  const PrefactorResult p = o.limit ? ek_prefactor_limit(cfg.domain, o.tol)
                                    : ek_prefactor(cfg.domain, o.cutoff >= 0 ? o.cutoff : cfg.domain.N);
  auto r = record(cfg, {{"L", cfg.domain.L}, {"cutoff", double(p.cutoff)}, {"tol", o.limit ? o.tol : 0.0}});
  r.seeds.clear();
  r.quantities = {Quantity::exact("prefactor", p.prefactor), Quantity::exact("log_prefactor", p.log_prefactor),
                  Quantity::exact("tail_bound", p.tail_bound),
                  Quantity::exact("relative_error_bound", p.relative_error_bound),
                  Quantity::exact("cutoff", double(p.cutoff))};
  a.samples.columns = {"cutoff", "prefactor", "tail_bound", "log_raw_product", "log_det2"};
  for (int K = 1; K <= p.cutoff; K *= 2) {
    const auto pk = ek_prefactor(cfg.domain, K);
    const auto dk = det2_diagonal(cfg.domain, K);
    a.samples.rows.push_back({double(K), pk.prefactor, pk.tail_bound, dk.log_raw, dk.log_det2});
  }
  r.wall_clock_s = sw.seconds();
  a.records.push_back(std::move(r));
  return a;
}

Artifacts cmd_constants(const ExperimentConfig& cfg) {
  Stopwatch sw;
  Artifacts a;
  a.samples.columns = {"N", "C_N", "C_N_perp", "C_N_plus", "delta_C", "C_gamma_plus"};
  for (int N = 0; N <= cfg.domain.N; ++N) {
    DomainSpec s = cfg.domain;
    s.N = N;
    const auto c = renorm_constants(s);
    a.samples.rows.push_back({double(N), c.C_N, c.C_N_perp, c.C_N_plus, c.delta_C, c.C_gamma_plus});
  }
  const ModeTable t(cfg.domain);
  auto r = record(cfg, {{"L", cfg.domain.L}, {"N", double(cfg.domain.N)}});
  r.seeds.clear();
  r.quantities = {Quantity::exact("C_N", t.constants.C_N), Quantity::exact("C_N_perp", t.constants.C_N_perp),
                  Quantity::exact("C_N_plus", t.constants.C_N_plus), Quantity::exact("delta_C", t.constants.delta_C),
                  Quantity::exact("C_gamma_plus", t.constants.C_gamma_plus), Quantity::exact("lambda_0", t.lambda0()),
                  Quantity::exact("modes", double(t.lambda.size()))};
  r.wall_clock_s = sw.seconds();
  a.records.push_back(std::move(r));
  return a;
}

// Shared by simulate and theory-vs-sim.
struct SimOutcome {
  est::EkPrediction ek;
  dynamics::TransitionResult result;
};

SimOutcome simulate_eps(const ExperimentConfig& cfg, double eps) {
  SimOutcome o{est::ek_theory(cfg.domain, eps), {}};
  o.result = dynamics::sample_transition_times(cfg.domain, sim_config(cfg, eps, horizon(cfg, o.ek.value())),
                                               cfg.hit_sets(), cfg.paths);
  return o;
}

struct SimulateOpts {
  bool trajectory = false;
  int decimation = 10;
};

Artifacts cmd_simulate(const ExperimentConfig& cfg, const SimulateOpts& o) {
  Artifacts a;
  a.samples.columns = {"eps", "path", "tau", "censored", "n_steps"};
  for (double eps : cfg.eps) {
    Stopwatch sw;
    const auto s = simulate_eps(cfg, eps);
    auto r = record(cfg, {{"eps", eps}, {"N", double(cfg.domain.N)}, {"dt", cfg.dt},
                          {"t_max", horizon(cfg, s.ek.value())}, {"paths", double(cfg.paths)}});
    r.quantities = {Quantity::from_mc("mean_transition_time", s.result.estimate),
                    Quantity::exact("ek_theory", s.ek.value())};
    r.censored_fraction = s.result.censored_fraction;
    for (std::size_t i = 0; i < s.result.samples.size(); ++i) {
      const auto& p = s.result.samples[i];
      a.samples.rows.push_back({eps, double(i), p.tau, p.censored ? 1.0 : 0.0, double(p.n_steps)});
    }
    r.wall_clock_s = sw.seconds();
    a.records.push_back(std::move(r));
  }
  if (o.trajectory) {
    const double eps = cfg.eps.front();
    const auto ek = est::ek_theory(cfg.domain, eps);
    a.trajectory = dynamics::record_trajectory(cfg.domain, sim_config(cfg, eps, horizon(cfg, ek.value())),
                                               cfg.hit_sets(), 0, o.decimation);
  }
  return a;
}

Artifacts cmd_capacity(const ExperimentConfig& cfg) {
  Artifacts a;
  a.samples.columns = {"eps",           "gaussian_product", "upper", "upper_stderr", "upper_certified",
                       "lower_jensen",  "lower_jensen_stderr", "lower_direct", "lower_direct_stderr",
                       "prob_inside"};
  for (double eps : cfg.eps) {
    Stopwatch sw;
    const auto mc = mc_config(cfg);
    const auto up = est::capacity_upper_mc(cfg.domain, eps, cfg.delta, mc);
    const auto lj = est::capacity_lower_mc(cfg.domain, eps, set_params(cfg), mc, est::LowerRoute::jensen_bound);
    const auto ld = est::capacity_lower_mc(cfg.domain, eps, set_params(cfg), mc, est::LowerRoute::direct_quadrature);
    const double g = std::exp(est::log_gaussian_capacity(cfg.domain, eps));
    auto r = record(cfg, {{"eps", eps}, {"N", double(cfg.domain.N)}, {"delta", cfg.delta}, {"r", cfg.radius_r}});
    r.quantities = {Quantity::exact("gaussian_product", g),
                    log_quantity("capacity_upper", up.estimate),
                    log_quantity("capacity_upper_certified", up.bound()),
                    log_quantity("capacity_lower_jensen", lj.estimate),
                    log_quantity("capacity_lower_direct", ld.estimate),
                    Quantity::from_mc("prob_inside", lj.prob_inside),
                    Quantity::exact("implied_c", lj.implied_c)};
    a.samples.rows.push_back({eps, g, up.estimate.value(), up.estimate.std_error(), up.bound().value(),
                              lj.estimate.value(), lj.estimate.std_error(), ld.estimate.value(),
                              ld.estimate.std_error(), lj.prob_inside.value});
    r.wall_clock_s = sw.seconds();
    a.records.push_back(std::move(r));
  }
  return a;
}

Artifacts cmd_partition(const ExperimentConfig& cfg) {
  Artifacts a;
  a.samples.columns = {"eps", "half_Z_lower", "lower_stderr", "half_Z_direct", "direct_stderr",
                       "log_half_Z_bound", "log_half_Z_bound_2M", "M"};
  for (double eps : cfg.eps) {
    Stopwatch sw;
    const auto lo = est::partition_lower_mc(cfg.domain, eps, mc_config(cfg));
    est::PartitionUpperConfig pc;
    pc.mc = mc_config(cfg);
    const auto up = est::partition_upper(cfg.domain, eps, pc);
    auto r = record(cfg, {{"eps", eps}, {"N", double(cfg.domain.N)}});
    r.quantities = {log_quantity("half_partition_lower", lo.estimate), log_quantity("half_partition_direct", up.direct),
                    Quantity::exact("log_half_partition_bound", up.log_bound),
                    Quantity::exact("log_half_partition_bound_2M", up.log_bound_2M), Quantity::exact("M", up.M),
                    Quantity::exact("renorm_exponent", up.renorm_exponent),
                    Quantity::from_mc("prob_omega", lo.prob_omega)};
    a.samples.rows.push_back({eps, lo.estimate.value(), lo.estimate.std_error(), up.direct.value(),
                              up.direct.std_error(), up.log_bound, up.log_bound_2M, up.M});
    r.wall_clock_s = sw.seconds();
    a.records.push_back(std::move(r));
  }
  return a;
}

Artifacts cmd_theory_vs_sim(const ExperimentConfig& cfg) {
  Artifacts a;
  a.samples.columns = {"eps", "E_sim", "stderr", "E_theory", "ratio"};
  for (double eps : cfg.eps) {
    Stopwatch sw;
    const auto s = simulate_eps(cfg, eps);
    const auto& e = s.result.estimate;
    const double ratio = e.value / s.ek.value();
    auto r = record(cfg, {{"eps", eps}, {"N", double(cfg.domain.N)}, {"dt", cfg.dt},
                          {"t_max", horizon(cfg, s.ek.value())}, {"paths", double(cfg.paths)}});
    Quantity rq = Quantity::exact("ratio", ratio);
    rq.std_error = e.std_error / s.ek.value();
    rq.valid = e.valid && std::isfinite(ratio);
    r.quantities = {Quantity::from_mc("E_sim", e), Quantity::exact("E_theory", s.ek.value()),
                    Quantity::exact("prefactor", s.ek.prefactor), Quantity::exact("barrier", s.ek.barrier), rq};
    r.censored_fraction = s.result.censored_fraction;
    a.samples.rows.push_back({eps, e.value, e.std_error, s.ek.value(), ratio});
    r.wall_clock_s = sw.seconds();
    a.records.push_back(std::move(r));
  }
  return a;
}

struct OracleOpts {
  int points = 41;
};

Artifacts cmd_oracle1d(const ExperimentConfig& cfg, const OracleOpts& o) {
  Artifacts a;
  a.samples.columns = {"eps", "z", "committor"};
  for (double eps : cfg.eps) {
    Stopwatch sw;
    const est::Oracle1d orc(cfg.domain.L, eps, cfg.delta);
    auto r = record(cfg, {{"eps", eps}, {"L", cfg.domain.L}, {"delta", cfg.delta}});
    r.seeds.clear();
    r.quantities = {Quantity::exact("capacity", orc.capacity()),
                    Quantity::exact("half_partition", orc.half_partition()),
                    Quantity::exact("expected_time", orc.expected_time()),
                    Quantity::exact("mfpt_from_minus_L", orc.mfpt_from(-cfg.domain.L)),
                    Quantity::exact("kramers", orc.kramers())};
    const double z_lo = -orc.rho_L();
    for (int i = 0; i < o.points; ++i) {
      const double z = z_lo + 2.0 * orc.rho_L() * i / (o.points - 1);
      a.samples.rows.push_back({eps, z, orc.committor(z)});
    }
    r.wall_clock_s = sw.seconds();
    a.records.push_back(std::move(r));
  }
  return a;
}

struct SelftestOpts {
  bool full = false;
  std::vector<int> only;
};

Artifacts cmd_selftest(const ExperimentConfig& cfg, const SelftestOpts& o, std::ostream& out, bool& all_passed) {
  Artifacts a;
  a.samples.columns = {"id", "passed", "seconds", "budget_s"};
  std::vector<int> ids = o.only;
  if (ids.empty()) {
    for (const auto& c : checks::catalogue())
      if (o.full || c.id == 1 || c.id == 2 || c.id == 4) ids.push_back(c.id);
  }
  all_passed = true;
  for (int id : ids) {
    const auto res = checks::run_check(id);
    out << checks::format_result(res) << std::endl;
    all_passed = all_passed && res.passed();
    auto r = record(cfg, {{"check", double(id)}});
    r.seeds.clear();
    r.quantities = {Quantity::exact("passed", res.passed() ? 1.0 : 0.0), Quantity::exact("seconds", res.seconds)};
    r.wall_clock_s = res.seconds;
    a.records.push_back(std::move(r));
    a.samples.rows.push_back({double(id), res.passed() ? 1.0 : 0.0, res.seconds, res.budget_s});
  }
  return a;
}

void print_records(std::ostream& out, const std::vector<ReportRecord>& records) {
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.parameters.size(); ++i)
      out << (i ? " " : "") << r.parameters[i].first << '=' << report::format_number(r.parameters[i].second);
    out << '\n';
    for (const auto& q : r.quantities) {
      out << "  " << q.name << " = " << report::format_number(q.value);
      if (q.std_error > 0.0) out << " +- " << report::format_number(q.std_error);
      if (!q.valid) out << " (invalid)";
      out << '\n';
    }
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renormalised stochastic Allen-Cahn metastability toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  std::map<std::string, std::string> overrides;
  for (const auto& key : config_keys()) app.add_option("--" + key, overrides[key], "override config key '" + key + "'");

  PrefactorOpts pre;
  auto* c_pre = app.add_subcommand("prefactor", "regularised Eyring-Kramers prefactor");
  c_pre->add_flag("--limit", pre.limit, "double the cutoff until the tail bound is below --tol");
  c_pre->add_option("--tol", pre.tol, "tail-bound tolerance for --limit");
  c_pre->add_option("--cutoff", pre.cutoff, "product cutoff (default: N)");

  app.add_subcommand("constants", "renormalisation constants for N = 0..N");

  SimulateOpts simo;
  auto* c_sim = app.add_subcommand("simulate", "transition times from phi = -1 to B");
  c_sim->add_flag("--trajectory", simo.trajectory, "also record path 0 of the first eps");
  c_sim->add_option("--decimation", simo.decimation, "steps between trajectory rows")->check(CLI::PositiveNumber);

  app.add_subcommand("capacity", "capacity upper and lower estimators");
  app.add_subcommand("partition", "partition-function estimators");
  app.add_subcommand("theory-vs-sim", "simulated mean transition time against the Eyring-Kramers formula");

  OracleOpts orc;
  auto* c_orc = app.add_subcommand("oracle1d", "exact single-mode quadratures and committor table");
  c_orc->add_option("--points", orc.points, "committor table size")->check(CLI::Range(2, 100000));

  SelftestOpts st;
  auto* c_st = app.add_subcommand("selftest", "acceptance checks (quick subset 1, 2, 4 by default)");
  c_st->add_flag("--full", st.full, "run all eight checks");
  c_st->add_option("--only", st.only, "run only these check ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << report::error_json("usage", e.what());
    return kExitConfigError;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& key : config_keys())
      if (app.count("--" + key) > 0) set_config_value(cfg, key, overrides[key]);
    cfg.validate();
  } catch (const ConfigError& e) {
    err << report::error_json("config", e.what());
    return kExitConfigError;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Artifacts a;
  bool selftest_passed = true;
  try {
    if (cmd == "prefactor") a = cmd_prefactor(cfg, pre);
    else if (cmd == "constants") a = cmd_constants(cfg);
    else if (cmd == "simulate") a = cmd_simulate(cfg, simo);
    else if (cmd == "capacity") a = cmd_capacity(cfg);
    else if (cmd == "partition") a = cmd_partition(cfg);
    else if (cmd == "theory-vs-sim") a = cmd_theory_vs_sim(cfg);
    else if (cmd == "oracle1d") a = cmd_oracle1d(cfg, orc);
    else a = cmd_selftest(cfg, st, out, selftest_passed);
  } catch (const DomainError& e) {
    err << report::error_json("domain", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << report::error_json("runtime", e.what());
    return kExitFailure;
  }

  try {
    report::emit_report(cfg.output_dir, a.records, a.samples, a.trajectory);
  } catch (const std::exception& e) {
    err << report::error_json("io", e.what());
    return kExitFailure;
  }
  if (cmd != "selftest") print_records(out, a.records);
  out << "wrote " << (std::filesystem::path(cfg.output_dir) / "summary.json").string() << '\n';

  std::string invalid;
  for (const auto& r : a.records)
    for (const auto& q : r.quantities)
      if (!q.valid) invalid += (invalid.empty() ? "" : ", ") + q.name;
  if (!invalid.empty()) {
    err << report::error_json("invalid_estimate", "invalid estimates: " + invalid);
    return kExitInvalidEstimate;
  }
  return selftest_passed ? kExitOk : kExitFailure;
}

}  // namespace acm::cli
