#include "acm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>

#include "acm/numeric.hpp"
#include "acm/potential.hpp"

namespace acm::dynamics {

std::string to_string(Integrator i) {
  return i == Integrator::exponential_euler ? "exponential-euler" : "euler-maruyama";
}

Integrator integrator_from_string(const std::string& s) {
  if (s == "exponential-euler") return Integrator::exponential_euler;
  if (s == "euler-maruyama") return Integrator::euler_maruyama;
  throw DomainError("unknown integrator '" + s + "'");
}

void SimConfig::validate(const ModeTable& table) const {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(t_max > 0.0)) throw DomainError("censoring horizon must be positive");
  if (!(eps >= 0.0) || eps > potential::kEpsMax) throw DomainError("eps outside admissible range");
  if (integrator == Integrator::euler_maruyama) {
    const double lmax = *std::max_element(table.lambda.begin(), table.lambda.end());
    if (dt * lmax > 2.0) throw DomainError("Euler-Maruyama step unstable: dt * max lambda > 2");
  }
}

double HitSets::radius(double eps) const {
  if (eps <= 0.0) return 0.0;
  return r * std::sqrt(eps * std::log(1.0 / eps));
}

void HitSets::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(s < 0.0)) throw DomainError("Sobolev order s must be negative");
  if (!(r > 0.0)) throw DomainError("radius constant r must be positive");
}

MembershipTest::MembershipTest(const DomainSpec& spec, const HitSets& h, double eps)
    : h_(h), weights_(SobolevParams{h.s}.weights(spec)), radius_(h.radius(eps)) {
  h_.validate();
  weights_[ModeLayout(spec.N).zero_index()] = 0.0;
}

double MembershipTest::fluct_norm(const FieldCoeffs& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.z.size(); ++i) s += weights_[i] * std::norm(f.z[i]);
  return std::sqrt(s);
}

Membership MembershipTest::operator()(const FieldCoeffs& f) const {
  const double m = f.mean();
  Membership out;
  const bool near_minus = m >= -1.0 - h_.delta && m <= -1.0 + h_.delta;
  const bool near_plus = m >= 1.0 - h_.delta && m <= 1.0 + h_.delta;
  if (!near_minus && !near_plus) return out;
  const bool small = fluct_norm(f) <= radius_;
  out.in_A = near_minus && small;
  out.in_B = near_plus && small;
  return out;
}

Membership membership(const FieldCoeffs& f, const HitSets& h, double eps) {
  return MembershipTest(f.spec, h, eps)(f);
}

Stepper::Stepper(const DomainSpec& spec, const SimConfig& cfg)
    : table_(spec), cfg_(cfg), grid_(spec, cfg.resolution), cubic_(spec) {
  cfg_.validate(table_);
  const std::size_t n = table_.lambda.size();
  lin_.resize(n);
  force_.resize(n);
  noise_.resize(n);
  const double eps = cfg_.eps;
  const double dt = cfg_.dt;
  const std::size_t zero = table_.layout.zero_index();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -table_.lambda[i] + 3.0 * eps * table_.constants.C_N;
    // Variance of one real coordinate (z_0, or sqrt(2) Re z_k, sqrt(2) Im z_k).
    double var_coord = 0.0;
    if (cfg_.integrator == Integrator::exponential_euler) {
      lin_[i] = std::exp(a * dt);
      force_[i] = dt * expm1_over_x(a * dt);
      var_coord = 2.0 * eps * dt * expm1_over_x(2.0 * a * dt);
    } else {
      lin_[i] = 1.0 + a * dt;
      force_[i] = dt;
      var_coord = 2.0 * eps * dt;
    }
    noise_[i] = i == zero ? std::sqrt(var_coord) : std::sqrt(0.5 * var_coord);
  }
}

void Stepper::advance(FieldCoeffs& state, RandomStream& rng) {
  if (!cfg_.linear_only) {
    grid_.cubic_projected(state, cubic_);
  } else {
    std::fill(cubic_.z.begin(), cubic_.z.end(), cplx{});
  }
  const double sign = cfg_.negate_noise ? -1.0 : 1.0;
  const std::size_t zero = table_.layout.zero_index();
  bool finite = true;
  for (std::size_t i : table_.layout.independent_modes()) {
    if (i == zero) {
      const double g = cfg_.eps > 0.0 ? rng.normal() : 0.0;
      const double v = lin_[i] * state.z[i].real() - force_[i] * cubic_.z[i].real() + sign * noise_[i] * g;
      state.z[i] = {v, 0.0};
      finite = finite && std::isfinite(v);
      continue;
    }
    double ga = 0.0, gb = 0.0;
    if (cfg_.eps > 0.0) {
      ga = rng.normal();
      gb = rng.normal();
    }
    const cplx v = lin_[i] * state.z[i] - force_[i] * cubic_.z[i] + sign * noise_[i] * cplx{ga, gb};
    state.z[i] = v;
    state[-table_.layout.mode(i)] = std::conj(v);
    finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
  }
  if (!finite) throw StepError("non-finite state encountered: integration blew up");
}

FieldCoeffs step(const FieldCoeffs& state, const SimConfig& cfg, RandomStream& rng) {
  Stepper s(state.spec, cfg);
  FieldCoeffs out = state;
  s.advance(out, rng);
  return out;
}

namespace {

FieldCoeffs default_start(const DomainSpec& spec) { return FieldCoeffs::constant(spec, -1.0); }

bool reached(const Membership& m, Target t) { return t == Target::B ? m.in_B : m.in_A; }

TransitionSample run_path(Stepper& stepper, const MembershipTest& test, const SimConfig& cfg,
                          const FieldCoeffs& start, Target target, std::uint64_t path_id) {
  RandomStream rng(cfg.seed, path_id);
  FieldCoeffs state = start;
  TransitionSample s;
  const auto max_steps = static_cast<std::uint64_t>(std::ceil(cfg.t_max / cfg.dt));
  while (s.n_steps < max_steps) {
    stepper.advance(state, rng);
    ++s.n_steps;
    if (reached(test(state), target)) {
      s.tau = static_cast<double>(s.n_steps) * cfg.dt;
      return s;
    }
  }
  s.censored = true;
  s.tau = cfg.t_max;
  return s;
}

}  // namespace

TransitionResult sample_transition_times(const DomainSpec& spec, const SimConfig& cfg, const HitSets& h,
                                         std::size_t n_paths, const std::optional<FieldCoeffs>& start,
                                         Target target, ExecPolicy policy) {
  h.validate();
  if (n_paths == 0) throw DomainError("need at least one path");
  const FieldCoeffs init = start ? *start : default_start(spec);
  if (init.spec.N != spec.N) throw DomainError("start field does not match the domain");
  TransitionResult res;
  res.samples.resize(n_paths);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&](Stepper& st, const MembershipTest& test, std::size_t i) {
    try {
      res.samples[i] = run_path(st, test, cfg, init, target, i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (policy == ExecPolicy::serial) {
    Stepper st(spec, cfg);
    const MembershipTest test(spec, h, cfg.eps);
    for (std::size_t i = 0; i < n_paths; ++i) worker(st, test, i);
  } else {
#pragma omp parallel
    {
      Stepper st(spec, cfg);
      const MembershipTest test(spec, h, cfg.eps);
#pragma omp for schedule(dynamic, 1)
      for (std::size_t i = 0; i < n_paths; ++i) worker(st, test, i);
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> taus;
  taus.reserve(n_paths);
  for (const auto& s : res.samples) {
    if (s.censored) {
      ++res.n_censored;
    } else {
      taus.push_back(s.tau);
    }
  }
  res.censored_fraction = static_cast<double>(res.n_censored) / static_cast<double>(n_paths);
  if (taus.empty()) throw std::runtime_error("all paths censored before reaching the target set");
  res.estimate = reduce_samples(taus, cfg.seed);
  res.estimate.valid = res.estimate.valid && res.censored_fraction < 0.01;
  return res;
}

std::vector<TrajectoryRow> record_trajectory(const DomainSpec& spec, const SimConfig& cfg, const HitSets& h,
                                             std::uint64_t path_id, int decimation,
                                             const std::optional<FieldCoeffs>& start, Target target) {
  if (decimation < 1) throw DomainError("decimation must be positive");
  Stepper st(spec, cfg);
  const MembershipTest test(spec, h, cfg.eps);
  potential::Evaluator ev(spec);
  FieldCoeffs state = start ? *start : default_start(spec);
  RandomStream rng(cfg.seed, path_id);
  std::vector<TrajectoryRow> rows;
  const auto record = [&](std::uint64_t n) {
    rows.push_back({static_cast<double>(n) * cfg.dt, state.mean(), test.fluct_norm(state),
                    ev.value(state, cfg.eps)});
  };
  record(0);
  const auto max_steps = static_cast<std::uint64_t>(std::ceil(cfg.t_max / cfg.dt));
  for (std::uint64_t n = 1; n <= max_steps; ++n) {
    st.advance(state, rng);
    const bool hit = reached(test(state), target);
    if (n % static_cast<std::uint64_t>(decimation) == 0 || hit) record(n);
    if (hit) break;
  }
  return rows;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  os << "t,mean,hs_norm,energy\n";
  os << std::setprecision(17);
  for (const auto& r : rows) os << r.t << ',' << r.mean << ',' << r.fluct_norm << ',' << r.energy << '\n';
}

}  // namespace acm::dynamics
