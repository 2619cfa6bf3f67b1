#include "acm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "acm/field.hpp"
#include "acm/numeric.hpp"
#include "acm/potential.hpp"

namespace acm::estimators {

namespace {

using boost::math::quadrature::gauss_kronrod;

void check_eps(double eps) {
  if (!(eps > 0.0) || eps > potential::kEpsMax) throw DomainError("noise strength eps outside (0, 1]");
}

void check_samples(const McConfig& mc) {
  if (mc.n_samples < 100) throw DomainError("Monte-Carlo run needs at least 100 samples");
}

McOptions options(const McConfig& mc, bool antithetic = false) {
  McOptions o;
  o.policy = mc.policy;
  o.antithetic = antithetic;
  return o;
}

McEstimate scaled(McEstimate e, double c) {
  e.value *= c;
  e.std_error *= std::fabs(c);
  return e;
}

std::vector<double> column(const std::vector<double>& table, std::size_t width, std::size_t j) {
  std::vector<double> out(table.size() / width);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = table[i * width + j];
  return out;
}

template <class F>
double integrate(F&& f, double a, double b, double tol) {
  double err = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &err);
}

// Gauss-Legendre nodes and weights on [-1, 1].
template <int P>
void gl_fill(std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, P>;
  const auto& a = G::abscissa();
  const auto& wt = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(wt[i]);
    } else {
      x.push_back(-a[i]);
      w.push_back(wt[i]);
      x.push_back(a[i]);
      w.push_back(wt[i]);
    }
  }
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int p) {
  std::vector<double> x, w;
  switch (p) {
    case 5: gl_fill<5>(x, w); break;
    case 8: gl_fill<8>(x, w); break;
    case 10: gl_fill<10>(x, w); break;
    case 15: gl_fill<15>(x, w); break;
    case 20: gl_fill<20>(x, w); break;
    default: throw DomainError("points_per_panel must be one of 5, 8, 10, 15, 20");
  }
  return {x, w};
}

double sum_half_log(const ModeTable& t, double eps, double shift, bool skip_zero) {
  CompensatedSum s;
  const std::size_t zero = t.layout.zero_index();
  for (std::size_t i = 0; i < t.lambda.size(); ++i) {
    if (skip_zero && i == zero) continue;
    s += 0.5 * std::log(2.0 * kPi * eps / (t.lambda[i] + shift));
  }
  return static_cast<double>(s.value());
}

std::vector<double> fluct_weights(const DomainSpec& spec, double s) {
  auto w = SobolevParams{s}.weights(spec);
  w[ModeLayout(spec.N).zero_index()] = 0.0;
  return w;
}

}  // namespace

double log_gaussian_capacity(const DomainSpec& spec, double eps) {
  check_eps(eps);
  const ModeTable t(spec);
  return 0.5 * std::log(std::fabs(t.lambda0()) * eps / (2.0 * kPi)) + sum_half_log(t, eps, 0.0, true);
}

std::vector<McEstimate> capacity_upper_factors(const DomainSpec& spec, const std::vector<double>& eps,
                                               const McConfig& mc) {
  check_samples(mc);
  if (eps.empty()) throw DomainError("need at least one eps");
  for (double e : eps) check_eps(e);
  const auto m = MeasureSpec::gamma(spec);
  const double C = ModeTable(spec).constants.C_N;
  const std::size_t width = eps.size();
  const auto table = sample_table(
      m, width,
      [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
        const auto U = wick_integrals(ws.grid, y, C, ws.real);
        for (std::size_t j = 0; j < width; ++j) out[j] = std::exp(-0.25 * eps[j] * U[4]);
      },
      mc.n_samples, mc.seed, options(mc));
  std::vector<McEstimate> out;
  for (std::size_t j = 0; j < width; ++j) out.push_back(reduce_samples(column(table, width, j), mc.seed));
  return out;
}

CapacityUpper capacity_upper_mc(const DomainSpec& spec, double eps, double delta, const McConfig& mc) {
  check_eps(eps);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const ModeTable t(spec);
  CapacityUpper r;
  r.estimate.log_scale = log_gaussian_capacity(spec, eps);
  r.estimate.factor = capacity_upper_factors(spec, {eps}, mc).front();
  r.guard = std::exp(-delta * delta / (2.0 * eps));
  const double e = std::erf(delta * std::sqrt(std::fabs(t.lambda0()) / (2.0 * eps)));
  r.certified_factor = 1.0 / (e * e);
  return r;
}

CapacityLower capacity_lower_mc(const DomainSpec& spec, double eps, const SetParams& sets, const McConfig& mc,
                                LowerRoute route) {
  check_eps(eps);
  check_samples(mc);
  if (!(sets.delta > 0.0 && sets.delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(sets.r > 0.0)) throw DomainError("radius constant r must be positive");
  const ModeTable t(spec);
  const double L = spec.L;
  const double L2 = L * L;
  const double se = std::sqrt(eps);
  const double rhoL = (1.0 - sets.delta) * L;
  const double abs_l0 = std::fabs(t.lambda0());
  const double Cp = t.constants.C_N_perp;
  const auto weights = fluct_weights(spec, sets.s);
  const double radius = sets.r * std::sqrt(eps * std::log(1.0 / eps));
  const double bound_sq = radius * radius / eps;
  const auto m = MeasureSpec::gamma_perp0(spec);
  const double gauss0 = std::sqrt(2.0 * kPi * eps / abs_l0);
  const double tol = 1e-10;

  CapacityLower res;
  std::vector<double> table;
  if (route == LowerRoute::jensen_bound) {
    res.J = integrate(
        [&](double z) {
          return std::exp(potential::q_long(z, L) / eps + potential::q1_long(z, eps, L) + z * z / (2.0 * L2) +
                          3.0 * z * z * z * z / (4.0 * L2 * se));
        },
        -rhoL, rhoL, tol);
    table = sample_table(
        m, 2,
        [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
          const bool inside = sobolev_norm_sq(y, weights) <= bound_sq;
          out[0] = inside ? 1.0 : 0.0;
          if (!inside) {
            out[1] = 0.0;
            return;
          }
          const auto U = wick_integrals(ws.grid, y, Cp, ws.real);
          const double R = 0.75 / L2 * U[2] * U[2] + 0.5 * se * U[3] * U[3] - 1.5 * se / L2 * U[2] +
                           0.25 * se * U[4];
          out[1] = std::exp(-se * R);
        },
        mc.n_samples, mc.seed, options(mc));
    res.estimate.factor = scaled(reduce_samples(column(table, 2, 1), mc.seed), gauss0 / res.J);
  } else {
    table = sample_table(
        m, 2,
        [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
          const bool inside = sobolev_norm_sq(y, weights) <= bound_sq;
          out[0] = inside ? 1.0 : 0.0;
          if (!inside) {
            out[1] = 0.0;
            return;
          }
          const auto U = wick_integrals(ws.grid, y, Cp, ws.real);
          const double J = integrate(
              [&](double z) {
                const auto d = potential::perp_from_wick(z, eps, L, 0.0, U);
                return std::exp(d.q / eps + d.q1 + d.w);
              },
              -rhoL, rhoL, tol);
          out[1] = gauss0 / J;
        },
        mc.n_samples, mc.seed, options(mc));
    res.estimate.factor = reduce_samples(column(table, 2, 1), mc.seed);
  }
  res.prob_inside = reduce_samples(column(table, 2, 0), mc.seed);
  res.estimate.log_scale = log_gaussian_capacity(spec, eps);
  res.implied_c = (res.prob_inside.value - res.estimate.factor.value) / se;
  return res;
}

McEstimate escape_probability(const DomainSpec& spec, double eps, const SetParams& sets, const McConfig& mc) {
  check_eps(eps);
  check_samples(mc);
  const auto weights = fluct_weights(spec, sets.s);
  const double radius = sets.r * std::sqrt(eps * std::log(1.0 / eps));
  const double bound_sq = radius * radius / eps;
  return expect_functional(
      MeasureSpec::gamma_perp0(spec),
      [&](const FieldCoeffs& y, GffWorkspace&) { return sobolev_norm_sq(y, weights) > bound_sq ? 1.0 : 0.0; },
      mc.n_samples, mc.seed, options(mc));
}

PartitionLower partition_lower_mc(const DomainSpec& spec, double eps, const McConfig& mc) {
  check_eps(eps);
  check_samples(mc);
  const ModeTable t(spec);
  const auto m = MeasureSpec::gamma_plus(spec);
  const double L = spec.L;
  const double C_N = t.constants.C_N;
  const double Cbar = t.constants.C_gamma_plus;
  const std::size_t zero = t.layout.zero_index();
  const double y0_min = -L / std::sqrt(eps);
  const auto table = sample_table(
      m, 2,
      [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
        const bool omega = y.z[zero].real() > y0_min;
        out[1] = omega ? 1.0 : 0.0;
        if (!omega) {
          out[0] = 0.0;
          return;
        }
        const auto U = wick_integrals(ws.grid, y, Cbar, ws.real);
        out[0] = std::exp(-potential::plus_from_wick(eps, L, C_N, Cbar, 0.0, U).w_plus);
      },
      mc.n_samples, mc.seed, options(mc, true));
  PartitionLower r;
  r.q = potential::plus_from_wick(eps, L, C_N, Cbar, 0.0, {}).q;
  r.renorm_exponent = 1.5 * L * L * C_N;
  r.wick_constant = Cbar;
  r.estimate.log_scale = sum_half_log(t, eps, 3.0, false) - r.q;
  r.estimate.factor = reduce_samples(column(table, 2, 0), mc.seed);
  r.prob_omega = reduce_samples(column(table, 2, 1), mc.seed);
  return r;
}

PartitionUpper partition_upper(const DomainSpec& spec, double eps, const PartitionUpperConfig& cfg) {
  check_eps(eps);
  check_samples(cfg.mc);
  if (cfg.panels < 1) throw DomainError("need at least one quadrature panel");
  const ModeTable t(spec);
  const double L = spec.L;
  const double L2 = L * L;
  const double qL = potential::q_long(L, L);
  const double se = std::sqrt(eps);
  const double Cp = t.constants.C_N_perp;

  // Weight of z0 relative to the minimum, without the Gaussian expectation.
  const auto log_weight = [&](double z) {
    return -(potential::q_long(z, L) - qL) / eps - potential::q1_long(z, eps, L) +
           potential::k_factor(z, spec).log_value;
  };
  double z_hi = L;
  while ((potential::q_long(z_hi, L) - qL) / eps < 40.0) z_hi += 0.05 * L;

  const auto [gx, gw] = gauss_legendre(cfg.points_per_panel);
  PartitionUpper r;
  std::vector<double> W;
  const double h = z_hi / cfg.panels;
  for (int p = 0; p < cfg.panels; ++p) {
    const double a = p * h;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double z = a + 0.5 * h * (gx[i] + 1.0);
      r.nodes.push_back(z);
      W.push_back(0.5 * h * gw[i] * std::exp(log_weight(z)));
    }
  }
  const std::size_t n_nodes = r.nodes.size();
  std::vector<std::vector<double>> scale(n_nodes, std::vector<double>(t.lambda.size(), 0.0));
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const double m2 = 3.0 * r.nodes[j] * r.nodes[j] / L2;
    for (std::size_t i = 0; i < t.lambda.size(); ++i) {
      if (i != t.layout.zero_index()) scale[j][i] = std::sqrt(t.lambda[i] / (t.lambda[i] + m2));
    }
  }

  const auto table = sample_table(
      MeasureSpec::gamma_perp0(spec), n_nodes,
      [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
        FieldCoeffs& s = ws.mirror;
        for (std::size_t j = 0; j < n_nodes; ++j) {
          for (std::size_t i = 0; i < y.z.size(); ++i) s.z[i] = scale[j][i] * y.z[i];
          const auto U = wick_integrals(ws.grid, s, Cp, ws.real);
          out[j] = std::exp(-potential::w_hat(r.nodes[j], eps, L, U));
        }
      },
      cfg.mc.n_samples, cfg.mc.seed, options(cfg.mc));

  std::vector<double> direct(cfg.mc.n_samples, 0.0);
  for (std::size_t s = 0; s < cfg.mc.n_samples; ++s) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < n_nodes; ++j) acc += W[j] * table[s * n_nodes + j];
    direct[s] = static_cast<double>(acc.value());
  }
  r.direct.log_scale = sum_half_log(t, eps, 0.0, true) - qL / eps;
  r.direct.factor = reduce_samples(direct, cfg.mc.seed);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    r.node_expectations.push_back(reduce_samples(column(table, n_nodes, j), cfg.mc.seed));
  }

  // Smallest M with f_M(z) >= E - 1 + 2 sigma at every node.
  const auto f_M = [&](double M, double z) {
    const double lz = std::log1p(z * z);
    return M * se * (1.0 + std::fabs(z)) * (1.0 + se * std::exp(M * z * z * lz / se));
  };
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const auto& e = r.node_expectations[j];
    const double target = e.value - 1.0 + 2.0 * e.std_error;
    if (!(target > 0.0)) continue;
    double lo = 0.0, hi = 1.0;
    while (f_M(hi, r.nodes[j]) < target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f_M(mid, r.nodes[j]) >= target ? hi : lo) = mid;
    }
    r.M = std::max(r.M, hi);
  }

  const auto bound = [&](double M) {
    const auto integrand = [&](double z) { return std::exp(log_weight(z)) * (1.0 + f_M(M, z)); };
    double top = z_hi;
    while (std::log(integrand(top)) > -40.0) top += 0.05 * L;
    const double v = integrate(integrand, 0.0, L, cfg.quad_tol) + integrate(integrand, L, top, cfg.quad_tol);
    return r.direct.log_scale + std::log(v);
  };
  r.log_bound = bound(r.M);
  r.log_bound_2M = bound(2.0 * r.M);
  r.renorm_exponent = 1.5 * L2 * t.constants.C_N;
  return r;
}

LogEstimate expected_time_pt(const LogEstimate& capacity, const LogEstimate& half_partition) {
  LogEstimate r;
  r.log_scale = half_partition.log_value() - capacity.log_value();
  r.factor.value = 1.0;
  r.factor.std_error = std::hypot(capacity.rel_error(), half_partition.rel_error());
  r.factor.n = std::min(capacity.factor.n, half_partition.factor.n);
  r.factor.seed = half_partition.factor.seed;
  r.factor.valid = capacity.valid() && half_partition.valid();
  return r;
}

EkPrediction ek_theory(const DomainSpec& spec, double eps, double theta, int cutoff) {
  check_eps(eps);
  spec.validate();
  DomainSpec s = spec;
  if (cutoff >= 0) s.N = cutoff;
  const ModeTable t(s);
  const double l0 = t.lambda0();
  CompensatedSum acc;
  acc += 0.5 * std::log(2.0 * kPi / std::fabs(l0));
  acc += 0.5 * std::log(2.0 * kPi / (l0 + 3.0));
  const std::size_t zero = t.layout.zero_index();
  for (std::size_t i = 0; i < t.lambda.size(); ++i) {
    if (i == zero) continue;
    acc += 0.5 * std::log1p(-3.0 / (t.lambda[i] + 3.0));
  }
  acc += 1.5 * spec.L * spec.L * t.constants.C_N + 1.5 * theta;
  EkPrediction p;
  p.log_prefactor = static_cast<double>(acc.value());
  p.prefactor = std::exp(p.log_prefactor);
  p.barrier = spec.L * spec.L / 4.0;
  p.eps = eps;
  p.theta = theta;
  p.cutoff = s.N;
  p.tail_bound = prefactor_tail_bound(spec, s.N);
  return p;
}

EkPrediction ek_theory_limit(const DomainSpec& spec, double eps, double tol, double theta) {
  check_eps(eps);
  const auto lim = ek_prefactor_limit(spec, tol);
  EkPrediction p;
  p.log_prefactor = lim.log_prefactor + 1.5 * theta;
  p.prefactor = std::exp(p.log_prefactor);
  p.barrier = spec.L * spec.L / 4.0;
  p.eps = eps;
  p.theta = theta;
  p.cutoff = lim.cutoff;
  p.tail_bound = lim.tail_bound;
  return p;
}

Oracle1d::Oracle1d(double L, double eps, double delta, double tol)
    : L_(L), eps_(eps), rho_(1.0 - delta), tol_(tol) {
  if (!(L > 0.0)) throw DomainError("L must be positive");
  check_eps(eps);
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const double zmin = L * std::sqrt(1.0 + 3.0 * eps / (L * L));
  shift_ = potential(zmin);
  // Far cutoff where e^{-(V - V_min)/eps} is negligible.
  double far = zmin;
  while ((potential(far) - shift_) / eps < 60.0) far += 0.1 * L;
  const double rl = rho_ * L;
  barrier_integral_ = integrate([&](double z) { return std::exp(potential(z) / eps); }, -rl, rl, tol);
  capacity_ = eps / barrier_integral_;
  const auto g = [&](double z) { return std::exp(-potential(z) / eps); };
  half_partition_ = integrate(g, 0.0, zmin, tol) + integrate(g, zmin, far, tol);
}

double Oracle1d::potential(double z) const {
  const double L2 = L_ * L_;
  return z * z * z * z / (4.0 * L2) - 0.5 * z * z - 1.5 * eps_ * z * z / L2 + 0.75 * eps_ * eps_ / L2;
}

double Oracle1d::committor(double z) const {
  const double rl = rho_ * L_;
  if (z <= -rl) return 1.0;
  if (z >= rl) return 0.0;
  return integrate([&](double u) { return std::exp(potential(u) / eps_); }, z, rl, tol_) / barrier_integral_;
}

double Oracle1d::mfpt_from(double x) const {
  const double rl = rho_ * L_;
  if (x >= rl) return 0.0;
  double far = -L_ * std::sqrt(1.0 + 3.0 * eps_ / (L_ * L_));
  while ((potential(far) - shift_) / eps_ < 60.0) far -= 0.1 * L_;
  const auto g = [&](double u) { return std::exp(-(potential(u) - shift_) / eps_); };
  const double zmin = -L_ * std::sqrt(1.0 + 3.0 * eps_ / (L_ * L_));
  const auto inner = [&](double y) {
    if (y <= zmin) return integrate(g, far, y, tol_);
    return integrate(g, far, zmin, tol_) + integrate(g, zmin, y, tol_);
  };
  const auto outer = [&](double y) { return std::exp((potential(y) - shift_) / eps_) * inner(y); };
  double v = 0.0;
  if (x < zmin) v += integrate(outer, x, zmin, tol_);
  v += integrate(outer, std::max(x, zmin), rl, tol_);
  return v / eps_;
}

double Oracle1d::kramers() const {
  const double a = 1.0 + 3.0 * eps_ / (L_ * L_);
  const double dV = L_ * L_ * a * a / 4.0;
  return 2.0 * kPi / std::sqrt(a * 2.0 * a) * std::exp(dV / eps_);
}

}  // namespace acm::estimators
