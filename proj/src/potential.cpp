#include "acm/potential.hpp"

#include <cmath>

#include "acm/gff.hpp"
#include "acm/numeric.hpp"

namespace acm::potential {

namespace {

void check_eps(double eps, bool allow_zero) {
  const bool ok = allow_zero ? eps >= 0.0 : eps > 0.0;
  if (!ok || eps > kEpsMax) throw DomainError("noise strength eps outside admissible range");
}

// 1/2 sum_k a_k |z_k|^2 over the full mode square.
double quadratic_form(const std::vector<double>& a, const FieldCoeffs& f, bool skip_zero) {
  CompensatedSum s;
  const std::size_t zero = f.index({0, 0});
  for (std::size_t i = 0; i < f.z.size(); ++i) {
    if (skip_zero && i == zero) continue;
    s += a[i] * std::norm(f.z[i]);
  }
  return 0.5 * static_cast<double>(s.value());
}

}  // namespace

double q_long(double z0, double L) { return z0 * z0 * z0 * z0 / (4.0 * L * L) - 0.5 * z0 * z0; }

double q1_long(double z0, double eps, double L) {
  return -1.5 * z0 * z0 / (L * L) + 0.75 * eps / (L * L);
}

double d_bound(double z0, double mu, double eps, double C_N, double L) {
  if (!(mu > 0.0 && mu < 1.5)) throw DomainError("mu must lie in (0, 3/2)");
  return 1.5 * z0 * z0 * C_N + 0.75 * mu * eps * C_N * C_N * L * L * (3.0 / (1.0 - 2.0 * mu / 3.0) - 1.0);
}

PerpDecomposition perp_from_wick(double z0, double eps, double L, double g, const std::array<double, 5>& U) {
  const double L2 = L * L;
  PerpDecomposition d;
  d.U2 = U[2];
  d.U3 = U[3];
  d.U4 = U[4];
  d.q = q_long(z0, L);
  d.q1 = q1_long(z0, eps, L);
  d.g = g;
  d.w = 1.5 * (z0 * z0 - eps) / L2 * U[2] + (z0 / L) * std::sqrt(eps) * U[3] + 0.25 * eps * U[4];
  return d;
}

PlusDecomposition plus_from_wick(double eps, double L, double C_N, double Cbar, double g_plus,
                                 const std::array<double, 5>& U) {
  const double L2 = L * L;
  const double dC = C_N - Cbar;
  const double se = std::sqrt(eps);
  PlusDecomposition d;
  d.U1 = U[1];
  d.U2 = U[2];
  d.U3 = U[3];
  d.U4 = U[4];
  d.q = -L2 / (4.0 * eps) - 1.5 * L2 * C_N + 0.75 * L2 * eps * dC * dC;
  d.g_plus = g_plus;
  d.w_plus = se * U[3] + 0.25 * eps * U[4] - 3.0 * dC * (0.5 * eps * U[2] + se * U[1]);
  return d;
}

double w_hat(double z0, double eps, double L, const std::array<double, 5>& U) {
  return -1.5 * eps / (L * L) * U[2] + (z0 / L) * std::sqrt(eps) * U[3] + 0.25 * eps * U[4];
}

Evaluator::Evaluator(const DomainSpec& spec) : table_(spec), grid_(spec) {}

void Evaluator::check_field(const FieldCoeffs& f) const {
  if (f.spec.N != table_.spec.N || f.spec.L != table_.spec.L || f.z.size() != table_.lambda.size()) {
    throw DomainError("field does not match the evaluator's domain");
  }
}

double Evaluator::value(const FieldCoeffs& f, double eps) {
  check_eps(eps, true);
  check_field(f);
  const double C = eps * table_.constants.C_N;
  const auto U = wick_integrals(grid_, f, C, scratch_);
  return quadratic_form(table_.lambda, f, false) + 0.25 * U[4];
}

void Evaluator::drift(const FieldCoeffs& f, double eps, FieldCoeffs& out) {
  check_eps(eps, true);
  check_field(f);
  grid_.cubic_projected(f, out);
  const double shift = 3.0 * eps * table_.constants.C_N;
  for (std::size_t i = 0; i < f.z.size(); ++i) {
    out.z[i] = (shift - table_.lambda[i]) * f.z[i] - out.z[i];
  }
}

FieldCoeffs Evaluator::drift(const FieldCoeffs& f, double eps) {
  FieldCoeffs out(f.spec);
  drift(f, eps, out);
  return out;
}

PerpDecomposition Evaluator::decompose_perp(double z0, const FieldCoeffs& fluct, double eps) {
  check_eps(eps, false);
  check_field(fluct);
  if (std::abs(fluct.z[fluct.index({0, 0})]) != 0.0) throw DomainError("fluctuation has nonzero mean");
  const auto U = wick_integrals(grid_, fluct, table_.constants.C_N_perp, scratch_);
  return perp_from_wick(z0, eps, table_.spec.L, quadratic_form(table_.lambda, fluct, true), U);
}

PlusDecomposition Evaluator::decompose_plus(const FieldCoeffs& f, double eps, std::optional<double> Cbar) {
  check_eps(eps, false);
  check_field(f);
  const double cbar = Cbar.value_or(table_.constants.C_N_plus);
  const auto U = wick_integrals(grid_, f, cbar, scratch_);
  std::vector<double> nu(table_.lambda);
  for (double& v : nu) v += 3.0;
  return plus_from_wick(eps, table_.spec.L, table_.constants.C_N, cbar, quadratic_form(nu, f, false), U);
}

WMu Evaluator::w_mu(double z0, const FieldCoeffs& fluct, double eps, double mu) {
  check_eps(eps, false);
  const double lb = -d_bound(z0, mu, eps, table_.constants.C_N, table_.spec.L);
  const auto d = decompose_perp(z0, fluct, eps);
  const double L = table_.spec.L;
  const double L2 = L * L;
  WMu r;
  r.value = 1.5 * z0 * z0 / L2 * d.U2 +
            mu * (-1.5 * eps / L2 * d.U2 + (z0 / L) * std::sqrt(eps) * d.U3 + 0.25 * eps * d.U4);
  r.lower_bound = lb;
  return r;
}

double value(const FieldCoeffs& f, double eps) { return Evaluator(f.spec).value(f, eps); }
FieldCoeffs drift(const FieldCoeffs& f, double eps) { return Evaluator(f.spec).drift(f, eps); }
PerpDecomposition decompose_perp(double z0, const FieldCoeffs& fluct, double eps) {
  return Evaluator(fluct.spec).decompose_perp(z0, fluct, eps);
}
PlusDecomposition decompose_plus(const FieldCoeffs& f, double eps, std::optional<double> Cbar) {
  return Evaluator(f.spec).decompose_plus(f, eps, Cbar);
}
WMu w_mu(double z0, const FieldCoeffs& fluct, double eps, double mu) {
  return Evaluator(fluct.spec).w_mu(z0, fluct, eps, mu);
}

KFactor k_factor(double z0, const DomainSpec& spec) {
  spec.validate();
  const double c2 = spec.wave_scale() * spec.wave_scale();
  const double L2 = spec.L * spec.L;
  CompensatedSum two_log_k, half_sq, inv_sq;
  const int N = spec.N;
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b) {
      if (a == 0 && b == 0) continue;
      const double lam = c2 * (double(a) * a + double(b) * b) - 1.0;
      const double zeta = 3.0 * z0 * z0 / (L2 * lam);
      two_log_k += static_cast<long double>(zeta) - std::log1p(zeta);
      half_sq += 0.5L * zeta * zeta;
      inv_sq += 1.0L / (static_cast<long double>(lam) * lam);
    }
  KFactor k;
  k.log_value = 0.5 * static_cast<double>(two_log_k.value());
  k.value = std::exp(k.log_value);
  k.half_sum_zeta_sq = static_cast<double>(half_sq.value());
  k.M1 = 9.0 / (4.0 * L2 * L2) * static_cast<double>(inv_sq.value());
  return k;
}

double h_plus_normalisation(double delta, double eps, double abs_lambda0) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw DomainError("h_plus needs delta > 0 and eps > 0");
  const double s = std::sqrt(abs_lambda0 / (2.0 * eps));
  return std::sqrt(2.0 * kPi * eps / abs_lambda0) * std::erf(delta * s);
}

HPlus h_plus(double z0, double delta, double eps, double abs_lambda0) {
  if (!(delta > 0.0 && delta < 1.0) || !(eps > 0.0)) {
    throw DomainError("h_plus needs 0 < delta < 1 and eps > 0");
  }
  HPlus h;
  if (z0 <= -delta) {
    h.value = 1.0;
    return h;
  }
  if (z0 >= delta) return h;
  const double s = std::sqrt(abs_lambda0 / (2.0 * eps));
  const double ed = std::erf(delta * s);
  h.value = 0.5 * (ed - std::erf(z0 * s)) / ed;
  h.derivative = -std::exp(-abs_lambda0 * z0 * z0 / (2.0 * eps)) / h_plus_normalisation(delta, eps, abs_lambda0);
  return h;
}

}  // namespace acm::potential
