#include "acm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "acm/numeric.hpp"

namespace acm {

std::string to_string(Boundary bc) {
  return bc == Boundary::periodic ? "periodic" : "neumann";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "neumann") return Boundary::neumann;
  throw DomainError("unknown boundary condition '" + s + "'");
}

void DomainSpec::validate() const {
  const double upper = bc == Boundary::periodic ? kTwoPi : kPi;
  if (!(L > 0.0 && L < upper)) {
    throw DomainError("side length L=" + std::to_string(L) + " outside (0, " +
                      std::to_string(upper) + ") for " + to_string(bc) + " boundary");
  }
  if (N < 0) throw DomainError("cutoff N must be nonnegative");
}

double DomainSpec::wave_scale() const {
  return bc == Boundary::periodic ? kTwoPi / L : kPi / L;
}

int ModeIndex::norm() const { return std::max(std::abs(k1), std::abs(k2)); }

bool is_valid_mode(const DomainSpec& spec, ModeIndex k) {
  if (spec.bc == Boundary::neumann) return k.k1 >= 0 && k.k2 >= 0;
  return true;
}

std::vector<ModeIndex> enumerate_modes(const DomainSpec& spec) {
  std::vector<ModeIndex> out;
  const int lo = spec.bc == Boundary::periodic ? -spec.N : 0;
  const auto side = static_cast<std::size_t>(spec.N - lo + 1);
  out.reserve(side * side);
  for (int a = lo; a <= spec.N; ++a)
    for (int b = lo; b <= spec.N; ++b) out.push_back({a, b});
  return out;
}

double eigenvalue(const DomainSpec& spec, ModeIndex k) {
  if (!is_valid_mode(spec, k)) {
    throw DomainError("mode (" + std::to_string(k.k1) + "," + std::to_string(k.k2) +
                      ") invalid for Neumann boundary");
  }
  const double c = spec.wave_scale();
  const double n2 = static_cast<double>(k.k1) * k.k1 + static_cast<double>(k.k2) * k.k2;
  return c * c * n2 - 1.0;
}

double eigenvalue_nu(const DomainSpec& spec, ModeIndex k) { return eigenvalue(spec, k) + 3.0; }

ModeLayout::ModeLayout(int N) : N_(N) {
  if (N < 0) throw DomainError("cutoff N must be nonnegative");
  independent_.push_back(zero_index());
  for (std::size_t i = 0; i < size(); ++i) {
    if (is_positive_half(mode(i))) independent_.push_back(i);
  }
}

namespace {

// Visits every valid mode with 0 < |k| <= K exactly once.
template <class F>
void for_each_nonzero_mode(const DomainSpec& spec, int K, F&& f) {
  const int lo = spec.bc == Boundary::periodic ? -K : 0;
  for (int a = lo; a <= K; ++a)
    for (int b = lo; b <= K; ++b)
      if (a != 0 || b != 0) f(ModeIndex{a, b});
}

double lambda_inline(double c2, ModeIndex k) {
  return c2 * (static_cast<double>(k.k1) * k.k1 + static_cast<double>(k.k2) * k.k2) - 1.0;
}

}  // namespace

SpectralConstants renorm_constants(const DomainSpec& spec) {
  spec.validate();
  const double c = spec.wave_scale();
  const double c2 = c * c;
  CompensatedSum perp, plus;
  for_each_nonzero_mode(spec, spec.N, [&](ModeIndex k) {
    const long double lam = lambda_inline(c2, k);
    perp += 1.0L / lam;
    plus += 1.0L / (lam + 3.0L);
  });
  const long double L2 = static_cast<long double>(spec.L) * spec.L;
  SpectralConstants out;
  out.C_N_perp = static_cast<double>(perp.value() / L2);
  out.C_N = static_cast<double>((perp.value() + 1.0L) / L2);
  out.C_N_plus = static_cast<double>(plus.value() / L2);
  out.delta_C = static_cast<double>((perp.value() + 1.0L - plus.value()) / L2);
  out.C_gamma_plus = static_cast<double>((plus.value() + 0.5L) / L2);
  return out;
}

ModeTable::ModeTable(const DomainSpec& s) : spec(s), layout(s.N) {
  spec.validate();
  if (spec.bc != Boundary::periodic) {
    throw DomainError("field-level operations support periodic boundary only");
  }
  lambda.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) lambda[i] = eigenvalue(spec, layout.mode(i));
  constants = renorm_constants(spec);
}

double prefactor_tail_bound(const DomainSpec& spec, int cutoff) {
  spec.validate();
  const double c = spec.wave_scale();
  const double c2 = c * c;
  const double denom = c2 * (c2 * static_cast<double>(cutoff) * cutoff - 1.0);
  if (cutoff < 1 || denom <= 0.0) return std::numeric_limits<double>::infinity();
  // Shell |k| = m holds 8m points (periodic) or 2m+1 <= 3m points (Neumann);
  // each term is at most 1/(c^2 m^2 - 1)^2 and m/(c^2 m^2-1)^2 is decreasing.
  const double shell = spec.bc == Boundary::periodic ? 8.0 : 3.0;
  return 0.5 * 9.0 * shell / (2.0 * denom);
}

double prefactor_tail_explicit(const DomainSpec& spec, int cutoff, int cutoff_hi) {
  spec.validate();
  const double c2 = spec.wave_scale() * spec.wave_scale();
  CompensatedSum s;
  for_each_nonzero_mode(spec, cutoff_hi, [&](ModeIndex k) {
    if (k.norm() <= cutoff) return;
    const double x = 3.0 / lambda_inline(c2, k);
    s += 0.5L * x * x;
  });
  return static_cast<double>(s.value());
}

PrefactorResult ek_prefactor(const DomainSpec& spec, int cutoff) {
  spec.validate();
  if (cutoff < 0) throw DomainError("prefactor cutoff must be nonnegative");
  const double c2 = spec.wave_scale() * spec.wave_scale();
  const double lam0 = -1.0;
  CompensatedSum log_inner;
  log_inner += 3.0L / std::fabs(lam0) - std::log(std::fabs(lam0) * (lam0 + 3.0));
  for_each_nonzero_mode(spec, cutoff, [&](ModeIndex k) {
    const double x = 3.0 / lambda_inline(c2, k);
    log_inner += static_cast<long double>(x) - std::log1p(x);
  });
  PrefactorResult r;
  r.cutoff = cutoff;
  r.log_prefactor = std::log(kTwoPi) + 0.5 * static_cast<double>(log_inner.value());
  r.prefactor = std::exp(r.log_prefactor);
  r.tail_bound = prefactor_tail_bound(spec, cutoff);
  r.relative_error_bound = std::expm1(0.5 * r.tail_bound);
  return r;
}

PrefactorResult ek_prefactor_limit(const DomainSpec& spec, double tol, int max_cutoff) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  for (int K = 1; K <= max_cutoff; K *= 2) {
    if (prefactor_tail_bound(spec, K) < tol) return ek_prefactor(spec, K);
  }
  throw std::runtime_error("prefactor tolerance " + std::to_string(tol) +
                           " unreachable within cutoff " + std::to_string(max_cutoff));
}

Det2Result det2_diagonal(const DomainSpec& spec, int cutoff) {
  spec.validate();
  const double c2 = spec.wave_scale() * spec.wave_scale();
  CompensatedSum log_raw, trace;
  for_each_nonzero_mode(spec, cutoff, [&](ModeIndex k) {
    const double x = 3.0 / lambda_inline(c2, k);
    log_raw += std::log1p(x);
    trace += x;
  });
  Det2Result r;
  r.log_raw = static_cast<double>(log_raw.value());
  r.trace = static_cast<double>(trace.value());
  r.log_det2 = static_cast<double>(log_raw.value() - trace.value());
  r.raw_product = std::exp(r.log_raw);
  r.det2 = std::exp(r.log_det2);
  return r;
}

}  // namespace acm
