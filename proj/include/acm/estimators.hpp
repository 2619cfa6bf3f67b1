#pragma once

// Capacity and partition-function estimators, the transition-time formula,
// the Eyring-Kramers prediction and the exact single-mode oracle.

#include <cmath>
#include <cstdint>
#include <vector>

#include "acm/gff.hpp"
#include "acm/spectra.hpp"

namespace acm::estimators {

/// exp(log_scale) * factor, with the Monte-Carlo error living in `factor`.
struct LogEstimate {
  double log_scale = 0.0;
  McEstimate factor;

  [[nodiscard]] double log_value() const { return log_scale + std::log(factor.value); }
  [[nodiscard]] double value() const { return std::exp(log_value()); }
  /// Relative standard error.
  [[nodiscard]] double rel_error() const { return factor.std_error / std::fabs(factor.value); }
  [[nodiscard]] double std_error() const { return value() * rel_error(); }
  [[nodiscard]] bool valid() const { return factor.valid && factor.value > 0.0; }
};

/// log of sqrt(|lambda_0| eps / 2pi) prod_{0<|k|<=N} sqrt(2 pi eps / lambda_k).
double log_gaussian_capacity(const DomainSpec& spec, double eps);

struct McConfig {
  std::size_t n_samples = 20000;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct CapacityUpper {
  /// Gaussian product times E^gamma[exp(-eps w_N)].
  LogEstimate estimate;
  /// exp(-delta^2 / (2 eps)), the size of the neglected normalisation correction.
  double guard = 0.0;
  /// 1/erf(delta sqrt(|lambda_0|/(2 eps)))^2; estimate times this is a strict bound.
  double certified_factor = 1.0;

  /// The strict upper bound: estimate scaled by certified_factor.
  [[nodiscard]] LogEstimate bound() const {
    LogEstimate b = estimate;
    b.log_scale += std::log(certified_factor);
    return b;
  }
};

CapacityUpper capacity_upper_mc(const DomainSpec& spec, double eps, double delta, const McConfig& mc);

/// E^gamma[exp(-eps w_N)] for several eps from one set of samples.
std::vector<McEstimate> capacity_upper_factors(const DomainSpec& spec, const std::vector<double>& eps,
                                               const McConfig& mc);

enum class LowerRoute { jensen_bound, direct_quadrature };

struct CapacityLower {
  /// Gaussian product times the route's factor.
  LogEstimate estimate;
  /// P^{gamma_0^perp}(D_perp hat), from the same samples.
  McEstimate prob_inside;
  /// (P(D hat) - factor) / sqrt(eps), the correction constant implied by the run.
  double implied_c = 0.0;
  /// Deterministic 1D integral J used by the Jensen route (0 for the direct route).
  double J = 0.0;
};

struct SetParams {
  double delta = 0.5;
  double s = -0.25;
  double r = 5.0;
};

CapacityLower capacity_lower_mc(const DomainSpec& spec, double eps, const SetParams& sets, const McConfig& mc,
                                LowerRoute route = LowerRoute::jensen_bound);

/// P^{gamma_0^perp}(D_perp hat ^c).
McEstimate escape_probability(const DomainSpec& spec, double eps, const SetParams& sets, const McConfig& mc);

struct PartitionLower {
  /// prod_{|k|<=N} sqrt(2 pi eps/(lambda_k+3)) e^{-q} E^{gamma_+}[e^{-w_+} 1].
  LogEstimate estimate;
  double q = 0.0;
  /// (3/2) L^2 C_N, the renormalisation exponent.
  double renorm_exponent = 0.0;
  /// Wick constant used for the U^+ (pointwise variance of gamma_+).
  double wick_constant = 0.0;
  McEstimate prob_omega;
};

PartitionLower partition_lower_mc(const DomainSpec& spec, double eps, const McConfig& mc);

struct PartitionUpperConfig {
  McConfig mc{4000, 1, ExecPolicy::parallel};
  int panels = 4;
  /// Gauss-Legendre points per panel (one of 5, 8, 10, 15, 20).
  int points_per_panel = 8;
  double quad_tol = 1e-10;
};

struct PartitionUpper {
  /// Direct estimate of Z/2: quadrature over z0 of e^{-q/eps} g(z0, eps).
  LogEstimate direct;
  /// Upper bound with the measured constant M.
  double log_bound = 0.0;
  /// Same bound evaluated with 2M.
  double log_bound_2M = 0.0;
  double M = 0.0;
  /// (3/2) L^2 C_N.
  double renorm_exponent = 0.0;
  std::vector<double> nodes;
  std::vector<McEstimate> node_expectations;
};

PartitionUpper partition_upper(const DomainSpec& spec, double eps, const PartitionUpperConfig& cfg);

/// Z/(2 cap) with first-order error propagation on the log scale.
LogEstimate expected_time_pt(const LogEstimate& capacity, const LogEstimate& half_partition);

struct EkPrediction {
  double prefactor = 0.0;
  double log_prefactor = 0.0;
  double barrier = 0.0;
  double eps = 0.0;
  double theta = 0.0;
  int cutoff = 0;
  double tail_bound = 0.0;
  [[nodiscard]] double log_value() const { return log_prefactor + barrier / eps; }
  [[nodiscard]] double value() const { return std::exp(log_value()); }
};

/// Prediction assembled from the Gaussian ratios and exp((3/2) L^2 (C_N + theta/L^2)).
/// cutoff < 0 selects spec.N.
EkPrediction ek_theory(const DomainSpec& spec, double eps, double theta = 0.0, int cutoff = -1);
/// Same with the cutoff driven to the limit by ek_prefactor_limit.
EkPrediction ek_theory_limit(const DomainSpec& spec, double eps, double tol = 1e-8, double theta = 0.0);

/// Single-mode system V(z) = z^4/(4L^2) - z^2/2 - (3/2) eps z^2/L^2 + (3/4) eps^2/L^2.
class Oracle1d {
 public:
  Oracle1d(double L, double eps, double delta, double tol = 1e-10);

  [[nodiscard]] double potential(double z) const;
  /// eps / int_{-rho L}^{rho L} e^{V/eps}.
  [[nodiscard]] double capacity() const { return capacity_; }
  /// int_0^inf e^{-V/eps}.
  [[nodiscard]] double half_partition() const { return half_partition_; }
  /// half_partition / capacity: mean hitting time from the equilibrium measure.
  [[nodiscard]] double expected_time() const { return half_partition_ / capacity_; }
  /// P_z[tau_A < tau_B] with A = {z <= -rho L}, B = {z >= rho L}.
  [[nodiscard]] double committor(double z) const;
  /// Mean first-passage time from x to rho L.
  [[nodiscard]] double mfpt_from(double x) const;
  /// 2 pi / sqrt(|V''(0)| V''(z_min)) e^{(V(0) - V(z_min))/eps}.
  [[nodiscard]] double kramers() const;

  [[nodiscard]] double L() const { return L_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double rho_L() const { return rho_ * L_; }

 private:
  double L_, eps_, rho_, tol_;
  double shift_;
  double barrier_integral_;
  double capacity_;
  double half_partition_;
};

}  // namespace acm::estimators
