#pragma once

// V_N, its drift and the longitudinal/transversal and shifted decompositions.

#include <array>
#include <optional>
#include <vector>

#include "acm/field.hpp"
#include "acm/spectra.hpp"

namespace acm::potential {

inline constexpr double kEpsMax = 1.0;

/// V_N(z0 + sqrt(eps) y)/eps = q/eps + q1 + g + w.
struct PerpDecomposition {
  double q = 0.0;
  double q1 = 0.0;
  double g = 0.0;
  double w = 0.0;
  /// Wick integrals of the fluctuation with constant C_N^perp.
  double U2 = 0.0;
  double U3 = 0.0;
  double U4 = 0.0;
  [[nodiscard]] double total(double eps) const { return q / eps + q1 + g + w; }
};

/// V_N(1 + sqrt(eps) phi_hat)/eps = q + g_plus + w_plus.
struct PlusDecomposition {
  double q = 0.0;
  double g_plus = 0.0;
  double w_plus = 0.0;
  /// Wick integrals with constant C_{N,+}.
  double U1 = 0.0;
  double U2 = 0.0;
  double U3 = 0.0;
  double U4 = 0.0;
  [[nodiscard]] double total() const { return q + g_plus + w_plus; }
};

struct WMu {
  double value = 0.0;
  double lower_bound = 0.0;
};

/// q(z0) = z0^4/(4L^2) - |lambda_0| z0^2 / 2.
double q_long(double z0, double L);
/// q1(z0, eps) = -3 z0^2/(2L^2) + 3 eps/(4L^2).
double q1_long(double z0, double eps, double L);
/// D_N(z0, mu, eps) of the w^(mu) lower bound.
double d_bound(double z0, double mu, double eps, double C_N, double L);

/// Perp decomposition from the Wick integrals U[n] of y_perp (constant C_N^perp)
/// and its quadratic form g.
PerpDecomposition perp_from_wick(double z0, double eps, double L, double g, const std::array<double, 5>& U);
/// Plus decomposition from the Wick integrals U[n] of phi_hat with constant Cbar.
PlusDecomposition plus_from_wick(double eps, double L, double C_N, double Cbar, double g_plus,
                                 const std::array<double, 5>& U);
/// w_hat = -3 eps/(2L^2) U2 + (z0/L) sqrt(eps) U3 + eps U4/4, the exponent left
/// after the change of mass to gamma_{z0}^perp.
double w_hat(double z0, double eps, double L, const std::array<double, 5>& U);

/// Holds the spectrum and one transform grid; not shareable across threads.
class Evaluator {
 public:
  explicit Evaluator(const DomainSpec& spec);

  [[nodiscard]] const ModeTable& table() const { return table_; }
  [[nodiscard]] SpectralGrid& grid() { return grid_; }

  /// 1/2 sum lambda_k |z_k|^2 + 1/4 int H_4(phi, eps C_N) dx. 0 <= eps <= kEpsMax.
  double value(const FieldCoeffs& f, double eps);
  /// (-lambda_k + 3 eps C_N) z_k - [P_N phi^3]_k.
  void drift(const FieldCoeffs& f, double eps, FieldCoeffs& out);
  [[nodiscard]] FieldCoeffs drift(const FieldCoeffs& f, double eps);

  /// `fluct` is the unscaled y_perp (zero mean). Throws DomainError otherwise.
  PerpDecomposition decompose_perp(double z0, const FieldCoeffs& fluct, double eps);
  /// `f` is phi_hat, zero mode included. The U^+ use Cbar (default C_{N,+});
  /// the reconstruction is exact for any Cbar.
  PlusDecomposition decompose_plus(const FieldCoeffs& f, double eps, std::optional<double> Cbar = {});
  /// w^(mu)_{N,perp} with its lower bound -D_N. mu in (0, 3/2).
  WMu w_mu(double z0, const FieldCoeffs& fluct, double eps, double mu);

 private:
  void check_field(const FieldCoeffs& f) const;

  ModeTable table_;
  SpectralGrid grid_;
  std::vector<double> scratch_;
};

double value(const FieldCoeffs& f, double eps);
FieldCoeffs drift(const FieldCoeffs& f, double eps);
PerpDecomposition decompose_perp(double z0, const FieldCoeffs& fluct, double eps);
PlusDecomposition decompose_plus(const FieldCoeffs& f, double eps, std::optional<double> Cbar = {});
WMu w_mu(double z0, const FieldCoeffs& fluct, double eps, double mu);

struct KFactor {
  double value = 1.0;
  double log_value = 0.0;
  /// (1/2) sum zeta_k^2, an upper bound on 2 log K.
  double half_sum_zeta_sq = 0.0;
  /// M1 with log K <= M1 z0^4 at this cutoff.
  double M1 = 0.0;
};

/// K(z0) = [prod_{0<|k|<=N} e^{zeta_k}/(1+zeta_k)]^{1/2}, zeta_k = 3 z0^2/(L^2 lambda_k).
KFactor k_factor(double z0, const DomainSpec& spec);

struct HPlus {
  double value = 0.0;
  double derivative = 0.0;
};

/// Normalised Gaussian-integral profile falling from 1 at -delta to 0 at delta.
HPlus h_plus(double z0, double delta, double eps, double abs_lambda0 = 1.0);
/// int_{-delta}^{delta} exp(-|lambda_0| t^2 / (2 eps)) dt.
double h_plus_normalisation(double delta, double eps, double abs_lambda0 = 1.0);

}  // namespace acm::potential
