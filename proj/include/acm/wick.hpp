#pragma once

// Monic Hermite polynomials H_n(X, C) and an exact Gaussian moment oracle.

#include <Eigen/Dense>
#include <vector>

namespace acm {

inline constexpr int kMaxHermiteDegree = 6;
inline constexpr int kMaxOracleDegree = 12;

/// H_0 = 1, H_n = X H_{n-1} - C dH_{n-1}/dX. Throws DomainError for n outside [0, 6].
double hermite(int n, double X, double C);

/// Coefficients c[j] of X^j in H_n(X, C).
std::vector<double> hermite_coefficients(int n, double C);

/// sum_j binom(n, j) H_{n-j}(X, C) v^j, which equals H_n(X + v, C).
double hermite_shift(int n, double X, double v, double C);

/// H_n(X, C) written in the basis H_m(X, Cbar); n <= 4.
double hermite_reconstant(int n, double X, double C, double Cbar);

/// Centered jointly Gaussian vector described by its covariance.
class GaussianVector {
 public:
  /// Throws DomainError unless cov is square, symmetric, PSD and of size <= 8.
  explicit GaussianVector(Eigen::MatrixXd cov);
  [[nodiscard]] const Eigen::MatrixXd& covariance() const { return cov_; }
  [[nodiscard]] int dim() const { return static_cast<int>(cov_.rows()); }

 private:
  Eigen::MatrixXd cov_;
};

struct HermiteFactor {
  int variable = 0;
  int degree = 0;
  double constant = 0.0;
};

/// E[prod_i H_{n_i}(X_{v_i}, C_i)] by expansion into raw moments and
/// Isserlis pairing. Total degree is limited to 12.
double wick_moment_oracle(const GaussianVector& gv, const std::vector<HermiteFactor>& monomial);

/// E[prod_i X_i^{p_i}] for a centered Gaussian vector.
double gaussian_raw_moment(const GaussianVector& gv, const std::vector<int>& powers);

}  // namespace acm
