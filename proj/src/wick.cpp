#include "acm/wick.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "acm/spectra.hpp"

namespace acm {

namespace {

void check_degree(int n, int max_degree) {
  if (n < 0 || n > max_degree) {
    throw DomainError("Hermite degree " + std::to_string(n) + " outside [0, " +
                      std::to_string(max_degree) + "]");
  }
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> coefficients_unchecked(int n, double C) {
  // H_n = X H_{n-1} - (n-1) C H_{n-2}.
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int m = 2; m <= n; ++m) {
    std::vector<double> next(static_cast<std::size_t>(m) + 1, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j + 1] += cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= (m - 1) * C * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

double hermite(int n, double X, double C) {
  check_degree(n, kMaxHermiteDegree);
  if (n == 0) return 1.0;
  double hm1 = 1.0;
  double h = X;
  for (int m = 2; m <= n; ++m) {
    const double next = X * h - (m - 1) * C * hm1;
    hm1 = h;
    h = next;
  }
  return h;
}

std::vector<double> hermite_coefficients(int n, double C) {
  check_degree(n, kMaxOracleDegree);
  return coefficients_unchecked(n, C);
}

double hermite_shift(int n, double X, double v, double C) {
  check_degree(n, kMaxHermiteDegree);
  double s = 0.0;
  double vj = 1.0;
  for (int j = 0; j <= n; ++j) {
    s += binom(n, j) * hermite(n - j, X, C) * vj;
    vj *= v;
  }
  return s;
}

double hermite_reconstant(int n, double X, double C, double Cbar) {
  check_degree(n, 4);
  const double d = C - Cbar;
  switch (n) {
    case 0:
      return 1.0;
    case 1:
      return hermite(1, X, Cbar);
    case 2:
      return hermite(2, X, Cbar) - d;
    case 3:
      return hermite(3, X, Cbar) - 3.0 * d * hermite(1, X, Cbar);
    default:
      return hermite(4, X, Cbar) - 6.0 * d * hermite(2, X, Cbar) + 3.0 * d * d;
  }
}

GaussianVector::GaussianVector(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() == 0 || cov_.rows() > 8) {
    throw DomainError("covariance must be square with dimension in [1, 8]");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("covariance is not symmetric");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov_);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -1e-12 * scale).any()) {
    throw DomainError("covariance is not positive semidefinite");
  }
}

double gaussian_raw_moment(const GaussianVector& gv, const std::vector<int>& powers) {
  const auto& S = gv.covariance();
  const int d = gv.dim();
  if (static_cast<int>(powers.size()) != d) throw DomainError("power vector has wrong length");
  const int total = std::accumulate(powers.begin(), powers.end(), 0);
  if (total > kMaxOracleDegree) throw DomainError("moment degree exceeds oracle budget");
  if (total % 2 != 0) return 0.0;
  std::map<std::vector<int>, long double> memo;
  // Isserlis: pair one copy of the first variable with every remaining factor.
  auto rec = [&](auto&& self, std::vector<int> p) -> long double {
    int i = 0;
    while (i < d && p[static_cast<std::size_t>(i)] == 0) ++i;
    if (i == d) return 1.0L;
    if (auto it = memo.find(p); it != memo.end()) return it->second;
    const std::vector<int> key = p;
    --p[static_cast<std::size_t>(i)];
    long double acc = 0.0L;
    for (int j = 0; j < d; ++j) {
      const int pj = p[static_cast<std::size_t>(j)];
      if (pj == 0 || S(i, j) == 0.0) continue;
      std::vector<int> q = p;
      --q[static_cast<std::size_t>(j)];
      acc += static_cast<long double>(pj) * S(i, j) * self(self, q);
    }
    memo.emplace(key, acc);
    return acc;
  };
  return static_cast<double>(rec(rec, powers));
}

double wick_moment_oracle(const GaussianVector& gv, const std::vector<HermiteFactor>& monomial) {
  const int d = gv.dim();
  int total = 0;
  for (const auto& f : monomial) {
    if (f.variable < 0 || f.variable >= d) throw DomainError("factor variable out of range");
    check_degree(f.degree, kMaxOracleDegree);
    total += f.degree;
  }
  if (total > kMaxOracleDegree) throw DomainError("monomial degree exceeds oracle budget");

  // Polynomial in d variables stored as exponent-vector -> coefficient.
  std::map<std::vector<int>, long double> poly{{std::vector<int>(static_cast<std::size_t>(d), 0), 1.0L}};
  for (const auto& f : monomial) {
    const auto c = coefficients_unchecked(f.degree, f.constant);
    std::map<std::vector<int>, long double> next;
    for (const auto& [expo, coef] : poly) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0.0) continue;
        auto e = expo;
        e[static_cast<std::size_t>(f.variable)] += static_cast<int>(j);
        next[e] += coef * c[j];
      }
    }
    poly = std::move(next);
  }
  long double acc = 0.0L;
  for (const auto& [expo, coef] : poly) acc += coef * gaussian_raw_moment(gv, expo);
  return static_cast<double>(acc);
}

}  // namespace acm
