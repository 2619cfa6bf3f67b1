#pragma once

// Gaussian measures on mode space, Wick-power integrals and the Monte-Carlo
// engine behind every Gaussian expectation.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "acm/field.hpp"
#include "acm/numeric.hpp"
#include "acm/rng.hpp"
#include "acm/spectra.hpp"

namespace acm {

/// Density proportional to exp(-1/2 sum_k a_k |y_k|^2) over the included modes.
struct MeasureSpec {
  DomainSpec spec;
  /// a_k laid out like FieldCoeffs::z.
  std::vector<double> stiffness;
  bool include_zero_mode = true;

  /// a_0 = |lambda_0|, a_k = lambda_k.
  static MeasureSpec gamma(const DomainSpec& spec);
  /// a_k = lambda_k + 3 for every |k| <= N, zero mode included.
  static MeasureSpec gamma_plus(const DomainSpec& spec);
  /// k != 0 only, a_k = lambda_k.
  static MeasureSpec gamma_perp0(const DomainSpec& spec);
  /// k != 0 only, a_k = lambda_k + 3 z0^2 / L^2.
  static MeasureSpec gamma_perp_z0(const DomainSpec& spec, double z0);

  /// L^{-2} sum_k 1/a_k over included modes: the pointwise variance.
  [[nodiscard]] double pointwise_variance() const;
  /// Throws DomainError unless every included a_k is positive and finite.
  void validate() const;
};

/// Draws one field. Every measure consumes the same normals in the same
/// order (zero mode first, then the positive half), so streams line up
/// across measures.
void sample(const MeasureSpec& m, RandomStream& rng, FieldCoeffs& out);
FieldCoeffs sample(const MeasureSpec& m, RandomStream& rng);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t n_nonfinite = 0;
  bool valid = true;
};

/// Mean and standard error of per-sample values; non-finite entries are
/// counted and mark the estimate invalid. Serial compensated reduction.
McEstimate reduce_samples(std::span<const double> values, std::uint64_t seed);

/// Sample variance with its standard error (fourth-moment based).
McEstimate reduce_variance(std::span<const double> values, std::uint64_t seed);

enum class ExecPolicy { serial, parallel };

struct McOptions {
  ExecPolicy policy = ExecPolicy::parallel;
  /// Average F(y) and F(-y) within each sample.
  bool antithetic = false;
  /// Added to the sample index to form the stream id.
  std::uint64_t stream_offset = 0;
};

/// Per-worker scratch passed to sample functionals.
struct GffWorkspace {
  explicit GffWorkspace(const DomainSpec& spec) : grid(spec), field(spec), mirror(spec) {}
  SpectralGrid grid;
  FieldCoeffs field;
  FieldCoeffs mirror;
  std::vector<double> real;
};

/// Runs F(field, workspace, out) for n samples, each writing `width` values.
/// Returns an n x width row-major table. Results depend only on (seed, n).
template <class F>
std::vector<double> sample_table(const MeasureSpec& m, std::size_t width, F&& f, std::size_t n,
                                 std::uint64_t seed, const McOptions& opt = {});

/// MC estimate of E^m[F]. F(const FieldCoeffs&, GffWorkspace&) -> double.
template <class F>
McEstimate expect_functional(const MeasureSpec& m, F&& f, std::size_t n, std::uint64_t seed,
                             const McOptions& opt = {});

/// U_n = int H_n(phi(x), C) dx for n = 0..4 from one synthesis.
std::array<double, 5> wick_integrals(SpectralGrid& grid, const FieldCoeffs& f, double C,
                                     std::vector<double>& scratch);
/// Single U_n. Throws DomainError for n > 4.
double wick_integral(const FieldCoeffs& f, int n, double C);

/// n! L^{4-2n} sum_{k_1+...+k_n=0, |k_i|<=cutoff} prod 1/|lambda_{k_i} + m2|,
/// the variance of int :phi^n: dx. Requires n <= 4 and cutoff <= 32.
double covariance_sum_exact(const DomainSpec& spec, double m2, int n, int cutoff);

struct NelsonReport {
  double moment_2 = 0.0;
  double moment_2p = 0.0;
  /// E[X^{2p}]^{1/2p} / E[X^2]^{1/2}.
  double ratio = 0.0;
  /// ratio / (2p-1)^{n/2}.
  double implied_constant = 0.0;
  bool degenerate = false;
  std::size_t n_samples = 0;
};

/// Empirical hypercontractivity ratio for X = U_{n,N} under m, with the Wick
/// constant equal to the pointwise variance of m. p in {2, 4, 6}, n <= 4.
NelsonReport nelson_moment_check(const MeasureSpec& m, int n, int p, std::size_t n_samples,
                                 std::uint64_t seed, ExecPolicy policy = ExecPolicy::parallel);

/// Moment ratio for explicit values (used for degenerate and exact cases).
NelsonReport nelson_from_values(std::span<const double> xs, int n, int p);

// ---------------------------------------------------------------------------

template <class F>
std::vector<double> sample_table(const MeasureSpec& m, std::size_t width, F&& f, std::size_t n,
                                 std::uint64_t seed, const McOptions& opt) {
  m.validate();
  std::vector<double> table(n * width, 0.0);
  const auto body = [&](GffWorkspace& ws, std::size_t i) {
    RandomStream rng(seed, opt.stream_offset + i);
    sample(m, rng, ws.field);
    double* row = table.data() + i * width;
    f(ws.field, ws, row);
    if (opt.antithetic) {
      ws.mirror = ws.field;
      for (auto& v : ws.mirror.z) v = -v;
      std::vector<double> tmp(width);
      f(ws.mirror, ws, tmp.data());
      for (std::size_t j = 0; j < width; ++j) row[j] = 0.5 * (row[j] + tmp[j]);
    }
  };
  if (opt.policy == ExecPolicy::serial) {
    GffWorkspace ws(m.spec);
    for (std::size_t i = 0; i < n; ++i) body(ws, i);
  } else {
#pragma omp parallel
    {
      GffWorkspace ws(m.spec);
#pragma omp for schedule(static)
      for (std::size_t i = 0; i < n; ++i) body(ws, i);
    }
  }
  return table;
}

template <class F>
McEstimate expect_functional(const MeasureSpec& m, F&& f, std::size_t n, std::uint64_t seed,
                             const McOptions& opt) {
  if (n < 100) throw DomainError("expect_functional needs at least 100 samples");
  auto table = sample_table(
      m, 1, [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) { out[0] = f(y, ws); }, n,
      seed, opt);
  return reduce_samples(table, seed);
}

}  // namespace acm
