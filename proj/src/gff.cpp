#include "acm/gff.hpp"

#include <limits>

#include "acm/wick.hpp"

namespace acm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

MeasureSpec base_measure(const DomainSpec& spec) {
  spec.validate();
  if (spec.bc != Boundary::periodic) throw DomainError("Gaussian measures require periodic boundary");
  MeasureSpec m;
  m.spec = spec;
  const ModeLayout layout(spec.N);
  m.stiffness.resize(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) m.stiffness[i] = eigenvalue(spec, layout.mode(i));
  return m;
}

}  // namespace

MeasureSpec MeasureSpec::gamma(const DomainSpec& spec) {
  auto m = base_measure(spec);
  auto& a0 = m.stiffness[ModeLayout(spec.N).zero_index()];
  a0 = std::fabs(a0);
  return m;
}

MeasureSpec MeasureSpec::gamma_plus(const DomainSpec& spec) {
  auto m = base_measure(spec);
  for (double& a : m.stiffness) a += 3.0;
  return m;
}

MeasureSpec MeasureSpec::gamma_perp0(const DomainSpec& spec) {
  auto m = base_measure(spec);
  m.include_zero_mode = false;
  m.stiffness[ModeLayout(spec.N).zero_index()] = std::numeric_limits<double>::infinity();
  return m;
}

MeasureSpec MeasureSpec::gamma_perp_z0(const DomainSpec& spec, double z0) {
  auto m = gamma_perp0(spec);
  const double shift = 3.0 * z0 * z0 / (spec.L * spec.L);
  for (double& a : m.stiffness) a += shift;
  return m;
}

void MeasureSpec::validate() const {
  const ModeLayout layout(spec.N);
  if (stiffness.size() != layout.size()) throw DomainError("stiffness vector size mismatch");
  for (std::size_t i = 0; i < stiffness.size(); ++i) {
    if (i == layout.zero_index() && !include_zero_mode) continue;
    if (!(stiffness[i] > 0.0) || !std::isfinite(stiffness[i])) {
      throw DomainError("measure stiffness must be positive and finite");
    }
  }
}

double MeasureSpec::pointwise_variance() const {
  const ModeLayout layout(spec.N);
  CompensatedSum s;
  for (std::size_t i = 0; i < stiffness.size(); ++i) {
    if (i == layout.zero_index() && !include_zero_mode) continue;
    s += 1.0L / stiffness[i];
  }
  return static_cast<double>(s.value()) / (spec.L * spec.L);
}

void sample(const MeasureSpec& m, RandomStream& rng, FieldCoeffs& out) {
  const ModeLayout layout(m.spec.N);
  if (out.spec.N != m.spec.N || out.z.size() != layout.size()) out = FieldCoeffs(m.spec);
  out.spec = m.spec;
  const auto& idx = layout.independent_modes();
  const std::size_t zero = layout.zero_index();
  for (std::size_t i : idx) {
    if (i == zero) {
      const double g = rng.normal();
      out.z[zero] = m.include_zero_mode ? cplx{g / std::sqrt(m.stiffness[zero]), 0.0} : cplx{};
      continue;
    }
    const double sd = kInvSqrt2 / std::sqrt(m.stiffness[i]);
    const double a = rng.normal();
    const double b = rng.normal();
    const cplx v{a * sd, b * sd};
    out.z[i] = v;
    out[-layout.mode(i)] = std::conj(v);
  }
}

FieldCoeffs sample(const MeasureSpec& m, RandomStream& rng) {
  FieldCoeffs f(m.spec);
  sample(m, rng, f);
  return f;
}

McEstimate reduce_samples(std::span<const double> values, std::uint64_t seed) {
  McEstimate e;
  e.seed = seed;
  e.n = values.size();
  CompensatedSum s;
  std::size_t finite = 0;
  for (double v : values) {
    if (!std::isfinite(v)) {
      ++e.n_nonfinite;
      continue;
    }
    s += v;
    ++finite;
  }
  e.valid = e.n_nonfinite == 0 && finite > 0;
  if (finite == 0) return e;
  const long double mean = s.value() / static_cast<long double>(finite);
  CompensatedSum ss;
  for (double v : values)
    if (std::isfinite(v)) ss += (v - mean) * (v - mean);
  e.value = static_cast<double>(mean);
  if (finite > 1) {
    const long double var = ss.value() / static_cast<long double>(finite - 1);
    e.std_error = static_cast<double>(std::sqrt(var / static_cast<long double>(finite)));
  }
  return e;
}

McEstimate reduce_variance(std::span<const double> values, std::uint64_t seed) {
  const auto mean = reduce_samples(values, seed);
  McEstimate e = mean;
  if (!mean.valid || values.size() < 2) {
    e.valid = false;
    return e;
  }
  CompensatedSum s2, s4;
  for (double v : values) {
    const long double d = v - mean.value;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  const auto n = static_cast<long double>(values.size());
  const long double m2 = s2.value() / n;
  const long double m4 = s4.value() / n;
  e.value = static_cast<double>(s2.value() / (n - 1));
  e.std_error = static_cast<double>(std::sqrt(std::max(0.0L, m4 - m2 * m2) / n));
  return e;
}

std::array<double, 5> wick_integrals(SpectralGrid& grid, const FieldCoeffs& f, double C,
                                     std::vector<double>& scratch) {
  grid.to_real(f, scratch);
  long double s1 = 0.0L, s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
  for (double x : scratch) {
    const double x2 = x * x;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  const long double n = static_cast<long double>(scratch.size());
  const long double area = static_cast<long double>(f.spec.L) * f.spec.L;
  const long double w = area / n;
  const long double m1 = s1 * w, m2 = s2 * w, m3 = s3 * w, m4 = s4 * w;
  // H_2 = X^2 - C, H_3 = X^3 - 3CX, H_4 = X^4 - 6CX^2 + 3C^2, integrated.
  return {static_cast<double>(area), static_cast<double>(m1), static_cast<double>(m2 - C * area),
          static_cast<double>(m3 - 3.0L * C * m1),
          static_cast<double>(m4 - 6.0L * C * m2 + 3.0L * C * C * area)};
}

double wick_integral(const FieldCoeffs& f, int n, double C) {
  if (n < 0 || n > 4) throw DomainError("Wick integral degree must be in [0, 4]");
  SpectralGrid grid(f.spec);
  std::vector<double> scratch;
  return wick_integrals(grid, f, C, scratch)[static_cast<std::size_t>(n)];
}

namespace {

// Dense sequence on [-R, R]^2.
struct Seq2 {
  int R = 0;
  std::vector<long double> v;
  explicit Seq2(int r) : R(r), v(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1), 0.0L) {}
  long double& at(int a, int b) {
    return v[static_cast<std::size_t>(a + R) * (2 * R + 1) + static_cast<std::size_t>(b + R)];
  }
  [[nodiscard]] long double get(int a, int b) const {
    if (std::abs(a) > R || std::abs(b) > R) return 0.0L;
    return v[static_cast<std::size_t>(a + R) * (2 * R + 1) + static_cast<std::size_t>(b + R)];
  }
};

Seq2 convolve(const Seq2& x, const Seq2& y) {
  Seq2 out(x.R + y.R);
  for (int a = -x.R; a <= x.R; ++a)
    for (int b = -x.R; b <= x.R; ++b) {
      const long double xv = x.get(a, b);
      if (xv == 0.0L) continue;
      for (int c = -y.R; c <= y.R; ++c)
        for (int d = -y.R; d <= y.R; ++d) out.at(a + c, b + d) += xv * y.get(c, d);
    }
  return out;
}

}  // namespace

double covariance_sum_exact(const DomainSpec& spec, double m2, int n, int cutoff) {
  spec.validate();
  if (n < 0 || n > 4) throw DomainError("covariance degree must be in [0, 4]");
  if (cutoff < 0 || cutoff > 32) throw DomainError("covariance cutoff must be in [0, 32]");
  if (n == 0) return 0.0;
  Seq2 a(cutoff);
  for (int k1 = -cutoff; k1 <= cutoff; ++k1)
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      const double d = std::fabs(eigenvalue(spec, {k1, k2}) + m2);
      if (d == 0.0) throw DomainError("zero covariance denominator");
      a.at(k1, k2) = 1.0L / d;
    }
  long double sum = 0.0L;
  if (n == 1) {
    sum = a.get(0, 0);
  } else if (n == 2) {
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
      for (int k2 = -cutoff; k2 <= cutoff; ++k2) sum += a.get(k1, k2) * a.get(-k1, -k2);
  } else {
    const Seq2 c2 = convolve(a, a);
    const Seq2& other = n == 3 ? a : c2;
    for (int k1 = -other.R; k1 <= other.R; ++k1)
      for (int k2 = -other.R; k2 <= other.R; ++k2) sum += c2.get(k1, k2) * other.get(-k1, -k2);
  }
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  return fact * std::pow(spec.L, 4 - 2 * n) * static_cast<double>(sum);
}

NelsonReport nelson_from_values(std::span<const double> xs, int n, int p) {
  NelsonReport r;
  r.n_samples = xs.size();
  CompensatedSum m2, mp;
  for (double x : xs) {
    m2 += x * x;
    mp += std::pow(x, 2 * p);
  }
  const auto cnt = static_cast<long double>(std::max<std::size_t>(1, xs.size()));
  r.moment_2 = static_cast<double>(m2.value() / cnt);
  r.moment_2p = static_cast<double>(mp.value() / cnt);
  if (!(r.moment_2 > 0.0)) {
    r.degenerate = true;
    return r;
  }
  r.ratio = std::pow(r.moment_2p, 1.0 / (2 * p)) / std::sqrt(r.moment_2);
  r.implied_constant = r.ratio / std::pow(2.0 * p - 1.0, 0.5 * n);
  return r;
}

NelsonReport nelson_moment_check(const MeasureSpec& m, int n, int p, std::size_t n_samples,
                                 std::uint64_t seed, ExecPolicy policy) {
  if (p != 2 && p != 4 && p != 6) throw DomainError("Nelson moment order p must be 2, 4 or 6");
  if (n < 0 || n > 4) throw DomainError("Nelson check degree must be in [0, 4]");
  const double C = m.pointwise_variance();
  McOptions opt;
  opt.policy = policy;
  const auto xs = sample_table(
      m, 1,
      [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
        out[0] = wick_integrals(ws.grid, y, C, ws.real)[static_cast<std::size_t>(n)];
      },
      n_samples, seed, opt);
  if (n == 0) {
    NelsonReport r;
    r.n_samples = n_samples;
    r.degenerate = true;
    return r;
  }
  return nelson_from_values(xs, n, p);
}

}  // namespace acm
