#include "acm/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "acm/numeric.hpp"

namespace acm {

namespace {

// The FFTW planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FieldCoeffs::FieldCoeffs(const DomainSpec& s) : spec(s) {
  spec.validate();
  const auto side = static_cast<std::size_t>(2 * spec.N + 1);
  z.assign(side * side, cplx{0.0, 0.0});
}

FieldCoeffs FieldCoeffs::constant(const DomainSpec& s, double value) {
  FieldCoeffs f(s);
  f[{0, 0}] = value * s.L;
  return f;
}

double reality_defect(const FieldCoeffs& f) {
  const int N = f.spec.N;
  double worst = std::fabs(f.z[f.index({0, 0})].imag());
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      worst = std::max(worst, std::abs(f[{-a, -b}] - std::conj(f[{a, b}])));
  return worst;
}

void symmetrise(FieldCoeffs& f) {
  const int N = f.spec.N;
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      if (ModeLayout::is_positive_half({a, b})) f[{-a, -b}] = std::conj(f[{a, b}]);
  auto& z0 = f.z[f.index({0, 0})];
  z0 = {z0.real(), 0.0};
}

double l2_norm_sq(const FieldCoeffs& f) {
  CompensatedSum s;
  for (const auto& v : f.z) s += std::norm(v);
  return static_cast<double>(s.value());
}

int fft_friendly_size(int min_size) {
  for (int m = std::max(1, min_size);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

int padded_size(int N) {
  const int need = 3 * (2 * N + 1);
  int best = 0;
  for (int p : {1, 3, 5}) {
    int m = p;
    while (m < need) m *= 2;
    if (best == 0 || m < best) best = m;
  }
  return best;
}

SpectralGrid::SpectralGrid(const DomainSpec& spec, int M) : spec_(spec) {
  spec_.validate();
  if (spec_.bc != Boundary::periodic) throw DomainError("grid transforms require periodic boundary");
  M_ = M == 0 ? padded_size(spec_.N) : M;
  if (M_ < 2 * spec_.N + 1) {
    throw DomainError("resolution M=" + std::to_string(M_) + " below 2N+1=" +
                      std::to_string(2 * spec_.N + 1));
  }
  half_ = M_ / 2 + 1;
  const auto nr = static_cast<std::size_t>(M_) * M_;
  const auto nc = static_cast<std::size_t>(M_) * half_;
  real_ = fftw_alloc_real(nr);
  spec_buf_ = reinterpret_cast<cplx*>(fftw_alloc_complex(nc));
  std::lock_guard lock(planner_mutex());
  plan_c2r_ = fftw_plan_dft_c2r_2d(M_, M_, reinterpret_cast<fftw_complex*>(spec_buf_), real_,
                                   FFTW_ESTIMATE);
  plan_r2c_ = fftw_plan_dft_r2c_2d(M_, M_, real_, reinterpret_cast<fftw_complex*>(spec_buf_),
                                   FFTW_ESTIMATE);
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  fftw_free(real_);
  fftw_free(spec_buf_);
}

void SpectralGrid::to_real(const FieldCoeffs& f, std::vector<double>& out) {
  const int N = spec_.N;
  if (f.spec.N != N) throw DomainError("field cutoff does not match grid");
  const auto nc = static_cast<std::size_t>(M_) * half_;
  std::fill(spec_buf_, spec_buf_ + nc, cplx{0.0, 0.0});
  const double inv_L = 1.0 / spec_.L;
  for (int a = -N; a <= N; ++a) {
    const int row = (a + M_) % M_;
    for (int b = 0; b <= N; ++b) spec_buf_[static_cast<std::size_t>(row) * half_ + b] = f[{a, b}] * inv_L;
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_), reinterpret_cast<fftw_complex*>(spec_buf_),
                       real_);
  out.assign(real_, real_ + static_cast<std::size_t>(M_) * M_);
}

RealField SpectralGrid::to_real(const FieldCoeffs& f) {
  RealField r{M_, spec_.L, {}};
  to_real(f, r.values);
  return r;
}

void SpectralGrid::from_real(const std::vector<double>& values, FieldCoeffs& out) {
  const int N = spec_.N;
  const auto nr = static_cast<std::size_t>(M_) * M_;
  if (values.size() != nr) throw DomainError("grid size mismatch");
  std::copy(values.begin(), values.end(), real_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), real_,
                       reinterpret_cast<fftw_complex*>(spec_buf_));
  if (out.spec.N != N || out.z.size() != static_cast<std::size_t>((2 * N + 1) * (2 * N + 1))) {
    out = FieldCoeffs(spec_);
  }
  const double scale = spec_.L / (double(M_) * M_);
  for (int a = -N; a <= N; ++a) {
    const int row = (a + M_) % M_;
    for (int b = 0; b <= N; ++b) {
      const cplx v = spec_buf_[static_cast<std::size_t>(row) * half_ + b] * scale;
      out[{a, b}] = v;
      if (b > 0) out[{-a, -b}] = std::conj(v);
    }
  }
  auto& z0 = out.z[out.index({0, 0})];
  z0 = {z0.real(), 0.0};
}

FieldCoeffs SpectralGrid::from_real(const RealField& r) {
  if (r.M != M_) throw DomainError("grid resolution mismatch");
  FieldCoeffs out(spec_);
  from_real(r.values, out);
  return out;
}

void SpectralGrid::cubic_projected(const FieldCoeffs& f, FieldCoeffs& out) {
  to_real(f, scratch_);
  for (double& v : scratch_) v = v * v * v;
  from_real(scratch_, out);
}

FieldCoeffs SpectralGrid::cubic_projected(const FieldCoeffs& f) {
  FieldCoeffs out(spec_);
  cubic_projected(f, out);
  return out;
}

FieldCoeffs cubic_projected_direct(const FieldCoeffs& f) {
  const int N = f.spec.N;
  const double inv_L2 = 1.0 / (f.spec.L * f.spec.L);
  FieldCoeffs out(f.spec);
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b) {
      std::complex<long double> acc{0.0L, 0.0L};
      for (int a1 = -N; a1 <= N; ++a1)
        for (int b1 = -N; b1 <= N; ++b1)
          for (int a2 = -N; a2 <= N; ++a2)
            for (int b2 = -N; b2 <= N; ++b2) {
              const int a3 = a - a1 - a2;
              const int b3 = b - b1 - b2;
              if (std::abs(a3) > N || std::abs(b3) > N) continue;
              const cplx p = f[{a1, b1}] * f[{a2, b2}] * f[{a3, b3}];
              acc += std::complex<long double>(p.real(), p.imag());
            }
      out[{a, b}] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag())) * inv_L2;
    }
  return out;
}

SplitField decompose(const FieldCoeffs& f) {
  SplitField s{f.mean(), f};
  s.fluct[{0, 0}] = 0.0;
  return s;
}

FieldCoeffs recompose(double mean, const FieldCoeffs& fluct) {
  if (fluct.z0() != 0.0) throw DomainError("fluctuation has nonzero mean");
  FieldCoeffs f = fluct;
  f[{0, 0}] = mean * f.spec.L;
  return f;
}

double SobolevParams::weight(const DomainSpec& spec, ModeIndex k) const {
  if (s > 0.0) throw DomainError("Sobolev order must be nonpositive");
  const double c = kTwoPi / spec.L;
  const double n2 = static_cast<double>(k.k1) * k.k1 + static_cast<double>(k.k2) * k.k2;
  return std::pow(1.0 + c * c * n2, s);
}

std::vector<double> SobolevParams::weights(const DomainSpec& spec) const {
  const ModeLayout layout(spec.N);
  std::vector<double> w(layout.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weight(spec, layout.mode(i));
  return w;
}

double sobolev_norm_sq(const FieldCoeffs& f, const std::vector<double>& weights) {
  if (weights.size() != f.z.size()) throw DomainError("weight vector size mismatch");
  CompensatedSum s;
  for (std::size_t i = 0; i < f.z.size(); ++i) s += weights[i] * std::norm(f.z[i]);
  return static_cast<double>(s.value());
}

double sobolev_norm_sq(const FieldCoeffs& f, const SobolevParams& p) {
  return sobolev_norm_sq(f, p.weights(f.spec));
}

double sobolev_norm(const FieldCoeffs& f, const SobolevParams& p) {
  return std::sqrt(sobolev_norm_sq(f, p));
}

}  // namespace acm
