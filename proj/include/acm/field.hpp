#pragma once

// Galerkin field in the basis e_k(x) = L^{-1} exp(i (2pi/L) k.x), |k| <= N,
// and its collocation values on a uniform M x M grid with a node at x = 0.

#include <complex>
#include <cstddef>
#include <vector>

#include "acm/spectra.hpp"

namespace acm {

using cplx = std::complex<double>;

struct FieldCoeffs {
  DomainSpec spec;
  /// Indexed by ModeLayout(spec.N).
  std::vector<cplx> z;

  FieldCoeffs() = default;
  explicit FieldCoeffs(const DomainSpec& s);

  [[nodiscard]] int cutoff() const { return spec.N; }
  [[nodiscard]] std::size_t index(ModeIndex k) const {
    const int side = 2 * spec.N + 1;
    return static_cast<std::size_t>(k.k1 + spec.N) * static_cast<std::size_t>(side) +
           static_cast<std::size_t>(k.k2 + spec.N);
  }
  [[nodiscard]] cplx& operator[](ModeIndex k) { return z[index(k)]; }
  [[nodiscard]] const cplx& operator[](ModeIndex k) const { return z[index(k)]; }
  [[nodiscard]] double z0() const { return z[index({0, 0})].real(); }
  /// Spatial mean z_0 / L.
  [[nodiscard]] double mean() const { return z0() / spec.L; }

  /// Constant field phi = value.
  static FieldCoeffs constant(const DomainSpec& s, double value);
};

/// max_k |z_{-k} - conj(z_k)|, including |Im z_0|.
double reality_defect(const FieldCoeffs& f);

/// Overwrites z_{-k} with conj(z_k) for the positive half and zeroes Im z_0.
void symmetrise(FieldCoeffs& f);

/// sum_k |z_k|^2, equal to the L^2 norm squared of the field.
double l2_norm_sq(const FieldCoeffs& f);

struct RealField {
  int M = 0;
  double L = 1.0;
  /// Row-major samples phi(i L/M, j L/M).
  std::vector<double> values;
};

/// Smallest M >= min_size whose prime factors are all in {2, 3, 5, 7}.
int fft_friendly_size(int min_size);

/// Smallest M >= 3(2N+1) of the form 2^a, 3*2^a or 5*2^a; products up to
/// degree four are alias-free at this size.
int padded_size(int N);

/// FFTW-backed transforms for one (N, L, M). Not shareable across threads;
/// each worker constructs its own instance.
class SpectralGrid {
 public:
  /// M = 0 selects padded_size(spec.N). Throws DomainError if M < 2N+1.
  explicit SpectralGrid(const DomainSpec& spec, int M = 0);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  [[nodiscard]] int resolution() const { return M_; }
  [[nodiscard]] const DomainSpec& spec() const { return spec_; }
  /// Quadrature weight L^2 / M^2 of one collocation node.
  [[nodiscard]] double cell_area() const { return spec_.L * spec_.L / (double(M_) * M_); }

  /// Synthesises the field into `out` (size M*M, row-major).
  void to_real(const FieldCoeffs& f, std::vector<double>& out);
  [[nodiscard]] RealField to_real(const FieldCoeffs& f);
  /// Projects grid values onto |k| <= N.
  void from_real(const std::vector<double>& values, FieldCoeffs& out);
  [[nodiscard]] FieldCoeffs from_real(const RealField& r);

  /// Coefficients of P_N(phi^3); exact when M >= 4N+1.
  void cubic_projected(const FieldCoeffs& f, FieldCoeffs& out);
  [[nodiscard]] FieldCoeffs cubic_projected(const FieldCoeffs& f);

  /// (L^2/M^2) sum_j g(values_j).
  template <class G>
  double integrate(const std::vector<double>& values, G&& g) const;

 private:
  DomainSpec spec_;
  int M_;
  int half_;
  double* real_ = nullptr;
  cplx* spec_buf_ = nullptr;
  void* plan_c2r_ = nullptr;
  void* plan_r2c_ = nullptr;
  std::vector<double> scratch_;
};

/// Cubic P_N(phi^3) by direct triple convolution, O(N^6). Test oracle.
FieldCoeffs cubic_projected_direct(const FieldCoeffs& f);

struct SplitField {
  double mean = 0.0;
  FieldCoeffs fluct;
};

SplitField decompose(const FieldCoeffs& f);
FieldCoeffs recompose(double mean, const FieldCoeffs& fluct);

struct SobolevParams {
  double s = -0.25;
  /// (1 + (2pi/L)^2 |k|_2^2)^s. Throws DomainError if s > 0.
  [[nodiscard]] double weight(const DomainSpec& spec, ModeIndex k) const;
  /// Weights laid out like FieldCoeffs::z.
  [[nodiscard]] std::vector<double> weights(const DomainSpec& spec) const;
};

/// sum_k w_k |z_k|^2.
double sobolev_norm_sq(const FieldCoeffs& f, const SobolevParams& p);
double sobolev_norm(const FieldCoeffs& f, const SobolevParams& p);
/// Same with precomputed weights.
double sobolev_norm_sq(const FieldCoeffs& f, const std::vector<double>& weights);

template <class G>
double SpectralGrid::integrate(const std::vector<double>& values, G&& g) const {
  double s = 0.0;
  for (double v : values) s += g(v);
  return s * cell_area();
}

}  // namespace acm
