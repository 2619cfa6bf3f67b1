#pragma once

// Torus geometry, the spectrum of -Laplacian-1, renormalisation constants and
// the regularised Eyring-Kramers prefactor.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace acm {

enum class Boundary { periodic, neumann };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& s);

/// Raised when a domain, mode or parameter violates its documented invariant.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DomainSpec {
  double L = 1.0;
  Boundary bc = Boundary::periodic;
  int N = 0;

  /// Throws DomainError unless 0 < L < 2pi (periodic) or 0 < L < pi (Neumann)
  /// and N >= 0.
  void validate() const;
  /// 2pi/L for periodic, pi/L for Neumann.
  [[nodiscard]] double wave_scale() const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct ModeIndex {
  int k1 = 0;
  int k2 = 0;
  /// Sup norm max(|k1|, |k2|).
  [[nodiscard]] int norm() const;
  [[nodiscard]] bool is_zero() const { return k1 == 0 && k2 == 0; }
  [[nodiscard]] ModeIndex operator-() const { return {-k1, -k2}; }
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

bool is_valid_mode(const DomainSpec& spec, ModeIndex k);

/// All modes with |k| <= spec.N: (2N+1)^2 of them on Z^2, (N+1)^2 on N_0^2.
std::vector<ModeIndex> enumerate_modes(const DomainSpec& spec);

/// lambda_k = c^2 (k1^2 + k2^2) - 1.
double eigenvalue(const DomainSpec& spec, ModeIndex k);
/// nu_k = lambda_k + 3.
double eigenvalue_nu(const DomainSpec& spec, ModeIndex k);

/// Dense indexing of the periodic mode square [-N,N]^2.
class ModeLayout {
 public:
  explicit ModeLayout(int N);

  [[nodiscard]] int cutoff() const { return N_; }
  [[nodiscard]] int side() const { return 2 * N_ + 1; }
  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(side()) * static_cast<std::size_t>(side());
  }
  [[nodiscard]] std::size_t index(ModeIndex k) const {
    return static_cast<std::size_t>(k.k1 + N_) * static_cast<std::size_t>(side()) +
           static_cast<std::size_t>(k.k2 + N_);
  }
  [[nodiscard]] ModeIndex mode(std::size_t i) const {
    const int s = side();
    return {static_cast<int>(i / s) - N_, static_cast<int>(i % s) - N_};
  }
  [[nodiscard]] std::size_t zero_index() const { return index({0, 0}); }
  /// Representatives of {k, -k} pairs with k != 0: k1 > 0, or k1 == 0 and k2 > 0.
  [[nodiscard]] static bool is_positive_half(ModeIndex k) {
    return k.k1 > 0 || (k.k1 == 0 && k.k2 > 0);
  }
  /// Indices of the zero mode followed by all positive-half modes, in a fixed
  /// order shared by every sampler and integrator.
  [[nodiscard]] const std::vector<std::size_t>& independent_modes() const {
    return independent_;
  }

 private:
  int N_;
  std::vector<std::size_t> independent_;
};

struct SpectralConstants {
  double C_N = 0.0;
  double C_N_perp = 0.0;
  double C_N_plus = 0.0;
  /// C_N - C_N_plus, including the k=0 term 1/(L^2 |lambda_0|) of C_N.
  double delta_C = 0.0;
  /// Pointwise variance of the gamma_plus field, zero mode included:
  /// C_N_plus + 1/(2 L^2).
  double C_gamma_plus = 0.0;
};

/// All sums accumulated with compensated long-double summation.
SpectralConstants renorm_constants(const DomainSpec& spec);

/// Eigenvalues and constants for one periodic domain, laid out like FieldCoeffs.
struct ModeTable {
  DomainSpec spec;
  ModeLayout layout;
  std::vector<double> lambda;
  SpectralConstants constants;

  explicit ModeTable(const DomainSpec& spec);
  [[nodiscard]] double lambda0() const { return lambda[layout.zero_index()]; }
};

struct PrefactorResult {
  double prefactor = 0.0;
  double log_prefactor = 0.0;
  /// Upper bound on sum_{|k|>K} [x_k - log(1+x_k)], x_k = 3/lambda_k, i.e. on
  /// the log of the omitted factors under the square root.
  double tail_bound = 0.0;
  /// Bound on the relative truncation error of the prefactor, e^{tail/2} - 1.
  double relative_error_bound = 0.0;
  int cutoff = 0;
};

/// 2 pi [ e^{3/|l0|} / (|l0|(l0+3)) prod_{0<|k|<=K} e^{3/l_k}/(1+3/l_k) ]^{1/2}.
/// spec.N is ignored; the product runs to `cutoff`.
PrefactorResult ek_prefactor(const DomainSpec& spec, int cutoff);

/// Doubles the cutoff until tail_bound < tol. Throws
/// std::runtime_error if max_cutoff is reached first.
PrefactorResult ek_prefactor_limit(const DomainSpec& spec, double tol = 1e-8,
                                   int max_cutoff = 4096);

/// Integral-comparison bound on (1/2) sum_{|k|>K} (3/lambda_k)^2.
double prefactor_tail_bound(const DomainSpec& spec, int cutoff);

/// Explicit (1/2) sum_{K<|k|<=K_hi} (3/lambda_k)^2, for checking the bound.
double prefactor_tail_explicit(const DomainSpec& spec, int cutoff, int cutoff_hi);

struct Det2Result {
  double det2 = 1.0;
  double raw_product = 1.0;
  double log_det2 = 0.0;
  double log_raw = 0.0;
  /// Tr T restricted to 0 < |k| <= K.
  double trace = 0.0;
};

/// Carleman-Fredholm and plain Fredholm determinants of Id + 3|(-Delta-1)^{-1}|
/// restricted to 0 < |k| <= K (diagonal in the Fourier basis).
Det2Result det2_diagonal(const DomainSpec& spec, int cutoff);

}  // namespace acm
