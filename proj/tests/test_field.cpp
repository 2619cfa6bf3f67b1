#include <doctest.h>

#include <cmath>

#include "acm/field.hpp"
#include "acm/numeric.hpp"
#include "acm/rng.hpp"

using namespace acm;

namespace {

FieldCoeffs random_field(const DomainSpec& spec, std::uint64_t seed) {
  FieldCoeffs f(spec);
  RandomStream rng(seed, 0);
  const ModeLayout lay(spec.N);
  for (std::size_t i : lay.independent_modes()) {
    const ModeIndex k = lay.mode(i);
    f[k] = k.is_zero() ? cplx(rng.normal(), 0.0) : cplx(rng.normal(), rng.normal());
    f[-k] = std::conj(f[k]);
  }
  return f;
}

}  // namespace

TEST_CASE("grid sizes") {
  CHECK(padded_size(0) == 3);
  CHECK(padded_size(1) == 10);
  CHECK(padded_size(2) == 16);
  CHECK(padded_size(4) == 32);
  CHECK(padded_size(8) == 64);
  CHECK(padded_size(16) == 128);
  for (int N = 0; N <= 64; ++N) {
    const int M = padded_size(N);
    CHECK(M >= 3 * (2 * N + 1));
    CHECK(M > 4 * N);
  }
  CHECK(fft_friendly_size(11) == 12);
  CHECK(fft_friendly_size(13) == 14);
  CHECK(fft_friendly_size(17) == 18);
  CHECK(fft_friendly_size(1) == 1);
  CHECK_THROWS_AS(SpectralGrid({1.0, Boundary::periodic, 4}, 8), DomainError);
}

TEST_CASE("constant field synthesis") {
  const DomainSpec spec{2.0, Boundary::periodic, 3};
  const auto f = FieldCoeffs::constant(spec, 0.7);
  CHECK(f.z0() == doctest::Approx(1.4));
  CHECK(f.mean() == doctest::Approx(0.7));
  SpectralGrid grid(spec);
  for (double v : grid.to_real(f).values) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("cosine field synthesis") {
  const double L = 1.5;
  const DomainSpec spec{L, Boundary::periodic, 2};
  FieldCoeffs f(spec);
  f[{1, 0}] = L / 2;
  f[{-1, 0}] = L / 2;
  SpectralGrid grid(spec);
  const auto r = grid.to_real(f);
  const int M = r.M;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      CHECK(r.values[i * M + j] == doctest::Approx(std::cos(kTwoPi * i / M)).epsilon(1e-13));
}

TEST_CASE("synthesis and projection round trip") {
  for (int N : {0, 1, 3, 6}) {
    const DomainSpec spec{1.0, Boundary::periodic, N};
    const auto f = random_field(spec, 100 + N);
    for (int M : {0, 2 * N + 1, 4 * N + 3}) {
      SpectralGrid grid(spec, M);
      const auto back = grid.from_real(grid.to_real(f));
      for (std::size_t i = 0; i < f.z.size(); ++i) CHECK(std::abs(back.z[i] - f.z[i]) < 1e-12);
    }
  }
}

TEST_CASE("Parseval on the padded grid") {
  const DomainSpec spec{1.3, Boundary::periodic, 4};
  const auto f = random_field(spec, 7);
  SpectralGrid grid(spec);
  const auto r = grid.to_real(f);
  const double integral = grid.integrate(r.values, [](double v) { return v * v; });
  CHECK(integral == doctest::Approx(l2_norm_sq(f)).epsilon(1e-12));
}

TEST_CASE("cubic of a constant") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  SpectralGrid grid(spec);
  const auto c = grid.cubic_projected(FieldCoeffs::constant(spec, -0.6));
  CHECK(c.mean() == doctest::Approx(-0.216).epsilon(1e-13));
  double rest = 0.0;
  for (std::size_t i = 0; i < c.z.size(); ++i)
    if (i != ModeLayout(2).zero_index()) rest = std::max(rest, std::abs(c.z[i]));
  CHECK(rest < 1e-14);
}

TEST_CASE("cubic of a cosine: cos^3 = (3 cos + cos 3x) / 4") {
  const double L = 1.0;
  for (int N : {1, 3}) {
    const DomainSpec spec{L, Boundary::periodic, N};
    FieldCoeffs f(spec);
    f[{1, 0}] = L / 2;
    f[{-1, 0}] = L / 2;
    SpectralGrid grid(spec);
    const auto c = grid.cubic_projected(f);
    CHECK(c[{1, 0}].real() == doctest::Approx(3.0 * L / 8).epsilon(1e-13));
    CHECK(c[{-1, 0}].real() == doctest::Approx(3.0 * L / 8).epsilon(1e-13));
    if (N >= 3) CHECK(c[{3, 0}].real() == doctest::Approx(L / 8).epsilon(1e-13));
    CHECK(std::abs(c[{0, 0}]) < 1e-14);
  }
}

TEST_CASE("FFT cubic agrees with direct convolution") {
  for (int N : {0, 1, 2, 3}) {
    const DomainSpec spec{0.9, Boundary::periodic, N};
    const auto f = random_field(spec, 200 + N);
    SpectralGrid grid(spec);
    const auto fast = grid.cubic_projected(f);
    const auto slow = cubic_projected_direct(f);
    double scale = 1.0;
    for (const auto& z : slow.z) scale = std::max(scale, std::abs(z));
    for (std::size_t i = 0; i < f.z.size(); ++i) CHECK(std::abs(fast.z[i] - slow.z[i]) < 1e-12 * scale);
    CHECK(reality_defect(fast) < 1e-12 * scale);
  }
}

TEST_CASE("mean and fluctuation split") {
  const DomainSpec spec{1.7, Boundary::periodic, 3};
  const auto f = random_field(spec, 9);
  const auto s = decompose(f);
  CHECK(s.mean == doctest::Approx(f.z0() / 1.7));
  CHECK(s.fluct.z0() == 0.0);
  const auto back = recompose(s.mean, s.fluct);
  for (std::size_t i = 0; i < f.z.size(); ++i) CHECK(std::abs(back.z[i] - f.z[i]) < 1e-14);
}

TEST_CASE("reality and symmetrisation") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  auto f = random_field(spec, 3);
  CHECK(reality_defect(f) == 0.0);
  f[{1, 1}] += cplx(0.0, 0.5);
  f[{0, 0}] += cplx(0.0, 0.25);
  CHECK(reality_defect(f) >= 0.25);
  symmetrise(f);
  CHECK(reality_defect(f) == 0.0);
}

TEST_CASE("Sobolev weights and norms") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  CHECK(SobolevParams{-1.0}.weight(spec, {1, 0}) == doctest::Approx(1.0 / (1.0 + 4.0 * kPi * kPi)));
  CHECK(SobolevParams{-0.5}.weight(spec, {1, 1}) ==
        doctest::Approx(1.0 / std::sqrt(1.0 + 8.0 * kPi * kPi)));
  CHECK(SobolevParams{-0.25}.weight(spec, {0, 0}) == 1.0);
  CHECK_THROWS_AS((void)SobolevParams{0.5}.weight(spec, {1, 0}), DomainError);
  const auto f = random_field(spec, 4);
  CHECK(sobolev_norm_sq(f, SobolevParams{0.0}) == doctest::Approx(l2_norm_sq(f)).epsilon(1e-14));
  const double n1 = sobolev_norm(f, SobolevParams{-0.25});
  const double n2 = sobolev_norm(f, SobolevParams{-1.0});
  CHECK(n2 < n1);
  CHECK(n1 < std::sqrt(l2_norm_sq(f)));
  const auto w = SobolevParams{-0.25}.weights(spec);
  CHECK(sobolev_norm_sq(f, w) == doctest::Approx(n1 * n1).epsilon(1e-14));
}
