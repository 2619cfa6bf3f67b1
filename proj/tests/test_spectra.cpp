#include <doctest.h>

#include <cmath>

#include "acm/numeric.hpp"
#include "acm/spectra.hpp"

using namespace acm;

namespace {

// Independent lattice sum of 1/lambda over 0 < |k| <= N, periodic.
double inverse_sum(double L, int N, double shift) {
  const double c2 = std::pow(kTwoPi / L, 2);
  double s = 0.0;
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      if (a != 0 || b != 0) s += 1.0 / (c2 * (a * a + b * b) - 1.0 + shift);
  return s;
}

}  // namespace

TEST_CASE("eigenvalues at reference modes") {
  CHECK(eigenvalue({2.0, Boundary::periodic, 3}, {0, 0}) == -1.0);
  CHECK(eigenvalue_nu({2.0, Boundary::periodic, 3}, {0, 0}) == 2.0);
  CHECK(eigenvalue({kPi, Boundary::periodic, 2}, {1, 0}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eigenvalue({kPi / 2, Boundary::neumann, 2}, {1, 1}) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("eigenvalues are even and nu - lambda = 3") {
  const DomainSpec spec{1.3, Boundary::periodic, 5};
  for (const auto& k : enumerate_modes(spec)) {
    CHECK(eigenvalue(spec, k) == eigenvalue(spec, -k));
    CHECK(eigenvalue_nu(spec, k) - eigenvalue(spec, k) == doctest::Approx(3.0).epsilon(1e-14));
  }
}

TEST_CASE("domain validation rejects invalid sizes") {
  CHECK_THROWS_AS((DomainSpec{7.0, Boundary::periodic, 1}.validate()), DomainError);
  CHECK_THROWS_AS((DomainSpec{3.5, Boundary::neumann, 1}.validate()), DomainError);
  CHECK_THROWS_AS((DomainSpec{1.0, Boundary::periodic, -1}.validate()), DomainError);
  CHECK_THROWS_AS((DomainSpec{0.0, Boundary::periodic, 1}.validate()), DomainError);
  CHECK_NOTHROW((DomainSpec{3.0, Boundary::neumann, 2}.validate()));
}

TEST_CASE("mode enumeration counts") {
  CHECK(enumerate_modes({1.0, Boundary::periodic, 3}).size() == 49);
  CHECK(enumerate_modes({1.0, Boundary::neumann, 3}).size() == 16);
  CHECK(is_valid_mode({1.0, Boundary::periodic, 2}, {-2, 1}));
  CHECK_FALSE(is_valid_mode({1.0, Boundary::neumann, 2}, {-1, 1}));
}

TEST_CASE("mode layout indexing round trip and independent set") {
  const ModeLayout lay(3);
  for (std::size_t i = 0; i < lay.size(); ++i) CHECK(lay.index(lay.mode(i)) == i);
  const auto& ind = lay.independent_modes();
  CHECK(ind.size() == (lay.size() + 1) / 2);
  CHECK(ind.front() == lay.zero_index());
}

TEST_CASE("constants at N = 0") {
  for (double L : {0.5, 1.0, 3.0}) {
    const auto c = renorm_constants({L, Boundary::periodic, 0});
    CHECK(c.C_N == doctest::Approx(1.0 / (L * L)).epsilon(1e-15));
    CHECK(c.C_N_perp == 0.0);
    CHECK(c.C_N_plus == 0.0);
  }
}

TEST_CASE("C_1 at L = pi against the explicit nine-term sum") {
  const auto c = renorm_constants({kPi, Boundary::periodic, 1});
  const double oracle = (1.0 + inverse_sum(kPi, 1, 0.0)) / (kPi * kPi);
  CHECK(oracle == doctest::Approx(0.29431).epsilon(1e-4));
  CHECK(c.C_N == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("constants match direct lattice sums") {
  for (double L : {1.0, 2.5}) {
    for (int N : {1, 4, 9}) {
      const auto c = renorm_constants({L, Boundary::periodic, N});
      const double L2 = L * L;
      CHECK(c.C_N_perp == doctest::Approx(inverse_sum(L, N, 0.0) / L2).epsilon(1e-13));
      CHECK(c.C_N_plus == doctest::Approx(inverse_sum(L, N, 3.0) / L2).epsilon(1e-13));
      CHECK(c.C_N - c.C_N_perp == doctest::Approx(1.0 / L2).epsilon(1e-13));
      CHECK(c.delta_C == doctest::Approx(c.C_N - c.C_N_plus).epsilon(1e-14));
      CHECK(c.C_gamma_plus == doctest::Approx(c.C_N_plus + 0.5 / L2).epsilon(1e-14));
    }
  }
}

TEST_CASE("C_N grows by log 2 / (2 pi) per doubling") {
  for (double L : {1.0, 3.0}) {
    const double c64 = renorm_constants({L, Boundary::periodic, 64}).C_N;
    const double c128 = renorm_constants({L, Boundary::periodic, 128}).C_N;
    CHECK(c128 - c64 == doctest::Approx(std::log(2.0) / kTwoPi).epsilon(0.02));
  }
}

TEST_CASE("delta_C is increasing with vanishing increments") {
  double prev = 0.0, prev_inc = INFINITY;
  for (int N : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
    const double d = renorm_constants({1.0, Boundary::periodic, N}).delta_C;
    if (N > 1) {
      const double inc = d - prev;
      CHECK(inc > 0.0);
      CHECK(inc < prev_inc);
      prev_inc = inc;
    }
    prev = d;
  }
  CHECK(prev_inc < 1e-5);
}

TEST_CASE("prefactor with only the zero mode") {
  const auto p = ek_prefactor({1.0, Boundary::periodic, 0}, 0);
  CHECK(p.prefactor == doctest::Approx(kTwoPi * std::sqrt(std::exp(3.0) / 2.0)).epsilon(1e-14));
  CHECK(p.prefactor == doctest::Approx(19.9117).epsilon(1e-5));
}

TEST_CASE("prefactor matches an explicit product at small cutoff") {
  const DomainSpec spec{1.7, Boundary::periodic, 0};
  const double c2 = std::pow(kTwoPi / spec.L, 2);
  double prod = std::exp(3.0) / 2.0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      if (a == 0 && b == 0) continue;
      const double x = 3.0 / (c2 * (a * a + b * b) - 1.0);
      prod *= std::exp(x) / (1.0 + x);
    }
  CHECK(ek_prefactor(spec, 3).prefactor == doctest::Approx(kTwoPi * std::sqrt(prod)).epsilon(1e-13));
}

TEST_CASE("prefactor converges at L = 1") {
  const DomainSpec spec{1.0, Boundary::periodic, 0};
  const auto p64 = ek_prefactor(spec, 64);
  const auto p128 = ek_prefactor(spec, 128);
  CHECK(std::fabs(p128.prefactor / p64.prefactor - 1.0) < 1e-6);
  const auto lim = ek_prefactor_limit(spec, 1e-8);
  CHECK(lim.tail_bound < 1e-8);
  const auto finer = ek_prefactor(spec, 2 * lim.cutoff);
  CHECK(std::fabs(finer.prefactor / lim.prefactor - 1.0) <= lim.relative_error_bound);
  CHECK_THROWS(ek_prefactor_limit(spec, 1e-30, 64));
}

TEST_CASE("tail bound dominates the explicit tail") {
  for (double L : {1.0, 4.0})
    for (int K : {2, 4, 8, 16, 32}) {
      const DomainSpec spec{L, Boundary::periodic, 0};
      CHECK(prefactor_tail_explicit(spec, K, 4 * K) <= prefactor_tail_bound(spec, K));
    }
  const DomainSpec neu{1.0, Boundary::neumann, 0};
  CHECK(prefactor_tail_explicit(neu, 8, 32) <= prefactor_tail_bound(neu, 8));
}

TEST_CASE("det2 identities") {
  const DomainSpec spec{1.0, Boundary::periodic, 0};
  const auto d0 = det2_diagonal(spec, 0);
  CHECK(d0.det2 == 1.0);
  CHECK(d0.raw_product == 1.0);
  for (int K : {1, 5, 20}) {
    const auto d = det2_diagonal(spec, K);
    CHECK(d.log_det2 + d.trace == doctest::Approx(d.log_raw).epsilon(1e-13));
    CHECK(d.trace == doctest::Approx(3.0 * inverse_sum(1.0, K, 0.0)).epsilon(1e-13));
  }
}

TEST_CASE("raw product log-slope follows 3 L^2 / (2 pi)") {
  for (double L : {kPi * std::sqrt(2.0), 1.0, 2.0}) {
    const DomainSpec spec{L, Boundary::periodic, 0};
    const double expected = 3.0 * L * L / kTwoPi;
    const double l32 = det2_diagonal(spec, 32).log_raw;
    const double l64 = det2_diagonal(spec, 64).log_raw;
    const double l128 = det2_diagonal(spec, 128).log_raw;
    CHECK((l64 - l32) / std::log(2.0) == doctest::Approx(expected).epsilon(0.15));
    CHECK((l128 - l64) / std::log(2.0) == doctest::Approx(expected).epsilon(0.15));
  }
}
