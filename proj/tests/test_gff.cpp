#include <doctest.h>

#include <cmath>
#include <limits>

#include "acm/gff.hpp"
#include "acm/wick.hpp"

using namespace acm;

TEST_CASE("pointwise variance of gamma is C_N") {
  for (int N : {0, 2, 5}) {
    const DomainSpec spec{1.2, Boundary::periodic, N};
    CHECK(MeasureSpec::gamma(spec).pointwise_variance() ==
          doctest::Approx(renorm_constants(spec).C_N).epsilon(1e-13));
    CHECK(MeasureSpec::gamma_perp0(spec).pointwise_variance() ==
          doctest::Approx(renorm_constants(spec).C_N_perp).epsilon(1e-13));
  }
}

TEST_CASE("measure validation") {
  auto m = MeasureSpec::gamma({1.0, Boundary::periodic, 2});
  m.stiffness[3] = -1.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  CHECK_NOTHROW(MeasureSpec::gamma_perp_z0({1.0, Boundary::periodic, 2}, 0.3).validate());
}

TEST_CASE("sampled fields are real and perp draws have no zero mode") {
  const DomainSpec spec{1.0, Boundary::periodic, 3};
  RandomStream rng(5, 0);
  for (int t = 0; t < 50; ++t) {
    CHECK(reality_defect(sample(MeasureSpec::gamma(spec), rng)) == 0.0);
    const auto p = sample(MeasureSpec::gamma_perp0(spec), rng);
    CHECK(reality_defect(p) == 0.0);
    CHECK(p.z0() == 0.0);
  }
}

TEST_CASE("per-mode variances are 1 / a_k") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  const auto m = MeasureSpec::gamma_plus(spec);
  const ModeLayout lay(2);
  const auto& ind = lay.independent_modes();
  const std::size_t n = 20000;
  const auto table = sample_table(
      m, ind.size(),
      [&](const FieldCoeffs& y, GffWorkspace&, double* out) {
        for (std::size_t j = 0; j < ind.size(); ++j) out[j] = std::norm(y.z[ind[j]]);
      },
      n, 77);
  for (std::size_t j = 0; j < ind.size(); ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = table[i * ind.size() + j];
    const auto e = reduce_samples(col, 77);
    CHECK(std::fabs(e.value - 1.0 / m.stiffness[ind[j]]) < 5.0 * e.std_error);
  }
}

TEST_CASE("E[phi(x)^2] matches the pointwise variance") {
  const DomainSpec spec{1.0, Boundary::periodic, 4};
  const auto m = MeasureSpec::gamma(spec);
  const auto e = expect_functional(
      m,
      [](const FieldCoeffs& y, GffWorkspace& ws) {
        ws.grid.to_real(y, ws.real);
        return ws.real[0] * ws.real[0];
      },
      20000, 31);
  CHECK(std::fabs(e.value - renorm_constants(spec).C_N) < 5.0 * e.std_error);
}

TEST_CASE("N = 0 gamma is a unit Gaussian zero mode") {
  const DomainSpec spec{1.0, Boundary::periodic, 0};
  const auto m = MeasureSpec::gamma(spec);
  const auto e = expect_functional(m, [](const FieldCoeffs& y, GffWorkspace&) { return y.z0() * y.z0(); },
                                   40000, 3);
  CHECK(std::fabs(e.value - 1.0) < 5.0 * e.std_error);
}

TEST_CASE("Wick integrals of constant fields") {
  const double L = 1.5;
  const DomainSpec spec{L, Boundary::periodic, 2};
  const auto f = FieldCoeffs::constant(spec, 0.8);
  for (int n = 0; n <= 4; ++n)
    CHECK(wick_integral(f, n, 0.3) == doctest::Approx(L * L * hermite(n, 0.8, 0.3)).epsilon(1e-13));
  CHECK_THROWS_AS(wick_integral(f, 5, 0.3), DomainError);
}

TEST_CASE("Wick integrals have zero mean") {
  const DomainSpec spec{1.0, Boundary::periodic, 3};
  const auto m = MeasureSpec::gamma(spec);
  const double C = m.pointwise_variance();
  for (int n = 1; n <= 4; ++n) {
    const auto e = expect_functional(
        m,
        [&](const FieldCoeffs& y, GffWorkspace& ws) { return wick_integrals(ws.grid, y, C, ws.real)[n]; },
        20000, 40 + n);
    CHECK(std::fabs(e.value) < 5.0 * e.std_error);
  }
}

TEST_CASE("exact Wick covariance sums") {
  CHECK(covariance_sum_exact({1.0, Boundary::periodic, 0}, 0.0, 2, 0) == doctest::Approx(2.0));
  // n = 2: 2 L^0 sum_k 1/lambda_k^2 by direct loop.
  const DomainSpec spec{1.0, Boundary::periodic, 3};
  double s = 0.0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      const double lam = std::fabs(eigenvalue(spec, {a, b}) + 0.5);
      s += 1.0 / (lam * lam);
    }
  CHECK(covariance_sum_exact(spec, 0.5, 2, 3) == doctest::Approx(2.0 * s).epsilon(1e-13));
  // n = 1 only sees the zero mode: L^2 / |lambda_0|.
  CHECK(covariance_sum_exact({2.0, Boundary::periodic, 3}, 0.0, 1, 3) == doctest::Approx(4.0));
  CHECK_THROWS_AS(covariance_sum_exact(spec, 0.0, 5, 3), DomainError);
  CHECK_THROWS_AS(covariance_sum_exact(spec, 0.0, 2, 33), DomainError);
}

TEST_CASE("Monte-Carlo variance of U_3 at N = 2") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  const auto m = MeasureSpec::gamma(spec);
  const double C = m.pointwise_variance();
  const auto table = sample_table(
      m, 1,
      [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
        out[0] = wick_integrals(ws.grid, y, C, ws.real)[3];
      },
      50000, 91);
  const auto v = reduce_variance(table, 91);
  CHECK(std::fabs(v.value - covariance_sum_exact(spec, 0.0, 3, 2)) < 4.0 * v.std_error);
}

TEST_CASE("reductions") {
  const auto m = MeasureSpec::gamma({1.0, Boundary::periodic, 2});
  const auto one = expect_functional(m, [](const FieldCoeffs&, GffWorkspace&) { return 1.0; }, 500, 1);
  CHECK(one.value == 1.0);
  CHECK(one.std_error == 0.0);
  CHECK(one.valid);
  const std::vector<double> xs{1.0, std::numeric_limits<double>::quiet_NaN(), 3.0, INFINITY};
  const auto r = reduce_samples(xs, 0);
  CHECK(r.n_nonfinite == 2);
  CHECK_FALSE(r.valid);
  CHECK(r.value == 2.0);
  CHECK_THROWS_AS(expect_functional(m, [](const FieldCoeffs&, GffWorkspace&) { return 1.0; }, 10, 1),
                  DomainError);
}

TEST_CASE("serial and parallel sampling agree bitwise") {
  const DomainSpec spec{1.0, Boundary::periodic, 4};
  const auto m = MeasureSpec::gamma(spec);
  const double C = m.pointwise_variance();
  const auto f = [&](const FieldCoeffs& y, GffWorkspace& ws, double* out) {
    const auto U = wick_integrals(ws.grid, y, C, ws.real);
    for (int n = 0; n < 5; ++n) out[n] = U[n];
  };
  McOptions serial;
  serial.policy = ExecPolicy::serial;
  McOptions parallel;
  parallel.policy = ExecPolicy::parallel;
  CHECK(sample_table(m, 5, f, 600, 12, serial) == sample_table(m, 5, f, 600, 12, parallel));
  serial.antithetic = parallel.antithetic = true;
  CHECK(sample_table(m, 5, f, 300, 12, serial) == sample_table(m, 5, f, 300, 12, parallel));
}

TEST_CASE("antithetic pairing cancels odd functionals") {
  const auto m = MeasureSpec::gamma({1.0, Boundary::periodic, 2});
  McOptions opt;
  opt.antithetic = true;
  const auto e = expect_functional(m, [](const FieldCoeffs& y, GffWorkspace&) { return y.z0(); }, 200, 2, opt);
  CHECK(e.value == 0.0);
}

TEST_CASE("hypercontractivity ratios") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  const auto r = nelson_moment_check(MeasureSpec::gamma(spec), 1, 2, 40000, 17);
  CHECK_FALSE(r.degenerate);
  CHECK(r.ratio == doctest::Approx(std::pow(3.0, 0.25)).epsilon(0.02));
  CHECK(r.implied_constant <= 1.0);
  const std::vector<double> zeros(10, 0.0);
  CHECK(nelson_from_values(zeros, 2, 2).degenerate);
  const std::vector<double> pm{1.0, -1.0, 1.0, -1.0};
  CHECK(nelson_from_values(pm, 1, 4).ratio == doctest::Approx(1.0));
  CHECK_THROWS_AS(nelson_moment_check(MeasureSpec::gamma(spec), 1, 3, 100, 1), DomainError);
}
