#include <doctest.h>

#include <cmath>
#include <sstream>

#include "acm/dynamics.hpp"
#include "acm/estimators.hpp"

using namespace acm;
namespace dyn = acm::dynamics;

TEST_CASE("hit-set radius and membership") {
  const dyn::HitSets h{0.5, -0.25, 5.0};
  CHECK(h.radius(0.1) == doctest::Approx(5.0 * std::sqrt(0.1 * std::log(10.0))));
  CHECK(h.radius(0.0) == 0.0);
  CHECK(h.rho() == 0.5);
  const DomainSpec spec{1.0, Boundary::periodic, 3};
  CHECK(dyn::membership(FieldCoeffs::constant(spec, -1.0), h, 0.1).in_A);
  CHECK_FALSE(dyn::membership(FieldCoeffs::constant(spec, -1.0), h, 0.1).in_B);
  CHECK(dyn::membership(FieldCoeffs::constant(spec, 1.2), h, 0.1).in_B);
  const auto mid = dyn::membership(FieldCoeffs::constant(spec, 0.0), h, 0.1);
  CHECK_FALSE(mid.in_A);
  CHECK_FALSE(mid.in_B);
  auto rough = FieldCoeffs::constant(spec, -1.0);
  rough[{1, 0}] = rough[{-1, 0}] = 10.0;
  CHECK_FALSE(dyn::membership(rough, h, 0.1).in_A);
  const dyn::MembershipTest test(spec, h, 0.1);
  CHECK(test.fluct_norm(FieldCoeffs::constant(spec, 0.3)) == 0.0);
  CHECK(test.fluct_norm(rough) == doctest::Approx(std::sqrt(2.0 * 100.0 * std::pow(1.0 + 4.0 * kPi * kPi, -0.25))));
}

TEST_CASE("integrator names") {
  CHECK(dyn::integrator_from_string("euler-maruyama") == dyn::Integrator::euler_maruyama);
  CHECK(dyn::to_string(dyn::Integrator::exponential_euler) == "exponential-euler");
  CHECK_THROWS(dyn::integrator_from_string("rk4"));
}

TEST_CASE("configuration validation") {
  const ModeTable table({1.0, Boundary::periodic, 8});
  dyn::SimConfig cfg;
  cfg.integrator = dyn::Integrator::euler_maruyama;
  cfg.dt = 0.01;
  CHECK_THROWS_AS(cfg.validate(table), DomainError);
  cfg.dt = 1e-4;
  CHECK_NOTHROW(cfg.validate(table));
  cfg.integrator = dyn::Integrator::exponential_euler;
  cfg.dt = 0.01;
  CHECK_NOTHROW(cfg.validate(table));
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(table), DomainError);
  cfg.dt = 0.01;
  cfg.eps = -0.1;
  CHECK_THROWS_AS(cfg.validate(table), DomainError);
}

TEST_CASE("phi = 1 is a fixed point of the noiseless flow") {
  const DomainSpec spec{1.0, Boundary::periodic, 3};
  dyn::SimConfig cfg;
  cfg.eps = 0.0;
  for (auto integ : {dyn::Integrator::exponential_euler, dyn::Integrator::euler_maruyama}) {
    cfg.integrator = integ;
    cfg.dt = 1e-3;
    dyn::Stepper st(spec, cfg);
    RandomStream rng(1, 0);
    auto f = FieldCoeffs::constant(spec, 1.0);
    for (int i = 0; i < 200; ++i) st.advance(f, rng);
    CHECK(f.mean() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(l2_norm_sq(f) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("spatially constant noiseless flow solves a' = a - a^3") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  dyn::SimConfig cfg;
  cfg.eps = 0.0;
  cfg.dt = 1e-3;
  dyn::Stepper st(spec, cfg);
  RandomStream rng(1, 0);
  const double a0 = 0.9;
  auto f = FieldCoeffs::constant(spec, a0);
  for (int i = 0; i < 2000; ++i) st.advance(f, rng);
  const double t = 2.0;
  const double exact = 1.0 / std::sqrt(1.0 + (1.0 / (a0 * a0) - 1.0) * std::exp(-2.0 * t));
  CHECK(f.mean() == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("linear system has the counterterm-shifted OU variance") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  dyn::SimConfig cfg;
  cfg.eps = 1.0;
  cfg.dt = 0.01;
  cfg.linear_only = true;
  dyn::Stepper st(spec, cfg);
  const ModeTable& tab = st.table();
  RandomStream rng(3, 0);
  FieldCoeffs f(spec);
  const std::size_t n = 400000;
  const ModeIndex k{1, 0}, k2{1, 1};
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st.advance(f, rng);
    f[{0, 0}] = 0.0;  // the zero mode is linearly unstable and decoupled here
    s1 += std::norm(f[k]);
    s2 += std::norm(f[k2]);
  }
  const double shift = 3.0 * cfg.eps * tab.constants.C_N;
  CHECK(s1 / n == doctest::Approx(cfg.eps / (tab.lambda[tab.layout.index(k)] - shift)).epsilon(0.02));
  CHECK(s2 / n == doctest::Approx(cfg.eps / (tab.lambda[tab.layout.index(k2)] - shift)).epsilon(0.02));
}

TEST_CASE("steps keep the field real") {
  const DomainSpec spec{1.0, Boundary::periodic, 4};
  dyn::SimConfig cfg;
  cfg.eps = 0.1;
  RandomStream rng(9, 0);
  auto f = FieldCoeffs::constant(spec, -1.0);
  for (int i = 0; i < 50; ++i) f = dyn::step(f, cfg, rng);
  CHECK(reality_defect(f) < 1e-14);
}

TEST_CASE("transition times: no noise means every path is censored") {
  const DomainSpec spec{1.0, Boundary::periodic, 1};
  dyn::SimConfig cfg;
  cfg.eps = 0.0;
  cfg.t_max = 1.0;
  CHECK_THROWS_AS(dyn::sample_transition_times(spec, cfg, {}, 4), std::runtime_error);
}

TEST_CASE("transition times are invalid under partial censoring") {
  const DomainSpec spec{1.0, Boundary::periodic, 0};
  dyn::SimConfig cfg;
  cfg.eps = 0.2;
  cfg.dt = 0.01;
  cfg.t_max = 3.0;
  const auto r = dyn::sample_transition_times(spec, cfg, {}, 200);
  REQUIRE(r.n_censored > 0);
  REQUIRE(r.n_censored < 200);
  CHECK(r.censored_fraction == doctest::Approx(r.n_censored / 200.0));
  CHECK_FALSE(r.estimate.valid);
  for (const auto& s : r.samples) {
    if (s.censored) CHECK(s.tau == doctest::Approx(cfg.t_max).epsilon(1e-9));
    else CHECK(s.tau <= cfg.t_max);
  }
}

TEST_CASE("mirror symmetry with negated noise") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  dyn::SimConfig cfg;
  cfg.eps = 0.15;
  cfg.t_max = 1e4;
  cfg.seed = 44;
  const auto fwd = dyn::sample_transition_times(spec, cfg, {}, 16, std::nullopt, dyn::Target::B);
  cfg.negate_noise = true;
  const auto back = dyn::sample_transition_times(spec, cfg, {}, 16, FieldCoeffs::constant(spec, 1.0), dyn::Target::A);
  REQUIRE(fwd.samples.size() == back.samples.size());
  for (std::size_t i = 0; i < fwd.samples.size(); ++i) {
    CHECK(fwd.samples[i].n_steps == back.samples[i].n_steps);
    CHECK(fwd.samples[i].tau == back.samples[i].tau);
  }
}

TEST_CASE("serial and parallel transition sampling agree") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  dyn::SimConfig cfg;
  cfg.eps = 0.15;
  cfg.seed = 5;
  const auto a = dyn::sample_transition_times(spec, cfg, {}, 12, std::nullopt, dyn::Target::B, ExecPolicy::serial);
  const auto b = dyn::sample_transition_times(spec, cfg, {}, 12, std::nullopt, dyn::Target::B, ExecPolicy::parallel);
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].n_steps == b.samples[i].n_steps);
  CHECK(a.estimate.value == b.estimate.value);
}

TEST_CASE("single-mode system against the exact mean first-passage time") {
  const DomainSpec spec{1.0, Boundary::periodic, 0};
  dyn::SimConfig cfg;
  cfg.eps = 0.1;
  cfg.dt = 0.002;
  cfg.t_max = 5000.0;
  cfg.seed = 17;
  const auto r = dyn::sample_transition_times(spec, cfg, {}, 400);
  const estimators::Oracle1d o(1.0, 0.1, 0.5);
  REQUIRE(r.estimate.valid);
  const double target = o.mfpt_from(-1.0);
  CHECK(std::fabs(r.estimate.value - target) < 3.0 * r.estimate.std_error + 0.03 * target);
}

TEST_CASE("trajectory recording") {
  const DomainSpec spec{1.0, Boundary::periodic, 2};
  dyn::SimConfig cfg;
  cfg.eps = 0.1;
  cfg.t_max = 0.5;
  const auto rows = dyn::record_trajectory(spec, cfg, {}, 0, 10);
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front().t == 0.0);
  CHECK(rows.front().mean == doctest::Approx(-1.0));
  CHECK(rows[1].t == doctest::Approx(10 * cfg.dt));
  std::ostringstream os;
  dyn::write_trajectory_csv(os, rows);
  CHECK(os.str().rfind("t,mean,hs_norm,energy\n", 0) == 0);
}

TEST_CASE("both integrators agree on mean transition times at dt and dt/2") {
  const DomainSpec spec{1.0, Boundary::periodic, 1};
  std::vector<McEstimate> est;
  for (auto integ : {dyn::Integrator::exponential_euler, dyn::Integrator::euler_maruyama})
    for (double dt : {0.01, 0.005}) {
      dyn::SimConfig cfg;
      cfg.eps = 0.15;
      cfg.dt = dt;
      cfg.t_max = 1e4;
      cfg.seed = 61;
      cfg.integrator = integ;
      const auto r = dyn::sample_transition_times(spec, cfg, {}, 300);
      REQUIRE(r.estimate.valid);
      est.push_back(r.estimate);
    }
  for (std::size_t i = 0; i < est.size(); ++i)
    for (std::size_t j = i + 1; j < est.size(); ++j) {
      const double sigma = std::hypot(est[i].std_error, est[j].std_error);
      CHECK(std::fabs(est[i].value - est[j].value) <= 2.0 * sigma);
    }
}
