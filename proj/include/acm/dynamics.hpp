#pragma once

// Time stepping of the Galerkin SDE and first-hitting times of A and B.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "acm/field.hpp"
#include "acm/gff.hpp"
#include "acm/rng.hpp"
#include "acm/spectra.hpp"

namespace acm::dynamics {

enum class Integrator { exponential_euler, euler_maruyama };

std::string to_string(Integrator i);
Integrator integrator_from_string(const std::string& s);

struct SimConfig {
  double eps = 0.1;
  double dt = 0.01;
  double t_max = 1e4;
  std::uint64_t seed = 1;
  /// Collocation size; 0 selects padded_size(N).
  int resolution = 0;
  Integrator integrator = Integrator::exponential_euler;
  /// Flip the sign of every noise increment (seed-matched mirror paths).
  bool negate_noise = false;
  /// Drop the cubic term (pure Ornstein-Uhlenbeck system).
  bool linear_only = false;

  /// Throws DomainError on dt <= 0, t_max <= 0, eps < 0, or an unstable
  /// Euler-Maruyama step dt * max lambda_k > 2.
  void validate(const ModeTable& table) const;
};

struct HitSets {
  double delta = 0.5;
  double s = -0.25;
  double r = 5.0;

  /// r sqrt(eps log(1/eps)); zero at eps = 0.
  [[nodiscard]] double radius(double eps) const;
  [[nodiscard]] double rho() const { return 1.0 - delta; }
  void validate() const;
};

struct Membership {
  bool in_A = false;
  bool in_B = false;
};

/// Precomputed H^s weights and radius for repeated membership tests.
class MembershipTest {
 public:
  MembershipTest(const DomainSpec& spec, const HitSets& h, double eps);
  [[nodiscard]] Membership operator()(const FieldCoeffs& f) const;
  [[nodiscard]] double fluct_norm(const FieldCoeffs& f) const;
  [[nodiscard]] double radius() const { return radius_; }

 private:
  HitSets h_;
  std::vector<double> weights_;
  double radius_;
};

Membership membership(const FieldCoeffs& f, const HitSets& h, double eps);

class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One integrator instance per worker.
class Stepper {
 public:
  Stepper(const DomainSpec& spec, const SimConfig& cfg);

  /// Advances `state` by one step in place. Throws StepError if the new
  /// state contains non-finite coefficients.
  void advance(FieldCoeffs& state, RandomStream& rng);
  [[nodiscard]] const ModeTable& table() const { return table_; }
  [[nodiscard]] SpectralGrid& grid() { return grid_; }

 private:
  ModeTable table_;
  SimConfig cfg_;
  SpectralGrid grid_;
  FieldCoeffs cubic_;
  std::vector<double> lin_;    // multiplier of z_k
  std::vector<double> force_;  // multiplier of -cubic_k
  std::vector<double> noise_;  // standard deviation per real component
};

FieldCoeffs step(const FieldCoeffs& state, const SimConfig& cfg, RandomStream& rng);

struct TransitionSample {
  double tau = 0.0;
  bool censored = false;
  std::uint64_t n_steps = 0;
};

enum class Target { A, B };

struct TransitionResult {
  std::vector<TransitionSample> samples;
  /// Mean hitting time over uncensored paths.
  McEstimate estimate;
  double censored_fraction = 0.0;
  std::size_t n_censored = 0;
};

/// phi = -1 when `start` is empty. Throws std::runtime_error if every path is
/// censored. The estimate is invalid when 1% or more of the paths are censored.
TransitionResult sample_transition_times(const DomainSpec& spec, const SimConfig& cfg, const HitSets& h,
                                         std::size_t n_paths,
                                         const std::optional<FieldCoeffs>& start = std::nullopt,
                                         Target target = Target::B,
                                         ExecPolicy policy = ExecPolicy::parallel);

struct TrajectoryRow {
  double t = 0.0;
  double mean = 0.0;
  double fluct_norm = 0.0;
  double energy = 0.0;
};

/// Single path (stream `path_id`) recorded every `decimation` steps until it
/// hits the target or reaches t_max.
std::vector<TrajectoryRow> record_trajectory(const DomainSpec& spec, const SimConfig& cfg, const HitSets& h,
                                             std::uint64_t path_id, int decimation,
                                             const std::optional<FieldCoeffs>& start = std::nullopt,
                                             Target target = Target::B);

/// CSV with header t,mean,hs_norm,energy.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);

}  // namespace acm::dynamics
