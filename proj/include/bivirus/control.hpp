#pragma once

#include <cstdint>
#include <vector>

#include "bivirus/dynamics.hpp"
#include "bivirus/equilibria.hpp"
#include "bivirus/model.hpp"

namespace bivirus {

/// Proportional healing gains, delta_i(t) = k_i x_i(t), one vector per virus.
struct FeedbackGains {
  Vector k1;
  Vector k2;

  void validate(std::size_t n) const;
};

/// Open-loop parameters equivalent to the closed loop under healing k_i x_i:
/// delta <- k and B <- K + B. Asserts rho(I + K^{-1} B) > 1.
VirusParams closed_loop_transform(const VirusParams& p, const Vector& k);

/// rho(I + K^{-1} B).
double closed_loop_ratio(const VirusParams& p, const Vector& k);

/// dz_i = -k_i z_i^2 + (1 - z_i) sum_j beta_ij z_j
Vector closed_loop_field(const VirusParams& p, const Vector& k, const Vector& z);

/// Bi-virus field with delta^k_i replaced by k^k_i x^k_i.
std::pair<Vector, Vector> feedback_field(const BiVirusModel& m, const FeedbackGains& gains,
                                         const SystemState& s);

struct RepellerRun {
  double magnitude = 0.0;
  Vector direction;
  Vector terminal;
  double initial_norm = 0.0;
  double terminal_norm = 0.0;
  double distance_to_target = 0.0;
  TerminalReason terminal_reason = TerminalReason::MaxTime;
  bool escaped = false;  ///< converged to the epidemic state and ended farther from 0
};

struct RepellerReport {
  Vector target;  ///< epidemic state of the transformed system
  double ratio = 0.0;
  std::vector<RepellerRun> runs;
  bool all_escaped = false;
};

struct RepellerOptions {
  std::size_t random_directions = 10;
  std::uint64_t seed = 0;
  double target_tol = 1e-6;
};

/// Starts the closed loop from magnitude * direction for axis directions and
/// random positive directions (max-norm 1) and checks every run reaches the
/// transformed epidemic state. Runs concurrently; output order is deterministic.
RepellerReport repeller_experiment(const VirusParams& p, const Vector& k,
                                   const std::vector<double>& magnitudes,
                                   const RepellerOptions& opts = {},
                                   const IntegratorConfig& icfg = {},
                                   const FixedPointConfig& fcfg = {});

TrajectoryRecord bivirus_feedback_simulate(const BiVirusModel& m, const FeedbackGains& gains,
                                           const SystemState& s0,
                                           const IntegratorConfig& cfg = {});

/// Spectral abscissa of the closed-loop Jacobian at the healthy state.
double feedback_origin_abscissa(const BiVirusModel& m, const FeedbackGains& gains);

struct BaselineReport {
  VirusParams params;      ///< delta_i = sum_j beta_ij
  double abscissa = 0.0;   ///< s(-D + B), zero up to round-off
  SingleTrajectory trajectory;
};

/// Constant healing at the row sums of B, which puts the model exactly at threshold.
BaselineReport constant_healing_baseline(const VirusParams& p, const Vector& z0,
                                         const IntegratorConfig& cfg);

}  // namespace bivirus
