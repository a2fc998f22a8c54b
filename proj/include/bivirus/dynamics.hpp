#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "bivirus/model.hpp"
#include "bivirus/types.hpp"

namespace bivirus {

enum class IntegratorMethod { RK4Fixed, RK45Adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::RK45Adaptive;
  double dt = 1e-2;  ///< fixed step for RK4, initial step for RK45
  double rtol = 1e-8;
  double atol = 1e-10;
  double t_max = 1e4;
  double convergence_tol = 1e-10;  ///< stop once the l-infinity norm of the field drops below
  std::size_t record_stride = 1;
  double max_step = 0.0;  ///< RK45 step cap; 0 derives one from the rates

  /// Throws PreconditionError on nonpositive steps, tolerances or stride.
  void validate() const;
};

enum class TerminalReason { Converged, MaxTime, DomainError };

std::string_view to_string(TerminalReason r);
std::string_view to_string(IntegratorMethod m);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<SystemState> states;
  TerminalReason terminal_reason = TerminalReason::MaxTime;
  double max_violation = 0.0;  ///< largest distance outside the invariant set before projection
  std::size_t steps = 0;

  const SystemState& terminal() const { return states.back(); }
};

struct SingleTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  TerminalReason terminal_reason = TerminalReason::MaxTime;
  double max_violation = 0.0;
  std::size_t steps = 0;

  const Vector& terminal() const { return states.back(); }
};

/// Integrates the bi-virus ODE from s0 until the field vanishes (to
/// convergence_tol) or t_max. After each accepted step the state is clamped to
/// [0,1] and pairs with x1_i + x2_i > 1 are rescaled; a violation larger than
/// kDomainTolerance ends the run with TerminalReason::DomainError.
TrajectoryRecord simulate(const BiVirusModel& m, const SystemState& s0,
                          const IntegratorConfig& cfg = {});

/// Single-virus counterpart of simulate, projected onto the box [0,1]^n.
SingleTrajectory simulate_single(const VirusParams& p, const Vector& z0,
                                 const IntegratorConfig& cfg = {});

/// First recorded time at which every coordinate exceeds `floor`, or nullopt
/// if the trajectory ends first. Records every step regardless of cfg.record_stride.
std::optional<double> positivity_time(const VirusParams& p, const Vector& z0,
                                      const IntegratorConfig& cfg = {}, double floor = 1e-12);

/// max_k |z_k - x*_k| / x*_k at each recorded point of the single-virus trajectory.
std::vector<double> lyapunov_trace(const VirusParams& p, const Vector& z0, const Vector& x_star,
                                   const IntegratorConfig& cfg = {});

/// Header `t,x1_0,...,x2_{n-1}` then one row per recorded point, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj);

namespace detail {

using Rhs = std::function<void(const Eigen::Ref<const Vector>&, Eigen::Ref<Vector>)>;
/// Projects in place and returns the violation measured before projection.
using Projector = std::function<double(Eigen::Ref<Vector>)>;

struct RawTrajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  TerminalReason terminal_reason = TerminalReason::MaxTime;
  double max_violation = 0.0;
  std::size_t steps = 0;
};

/// rate_bound bounds the norm of the field's Jacobian on the invariant set and
/// caps adaptive steps at 2 / rate_bound unless cfg.max_step is set.
RawTrajectory integrate(const Rhs& rhs, const Projector& project, Vector x0,
                        const IntegratorConfig& cfg, double rate_bound);

/// max_i healing_i + 3 max_i sum_j B_ij
double rate_bound(const Vector& healing, const Matrix& B);

double project_pair(Eigen::Ref<Vector> x);  // x = (x1, x2) stacked
double project_box(Eigen::Ref<Vector> z);

TrajectoryRecord split_pairs(RawTrajectory raw);
SingleTrajectory as_single(RawTrajectory raw);

}  // namespace detail

}  // namespace bivirus
