#include "bivirus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "bivirus/errors.hpp"

namespace bivirus {

namespace odeint = boost::numeric::odeint;

std::string_view to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::Converged: return "Converged";
    case TerminalReason::MaxTime: return "MaxTime";
    case TerminalReason::DomainError: return "DomainError";
  }
  return "?";
}

std::string_view to_string(IntegratorMethod m) {
  switch (m) {
    case IntegratorMethod::RK4Fixed: return "RK4Fixed";
    case IntegratorMethod::RK45Adaptive: return "RK45Adaptive";
  }
  return "?";
}

void IntegratorConfig::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(dt)) throw PreconditionError("integrator: dt must be positive");
  if (!positive(rtol) || !positive(atol)) throw PreconditionError("integrator: tolerances must be positive");
  if (!positive(t_max)) throw PreconditionError("integrator: t_max must be positive");
  if (!positive(convergence_tol)) throw PreconditionError("integrator: convergence_tol must be positive");
  if (record_stride == 0) throw PreconditionError("integrator: record_stride must be positive");
  if (!std::isfinite(max_step) || max_step < 0.0) throw PreconditionError("integrator: max_step must be nonnegative");
}

namespace detail {

double project_pair(Eigen::Ref<Vector> x) {
  const auto n = x.size() / 2;
  auto x1 = x.head(n);
  auto x2 = x.tail(n);
  double violation = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    violation = std::max({violation, -x1(i), -x2(i), x1(i) + x2(i) - 1.0});
    x1(i) = std::clamp(x1(i), 0.0, 1.0);
    x2(i) = std::clamp(x2(i), 0.0, 1.0);
    const double sum = x1(i) + x2(i);
    if (sum > 1.0) {
      x1(i) /= sum;
      x2(i) /= sum;
    }
  }
  return violation;
}

double project_box(Eigen::Ref<Vector> z) {
  double violation = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    violation = std::max({violation, -z(i), z(i) - 1.0});
    z(i) = std::clamp(z(i), 0.0, 1.0);
  }
  return violation;
}

double rate_bound(const Vector& healing, const Matrix& B) {
  const double h = healing.size() ? healing.maxCoeff() : 0.0;
  const double b = B.size() ? B.rowwise().sum().maxCoeff() : 0.0;
  return std::max(h, 0.0) + 3.0 * b;
}

RawTrajectory integrate(const Rhs& rhs, const Projector& project, Vector x0,
                        const IntegratorConfig& cfg, double rate_bound) {
  cfg.validate();
  const double h_max = cfg.max_step > 0.0 ? cfg.max_step
                       : rate_bound > 0.0 ? 2.0 / rate_bound
                                          : std::numeric_limits<double>::infinity();
  using State = std::vector<double>;
  const auto n = x0.size();

  const auto system = [&](const State& x, State& dx, double /*t*/) {
    dx.resize(x.size());
    rhs(Eigen::Map<const Vector>(x.data(), n), Eigen::Map<Vector>(dx.data(), n));
  };
  const auto field_norm = [&](const State& x, State& dx) {
    system(x, dx, 0.0);
    return Eigen::Map<const Vector>(dx.data(), n).lpNorm<Eigen::Infinity>();
  };

  RawTrajectory out;
  State x(x0.data(), x0.data() + n), dxdt(n), next(n), dxdt_next(n);
  double t = 0.0;
  out.times.push_back(t);
  out.states.push_back(x0);

  auto controlled = odeint::make_controlled(cfg.atol, cfg.rtol, odeint::runge_kutta_dopri5<State>());
  odeint::runge_kutta4<State> rk4;

  double dt = std::min(cfg.dt, cfg.t_max);
  bool last_recorded = true;
  double norm = field_norm(x, dxdt);

  while (true) {
    if (norm < cfg.convergence_tol) {
      out.terminal_reason = TerminalReason::Converged;
      break;
    }
    if (t >= cfg.t_max) {
      out.terminal_reason = TerminalReason::MaxTime;
      break;
    }

    const double h_cap = cfg.t_max - t;
    if (cfg.method == IntegratorMethod::RK4Fixed) {
      const double h = std::min(cfg.dt, h_cap);
      rk4.do_step(system, x, dxdt, t, next, h);
      t = (h == h_cap) ? cfg.t_max : t + h;
    } else {
      double h = std::min({dt, h_cap, h_max});
      while (true) {
        const double t_before = t;
        if (controlled.try_step(system, x, dxdt, t, next, dxdt_next, h) == odeint::success) {
          if (t_before + h_cap <= t) t = cfg.t_max;
          dt = h;  // suggested size for the next step
          break;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
          throw NumericalError("integrator: step size underflow at t = " + std::to_string(t));
        }
      }
    }

    Eigen::Map<Vector> state(next.data(), n);
    const double violation = project(state);
    out.max_violation = std::max(out.max_violation, violation);
    ++out.steps;
    if (violation > kDomainTolerance) {
      out.terminal_reason = TerminalReason::DomainError;
      break;
    }
    x.swap(next);
    norm = field_norm(x, dxdt);

    last_recorded = out.steps % cfg.record_stride == 0;
    if (last_recorded) {
      out.times.push_back(t);
      out.states.emplace_back(Eigen::Map<const Vector>(x.data(), n));
    }
  }

  if (!last_recorded) {
    out.times.push_back(t);
    out.states.emplace_back(Eigen::Map<const Vector>(x.data(), n));
  }
  return out;
}

TrajectoryRecord split_pairs(RawTrajectory raw) {
  TrajectoryRecord rec;
  rec.times = std::move(raw.times);
  rec.terminal_reason = raw.terminal_reason;
  rec.max_violation = raw.max_violation;
  rec.steps = raw.steps;
  rec.states.reserve(raw.states.size());
  for (const Vector& x : raw.states) {
    const auto n = x.size() / 2;
    rec.states.push_back(SystemState{x.head(n), x.tail(n)});
  }
  return rec;
}

SingleTrajectory as_single(RawTrajectory raw) {
  return SingleTrajectory{std::move(raw.times), std::move(raw.states), raw.terminal_reason,
                          raw.max_violation, raw.steps};
}

}  // namespace detail

TrajectoryRecord simulate(const BiVirusModel& m, const SystemState& s0, const IntegratorConfig& cfg) {
  detail::require_same_size(m, s0);
  const double v = domain_violation(s0);
  if (v > kDomainTolerance) {
    throw PreconditionError("simulate: initial state lies " + std::to_string(v) + " outside the domain");
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  Vector x0(2 * n);
  x0 << s0.x1, s0.x2;
  detail::project_pair(x0);

  const auto rhs = [&m, n](const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> dx) {
    detail::bivirus_rhs(m, x.head(n), x.tail(n), dx.head(n), dx.tail(n));
  };
  const double bound = detail::rate_bound(m.virus1.delta + m.virus2.delta, m.virus1.B + m.virus2.B);
  return detail::split_pairs(detail::integrate(rhs, detail::project_pair, std::move(x0), cfg, bound));
}

SingleTrajectory simulate_single(const VirusParams& p, const Vector& z0, const IntegratorConfig& cfg) {
  if (z0.size() != p.delta.size()) throw PreconditionError("simulate_single: dimension mismatch");
  const double v = box_violation(z0);
  if (v > kDomainTolerance) {
    throw PreconditionError("simulate_single: initial state lies " + std::to_string(v) +
                            " outside [0,1]^n");
  }
  Vector x0 = z0;
  detail::project_box(x0);
  const auto rhs = [&p](const Eigen::Ref<const Vector>& z, Eigen::Ref<Vector> dz) {
    detail::single_rhs(p, z, dz);
  };
  return detail::as_single(
      detail::integrate(rhs, detail::project_box, std::move(x0), cfg, detail::rate_bound(p.delta, p.B)));
}

std::optional<double> positivity_time(const VirusParams& p, const Vector& z0,
                                      const IntegratorConfig& cfg, double floor) {
  if ((z0.array() < 0.0).any() || (z0.array() == 0.0).all()) {
    throw PreconditionError("positivity_time: initial state must be nonnegative and nonzero");
  }
  if ((z0.array() > floor).all()) return 0.0;
  IntegratorConfig every_step = cfg;
  every_step.record_stride = 1;
  const SingleTrajectory traj = simulate_single(p, z0, every_step);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    if ((traj.states[k].array() > floor).all()) return traj.times[k];
  }
  return std::nullopt;
}

std::vector<double> lyapunov_trace(const VirusParams& p, const Vector& z0, const Vector& x_star,
                                   const IntegratorConfig& cfg) {
  if (x_star.size() != z0.size()) throw PreconditionError("lyapunov_trace: dimension mismatch");
  if (!(x_star.array() > 0.0).all()) throw PreconditionError("lyapunov_trace: x_star must be positive");
  const SingleTrajectory traj = simulate_single(p, z0, cfg);
  std::vector<double> trace;
  trace.reserve(traj.states.size());
  for (const Vector& z : traj.states) {
    trace.push_back((z - x_star).cwiseAbs().cwiseQuotient(x_star).maxCoeff());
  }
  return trace;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& traj) {
  const auto n = traj.states.empty() ? 0 : traj.states.front().x1.size();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) os << ",x1_" << i;
  for (Eigen::Index i = 0; i < n; ++i) os << ",x2_" << i;
  os << '\n';
  const auto old_precision = os.precision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << traj.times[k];
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << traj.states[k].x1(i);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << traj.states[k].x2(i);
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace bivirus
