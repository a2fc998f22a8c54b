#include "bivirus/control.hpp"

#include <random>
#include <string>

#include "bivirus/errors.hpp"
#include "bivirus/spectral.hpp"
#include "parallel.hpp"

namespace bivirus {
namespace {

void require_gains(const Vector& k, Eigen::Index n, const char* what) {
  if (k.size() != n) throw PreconditionError(std::string(what) + ": gain vector has the wrong size");
  if (!(k.array() > 0.0).all() || !k.allFinite()) {
    throw PreconditionError(std::string(what) + ": every feedback gain must be positive");
  }
}

void require_infection(const VirusParams& p, const char* what) {
  if (p.B.rows() != p.delta.size() || p.B.cols() != p.delta.size()) {
    throw PreconditionError(std::string(what) + ": infection matrix has the wrong size");
  }
  if ((p.B.array() < 0.0).any()) throw PreconditionError(std::string(what) + ": negative infection rate");
  if (!check_irreducible(p.B)) throw PreconditionError(std::string(what) + ": infection matrix is reducible");
}

}  // namespace

void FeedbackGains::validate(std::size_t n) const {
  require_gains(k1, static_cast<Eigen::Index>(n), "feedback gains k1");
  require_gains(k2, static_cast<Eigen::Index>(n), "feedback gains k2");
}

double closed_loop_ratio(const VirusParams& p, const Vector& k) {
  require_gains(k, p.B.rows(), "closed_loop_ratio");
  const auto n = p.B.rows();
  return spectral_radius(Matrix::Identity(n, n) + k.cwiseInverse().asDiagonal() * p.B);
}

VirusParams closed_loop_transform(const VirusParams& p, const Vector& k) {
  require_infection(p, "closed_loop_transform");
  require_gains(k, p.B.rows(), "closed_loop_transform");
  const double ratio = closed_loop_ratio(p, k);
  if (!(ratio > 1.0)) {
    throw ConsistencyError("closed_loop_transform: rho(I + K^-1 B) = " + std::to_string(ratio) +
                           " is not above 1");
  }
  VirusParams out;
  out.delta = k;
  out.B = p.B;
  out.B.diagonal() += k;
  return out;
}

Vector closed_loop_field(const VirusParams& p, const Vector& k, const Vector& z) {
  require_gains(k, p.B.rows(), "closed_loop_field");
  if (z.size() != k.size()) throw PreconditionError("closed_loop_field: dimension mismatch");
  return -k.cwiseProduct(z.cwiseAbs2()) + (Vector::Ones(z.size()) - z).cwiseProduct(p.B * z);
}

std::pair<Vector, Vector> feedback_field(const BiVirusModel& m, const FeedbackGains& gains,
                                         const SystemState& s) {
  detail::require_same_size(m, s);
  gains.validate(m.size());
  const Vector susceptible = Vector::Ones(s.x1.size()) - s.x1 - s.x2;
  return {-gains.k1.cwiseProduct(s.x1.cwiseAbs2()) + susceptible.cwiseProduct(m.virus1.B * s.x1),
          -gains.k2.cwiseProduct(s.x2.cwiseAbs2()) + susceptible.cwiseProduct(m.virus2.B * s.x2)};
}

RepellerReport repeller_experiment(const VirusParams& p, const Vector& k,
                                   const std::vector<double>& magnitudes,
                                   const RepellerOptions& opts, const IntegratorConfig& icfg,
                                   const FixedPointConfig& fcfg) {
  for (double mag : magnitudes) {
    if (!(mag > 0.0 && mag <= 1.0)) throw PreconditionError("repeller_experiment: magnitudes must lie in (0,1]");
  }
  const VirusParams transformed = closed_loop_transform(p, k);
  RepellerReport report;
  report.ratio = closed_loop_ratio(p, k);
  report.target = solve_epidemic(transformed, fcfg).x;

  const auto n = p.B.rows();
  std::vector<Vector> directions;
  for (Eigen::Index i = 0; i < n; ++i) directions.push_back(Vector::Unit(n, i));
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  for (std::size_t d = 0; d < opts.random_directions; ++d) {
    Vector dir(n);
    for (Eigen::Index i = 0; i < n; ++i) dir(i) = weight(rng);
    directions.push_back(dir / dir.maxCoeff());
  }

  const auto rhs = [&p, &k](const Eigen::Ref<const Vector>& z, Eigen::Ref<Vector> dz) {
    dz = -k.cwiseProduct(z.cwiseAbs2()) + (Vector::Ones(z.size()) - z).cwiseProduct(p.B * z);
  };
  const double bound = detail::rate_bound(2.0 * k, p.B);
  const std::size_t n_dirs = directions.size();
  report.runs = detail::parallel_map<RepellerRun>(magnitudes.size() * n_dirs, [&](std::size_t idx) {
    RepellerRun run;
    run.magnitude = magnitudes[idx / n_dirs];
    run.direction = directions[idx % n_dirs];
    const Vector z0 = run.magnitude * run.direction;
    const auto traj = detail::integrate(rhs, detail::project_box, z0, icfg, bound);
    run.terminal = traj.states.back();
    run.terminal_reason = traj.terminal_reason;
    run.initial_norm = z0.lpNorm<Eigen::Infinity>();
    run.terminal_norm = run.terminal.lpNorm<Eigen::Infinity>();
    run.distance_to_target = (run.terminal - report.target).lpNorm<Eigen::Infinity>();
    run.escaped = run.terminal_reason == TerminalReason::Converged &&
                  run.distance_to_target < opts.target_tol && run.terminal_norm > run.initial_norm;
    return run;
  });
  report.all_escaped = std::all_of(report.runs.begin(), report.runs.end(),
                                   [](const RepellerRun& r) { return r.escaped; });
  return report;
}

TrajectoryRecord bivirus_feedback_simulate(const BiVirusModel& m, const FeedbackGains& gains,
                                           const SystemState& s0, const IntegratorConfig& cfg) {
  detail::require_same_size(m, s0);
  gains.validate(m.size());
  const double v = domain_violation(s0);
  if (v > kDomainTolerance) {
    throw PreconditionError("bivirus_feedback_simulate: initial state lies outside the domain");
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  Vector x0(2 * n);
  x0 << s0.x1, s0.x2;
  detail::project_pair(x0);
  const auto rhs = [&m, &gains, n](const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> dx) {
    const auto x1 = x.head(n);
    const auto x2 = x.tail(n);
    const Vector susceptible = Vector::Ones(n) - x1 - x2;
    dx.head(n) = -gains.k1.cwiseProduct(x1.cwiseAbs2()) + susceptible.cwiseProduct(m.virus1.B * x1);
    dx.tail(n) = -gains.k2.cwiseProduct(x2.cwiseAbs2()) + susceptible.cwiseProduct(m.virus2.B * x2);
  };
  const double bound = detail::rate_bound(2.0 * (gains.k1 + gains.k2), m.virus1.B + m.virus2.B);
  return detail::split_pairs(detail::integrate(rhs, detail::project_pair, std::move(x0), cfg, bound));
}

double feedback_origin_abscissa(const BiVirusModel& m, const FeedbackGains& gains) {
  gains.validate(m.size());
  // The quadratic healing term has zero derivative at the origin.
  const auto n = static_cast<Eigen::Index>(m.size());
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topLeftCorner(n, n) = m.virus1.B;
  J.bottomRightCorner(n, n) = m.virus2.B;
  return spectral_abscissa(J);
}

BaselineReport constant_healing_baseline(const VirusParams& p, const Vector& z0,
                                         const IntegratorConfig& cfg) {
  require_infection(p, "constant_healing_baseline");
  BaselineReport out;
  out.params.delta = p.B.rowwise().sum();
  out.params.B = p.B;
  out.abscissa = spectral_abscissa(out.params.linearization());
  out.trajectory = simulate_single(out.params, z0, cfg);
  return out;
}

}  // namespace bivirus
