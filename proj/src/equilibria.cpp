#include "bivirus/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bivirus/errors.hpp"
#include "parallel.hpp"

namespace bivirus {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::BothSubcritical: return "BothSubcritical";
    case Regime::Virus1Only: return "Virus1Only";
    case Regime::Virus2Only: return "Virus2Only";
    case Regime::BothSupercritical: return "BothSupercritical";
  }
  return "?";
}

std::string_view to_string(Fitness f) {
  switch (f) {
    case Fitness::Virus1Fitter: return "Virus1Fitter";
    case Fitness::Virus2Fitter: return "Virus2Fitter";
    case Fitness::EqualFitness: return "EqualFitness";
  }
  return "?";
}

std::string_view to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::LocallyStable: return "LocallyStable";
    case StabilityVerdict::Unstable: return "Unstable";
    case StabilityVerdict::Marginal: return "Marginal";
  }
  return "?";
}

std::string_view to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::Healthy: return "Healthy";
    case EquilibriumKind::Virus1Epidemic: return "Virus1Epidemic";
    case EquilibriumKind::Virus2Epidemic: return "Virus2Epidemic";
    case EquilibriumKind::Coexisting: return "Coexisting";
  }
  return "?";
}

namespace {

double linear_abscissa(const VirusParams& p) {
  return perron_pair(MetzlerMatrix(p.linearization())).value;
}

std::optional<double> reproduction_ratio(const VirusParams& p) {
  if (!(p.delta.array() > 0.0).all()) return std::nullopt;
  return spectral_radius(p.delta.cwiseInverse().asDiagonal() * p.B);
}

double single_residual(const VirusParams& p, const Vector& x) {
  Vector dz(x.size());
  detail::single_rhs(p, x, dz);
  return dz.lpNorm<Eigen::Infinity>();
}

struct Shifted {
  double abscissa;
  double shift;
};

Shifted epidemic_shift(const VirusParams& p, const FixedPointConfig& cfg) {
  cfg.validate();
  const double s = linear_abscissa(p);
  if (!(s > kCriticalBand)) {
    std::ostringstream os;
    os.precision(17);
    os << "no epidemic state: s(-D+B) = " << s << " <= 0";
    throw PreconditionError(os.str());
  }
  return {s, cfg.c_fraction * s};
}

EpidemicSolution iterate_map(const VirusParams& p, double shift, Vector x,
                             const FixedPointConfig& cfg, bool monotone) {
  EpidemicSolution sol;
  sol.shift = shift;
  sol.initializer = x;
  for (sol.iterations = 1; sol.iterations <= cfg.max_iter; ++sol.iterations) {
    Vector next = epidemic_map(p, shift, x);
    if (monotone && ((next - x).array() < -1e-14).any()) {
      throw ConsistencyError("solve_epidemic: iterates stopped increasing at iteration " +
                             std::to_string(sol.iterations));
    }
    const double change = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (change < cfg.tol) break;
  }
  if (sol.iterations > cfg.max_iter) {
    throw NumericalError("solve_epidemic: no convergence within " + std::to_string(cfg.max_iter) +
                         " iterations");
  }
  sol.x = std::move(x);
  sol.residual = single_residual(p, sol.x);
  if (!(sol.residual < 1e-10)) {
    throw NumericalError("solve_epidemic: residual " + std::to_string(sol.residual) +
                         " exceeds 1e-10");
  }
  if (!(sol.x.array() > 0.0).all() || (sol.x.array() > 1.0).any()) {
    throw ConsistencyError("solve_epidemic: fixed point is not inside (0,1]^n");
  }
  return sol;
}

}  // namespace

Fitness compare_fitness(const HomogeneityProfile& profile, bool* exact) {
  if (!profile.homogeneous) throw PreconditionError("compare_fitness: model is not homogeneous");
  const bool have_exact = profile.exact_delta1 && profile.exact_beta1 && profile.exact_delta2 &&
                          profile.exact_beta2;
  if (exact) *exact = have_exact;
  if (have_exact) {
    // delta1/beta1 vs delta2/beta2 with positive betas.
    const Rational lhs = *profile.exact_delta1 * *profile.exact_beta2;
    const Rational rhs = *profile.exact_delta2 * *profile.exact_beta1;
    if (lhs == rhs) return Fitness::EqualFitness;
    return lhs > rhs ? Fitness::Virus2Fitter : Fitness::Virus1Fitter;
  }
  const double r1 = profile.delta1 / profile.beta1;
  const double r2 = profile.delta2 / profile.beta2;
  if (std::abs(r1 - r2) <= 1e-12 * std::max(std::abs(r1), std::abs(r2))) return Fitness::EqualFitness;
  return r1 > r2 ? Fitness::Virus2Fitter : Fitness::Virus1Fitter;
}

RegimeLabel classify(const BiVirusModel& m, double band) {
  RegimeLabel label;
  label.abscissa1 = linear_abscissa(m.virus1);
  label.abscissa2 = linear_abscissa(m.virus2);
  label.reproduction1 = reproduction_ratio(m.virus1);
  label.reproduction2 = reproduction_ratio(m.virus2);

  const bool up1 = label.abscissa1 > band;
  const bool up2 = label.abscissa2 > band;
  if (up1 && up2) {
    label.regime = Regime::BothSupercritical;
  } else if (up1) {
    label.regime = Regime::Virus1Only;
  } else if (up2) {
    label.regime = Regime::Virus2Only;
  } else {
    label.regime = Regime::BothSubcritical;
  }

  if (label.regime == Regime::BothSupercritical) {
    const HomogeneityProfile prof = detect_homogeneity(m);
    if (prof.homogeneous) {
      label.fitness = compare_fitness(prof, &label.exact_comparison);
    } else if (prof.identical) {
      label.fitness = Fitness::EqualFitness;
      label.exact_comparison = true;
    }
  }
  return label;
}

void FixedPointConfig::validate() const {
  if (!(c_fraction > 0.0 && c_fraction < 1.0)) throw PreconditionError("fixed_point: c_fraction must lie in (0,1)");
  if (!(epsilon_scale > 0.0 && epsilon_scale <= 1.0)) {
    throw PreconditionError("fixed_point: epsilon_scale must lie in (0,1]");
  }
  if (!(tol > 0.0)) throw PreconditionError("fixed_point: tol must be positive");
  if (max_iter == 0) throw PreconditionError("fixed_point: max_iter must be positive");
}

Vector epidemic_map(const VirusParams& p, double shift, const Vector& x) {
  const Vector shifted = (p.delta.array() + shift).matrix();
  const Vector y = (p.B * x).cwiseQuotient(shifted);
  const Vector retained = p.delta.cwiseQuotient(shifted);  // 1 - c/(c + delta_i)
  return y.cwiseQuotient(retained + y);
}

EpidemicSolution solve_epidemic(const VirusParams& p, const FixedPointConfig& cfg) {
  const Shifted sh = epidemic_shift(p, cfg);
  const Vector shifted = (p.delta.array() + sh.shift).matrix();
  const Matrix scaled = shifted.cwiseInverse().asDiagonal() * p.B;
  const PerronPair pp = perron_pair(MetzlerMatrix(scaled));
  const double r = pp.value;
  if (!(r > 1.0)) {
    throw ConsistencyError("solve_epidemic: rho((D+cI)^-1 B) = " + std::to_string(r) +
                           " is not above 1 although s(-D+B) > c");
  }
  const double epsilon = cfg.epsilon_scale * ((r - 1.0) / (r * pp.right.array())).minCoeff();
  const Vector start = epsilon * pp.right;
  if ((epidemic_map(p, sh.shift, start) - start).minCoeff() < -1e-15) {
    throw ConsistencyError("solve_epidemic: initializer is not below its image");
  }
  EpidemicSolution sol = iterate_map(p, sh.shift, start, cfg, /*monotone=*/true);
  sol.ratio = r;
  sol.epsilon = epsilon;
  return sol;
}

EpidemicSolution solve_epidemic_from(const VirusParams& p, const Vector& start,
                                     const FixedPointConfig& cfg) {
  if (start.size() != p.delta.size()) throw PreconditionError("solve_epidemic_from: dimension mismatch");
  if (!(start.array() > 0.0).all() || (start.array() > 1.0).any()) {
    throw PreconditionError("solve_epidemic_from: start must lie in (0,1]^n");
  }
  const Shifted sh = epidemic_shift(p, cfg);
  return iterate_map(p, sh.shift, start, cfg, /*monotone=*/false);
}

StabilityVerdict stability_verdict(const Matrix& J, double band) {
  const double s = spectral_abscissa(J);
  if (s < -band) return StabilityVerdict::LocallyStable;
  if (s > band) return StabilityVerdict::Unstable;
  return StabilityVerdict::Marginal;
}

EquilibriumReport make_report(const BiVirusModel& m, SystemState point, EquilibriumKind kind,
                              double band) {
  detail::require_same_size(m, point);
  EquilibriumReport rep;
  const auto n = static_cast<Eigen::Index>(m.size());
  Vector dx1(n), dx2(n);
  detail::bivirus_rhs(m, point.x1, point.x2, dx1, dx2);
  rep.residual = std::max(dx1.lpNorm<Eigen::Infinity>(), dx2.lpNorm<Eigen::Infinity>());
  const Matrix J = jacobian(m, point);
  rep.jacobian_abscissa = spectral_abscissa(J);
  rep.verdict = rep.jacobian_abscissa < -band   ? StabilityVerdict::LocallyStable
                : rep.jacobian_abscissa > band ? StabilityVerdict::Unstable
                                               : StabilityVerdict::Marginal;
  rep.point = std::move(point);
  rep.kind = kind;
  return rep;
}

SystemState CoexistenceContinuum::member(double alpha) const {
  if (!(alpha > 0.0)) throw PreconditionError("coexistence member needs alpha > 0");
  return SystemState{total * (alpha / (1.0 + alpha)), total / (1.0 + alpha)};
}

EquilibriumSet enumerate_equilibria(const BiVirusModel& m, const FixedPointConfig& cfg, double band) {
  const RegimeLabel label = classify(m, band);
  const auto n = m.size();
  EquilibriumSet out;
  out.equilibria.push_back(make_report(m, SystemState::healthy(n), EquilibriumKind::Healthy, band));

  std::optional<Vector> x1;
  if (label.abscissa1 > band) {
    x1 = solve_epidemic(m.virus1, cfg).x;
    out.equilibria.push_back(make_report(m, SystemState{*x1, Vector::Zero(x1->size())},
                                         EquilibriumKind::Virus1Epidemic, band));
  }
  if (label.abscissa2 > band) {
    const Vector x2 = solve_epidemic(m.virus2, cfg).x;
    out.equilibria.push_back(make_report(m, SystemState{Vector::Zero(x2.size()), x2},
                                         EquilibriumKind::Virus2Epidemic, band));
  }
  if (label.fitness == Fitness::EqualFitness && x1) {
    CoexistenceContinuum cont;
    cont.total = *x1;
    cont.representative = make_report(m, cont.member(1.0), EquilibriumKind::Coexisting, band);
    out.continuum = std::move(cont);
  }
  return out;
}

std::vector<ContinuumPoint> coexistence_continuum(const BiVirusModel& m,
                                                  const std::vector<SystemState>& ics,
                                                  const IntegratorConfig& icfg,
                                                  const FixedPointConfig& fcfg) {
  const RegimeLabel label = classify(m);
  const HomogeneityProfile prof = detect_homogeneity(m);
  const bool equal_ratio = prof.homogeneous && label.fitness == Fitness::EqualFitness;
  const bool identical = prof.identical && label.abscissa1 > kCriticalBand;
  if (!(label.regime == Regime::BothSupercritical && (equal_ratio || identical))) {
    throw PreconditionError(
        "coexistence_continuum: needs a homogeneous equal-ratio model above threshold or "
        "identical supercritical viruses");
  }
  for (const SystemState& s : ics) {
    if ((s.x1.array() == 0.0).all() || (s.x2.array() == 0.0).all()) {
      throw PreconditionError("coexistence_continuum: both viruses must be present initially");
    }
  }
  const Vector total = solve_epidemic(m.virus1, fcfg).x;

  const auto runs = detail::parallel_map<TrajectoryRecord>(
      ics.size(), [&](std::size_t k) { return simulate(m, ics[k], icfg); });

  std::vector<ContinuumPoint> out;
  out.reserve(ics.size());
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const TrajectoryRecord& traj = runs[k];
    if (traj.terminal_reason != TerminalReason::Converged) {
      throw NumericalError("coexistence_continuum: run " + std::to_string(k) + " ended with " +
                           std::string(to_string(traj.terminal_reason)));
    }
    ContinuumPoint pt;
    pt.point = traj.terminal();
    const Vector& a = pt.point.x1;
    const Vector& b = pt.point.x2;
    pt.alpha = a.dot(b) / b.squaredNorm();
    pt.parallel_deviation = ((a - pt.alpha * b).cwiseAbs().array() / (pt.alpha * b).array()).maxCoeff();
    if (!(pt.parallel_deviation < 1e-6)) {
      throw ConsistencyError("coexistence_continuum: terminal point of run " + std::to_string(k) +
                             " is not parallel, deviation " + std::to_string(pt.parallel_deviation));
    }
    if (prof.identical) {
      pt.sum_deviation = (a + b - total).lpNorm<Eigen::Infinity>();
      if (!(*pt.sum_deviation < 1e-6)) {
        throw ConsistencyError("coexistence_continuum: x1 + x2 of run " + std::to_string(k) +
                               " differs from the summed epidemic state by " +
                               std::to_string(*pt.sum_deviation));
      }
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace bivirus
