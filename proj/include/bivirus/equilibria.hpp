#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "bivirus/dynamics.hpp"
#include "bivirus/model.hpp"
#include "bivirus/spectral.hpp"

namespace bivirus {

enum class Regime { BothSubcritical, Virus1Only, Virus2Only, BothSupercritical };
enum class Fitness { Virus1Fitter, Virus2Fitter, EqualFitness };

std::string_view to_string(Regime r);
std::string_view to_string(Fitness f);

struct RegimeLabel {
  Regime regime = Regime::BothSubcritical;
  /// Set only for BothSupercritical models with homogeneous or identical structure.
  std::optional<Fitness> fitness;
  double abscissa1 = 0.0;  ///< s(-D1 + B1)
  double abscissa2 = 0.0;  ///< s(-D2 + B2)
  /// rho(D^{-1} B) per virus, present when every healing rate is positive.
  std::optional<double> reproduction1, reproduction2;
  /// True when the fitness comparison used exact decimal values.
  bool exact_comparison = false;
};

/// Regime from the signs of the two linearization abscissae. Values inside the
/// critical band count as subcritical. A smaller delta/beta ratio is fitter.
RegimeLabel classify(const BiVirusModel& m, double band = kCriticalBand);

/// Compares delta1/beta1 with delta2/beta2 for a homogeneous profile, exactly
/// when decimal values are available and with relative tolerance 1e-12 otherwise.
Fitness compare_fitness(const HomogeneityProfile& profile, bool* exact = nullptr);

struct FixedPointConfig {
  double c_fraction = 0.5;     ///< shift c as a fraction of s(-D+B)
  double epsilon_scale = 0.9;  ///< safety factor on the initializer bound
  double tol = 1e-12;          ///< l-infinity change between iterates
  std::size_t max_iter = 100000;

  void validate() const;
};

struct EpidemicSolution {
  Vector x;                ///< the epidemic state, 0 << x << 1
  double residual = 0.0;   ///< l-infinity norm of (-D + B - X B) x
  std::size_t iterations = 0;
  double shift = 0.0;      ///< c
  double ratio = 0.0;      ///< r = rho((D + cI)^{-1} B)
  double epsilon = 0.0;
  Vector initializer;      ///< epsilon * v
};

/// Unique strictly positive equilibrium of the single-virus model.
///
/// Iterates x <- f(x) with f_i(x) = y_i / (1 - c/(c + delta_i) + y_i), where
/// y = (D + cI)^{-1} B x, starting from epsilon*v below the fixed point; the
/// iterates then increase monotonically. Throws PreconditionError when
/// s(-D+B) <= 0, NumericalError when the budget runs out or the residual check fails.
EpidemicSolution solve_epidemic(const VirusParams& p, const FixedPointConfig& cfg = {});

/// Same map started from a caller-supplied point in (0,1]^n. Used for the
/// uniqueness cross-check; no monotonicity assertion is made.
EpidemicSolution solve_epidemic_from(const VirusParams& p, const Vector& start,
                                     const FixedPointConfig& cfg = {});

/// One application of the fixed-point map for shift c.
Vector epidemic_map(const VirusParams& p, double shift, const Vector& x);

enum class StabilityVerdict { LocallyStable, Unstable, Marginal };
enum class EquilibriumKind { Healthy, Virus1Epidemic, Virus2Epidemic, Coexisting };

std::string_view to_string(StabilityVerdict v);
std::string_view to_string(EquilibriumKind k);

StabilityVerdict stability_verdict(const Matrix& J, double band = kCriticalBand);

struct EquilibriumReport {
  SystemState point;
  double residual = 0.0;
  double jacobian_abscissa = 0.0;
  StabilityVerdict verdict = StabilityVerdict::Marginal;
  EquilibriumKind kind = EquilibriumKind::Healthy;
};

/// Family of coexisting equilibria (alpha/(1+alpha) * total, 1/(1+alpha) * total),
/// alpha > 0, present under equal fitness.
struct CoexistenceContinuum {
  Vector total;                 ///< x1 + x2, shared by every member
  EquilibriumReport representative;  ///< member at alpha = 1

  SystemState member(double alpha) const;
};

struct EquilibriumSet {
  std::vector<EquilibriumReport> equilibria;
  std::optional<CoexistenceContinuum> continuum;
};

EquilibriumReport make_report(const BiVirusModel& m, SystemState point, EquilibriumKind kind,
                              double band = kCriticalBand);

/// Healthy state, plus each single-virus epidemic state whose linearization
/// is supercritical, each with its Jacobian verdict.
EquilibriumSet enumerate_equilibria(const BiVirusModel& m, const FixedPointConfig& cfg = {},
                                    double band = kCriticalBand);

struct ContinuumPoint {
  double alpha = 0.0;
  SystemState point;
  double parallel_deviation = 0.0;  ///< max_i |x1_i - alpha x2_i| / (alpha x2_i)
  std::optional<double> sum_deviation;  ///< vs the summed single-virus state, identical case only
};

/// Simulates from each initial state and fits x1 = alpha * x2 at the terminal
/// point. Runs concurrently; results follow the input order. Throws
/// PreconditionError outside the equal-fitness regimes and ConsistencyError when
/// a terminal point is not parallel to within 1e-6.
std::vector<ContinuumPoint> coexistence_continuum(const BiVirusModel& m,
                                                  const std::vector<SystemState>& ics,
                                                  const IntegratorConfig& icfg = {},
                                                  const FixedPointConfig& fcfg = {});

}  // namespace bivirus
