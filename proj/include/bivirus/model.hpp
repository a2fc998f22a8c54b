#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bivirus/netgraph.hpp"
#include "bivirus/rational.hpp"
#include "bivirus/types.hpp"

namespace bivirus {

/// Exact decimal values of the rates, kept when the parameters were authored
/// as decimal strings. `infection` is row-major n*n.
struct ExactRates {
  std::vector<Rational> delta;
  std::vector<Rational> infection;
};

/// Healing rates and infection matrix of one virus.
struct VirusParams {
  Vector delta;  ///< healing rate per node
  Matrix B;      ///< B(i, j): rate at which node j infects node i
  std::optional<ExactRates> exact;

  static VirusParams from_graph(const ContactGraph& graph, Vector delta);

  std::size_t size() const noexcept { return static_cast<std::size_t>(delta.size()); }
  Matrix healing_matrix() const { return delta.asDiagonal(); }
  /// -D + B, the linearization at the healthy state.
  Matrix linearization() const;
};

struct BiVirusModel {
  VirusParams virus1;
  VirusParams virus2;

  std::size_t size() const noexcept { return virus1.size(); }
};

/// Pair of infection-probability vectors. Meaningful states satisfy
/// x1 >= 0, x2 >= 0 and x1 + x2 <= 1 componentwise.
struct SystemState {
  Vector x1;
  Vector x2;

  static SystemState healthy(std::size_t n);
};

/// Distance by which a state leaves the invariant set, 0 when inside.
double domain_violation(const SystemState& s);
double box_violation(const Vector& z);

/// States within this distance of the invariant set are accepted.
inline constexpr double kDomainTolerance = 1e-9;

enum class HomogeneityKind { General, HomogeneousSameGraph, IdenticalParams };

std::string to_string(HomogeneityKind kind);

/// Detected special structure of a model.
///
/// `homogeneous` holds when both viruses use one sparsity pattern with a single
/// healing rate and a single arc weight each; `identical` when D1 = D2 > 0 and
/// B1 = B2. `kind` reports the more specific of the two.
struct HomogeneityProfile {
  HomogeneityKind kind = HomogeneityKind::General;
  bool homogeneous = false;
  bool identical = false;
  double delta1 = 0.0, beta1 = 0.0, delta2 = 0.0, beta2 = 0.0;
  std::optional<Rational> exact_delta1, exact_beta1, exact_delta2, exact_beta2;
  Matrix adjacency;  ///< 0/1 pattern shared by both viruses (homogeneous only)
};

HomogeneityProfile detect_homogeneity(const BiVirusModel& m);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::string> warnings;
  HomogeneityProfile profile;

  bool ok() const;
  /// Newline-separated descriptions of the failed checks.
  std::string failures() const;
};

struct ValidateOptions {
  /// Zero healing rates are allowed by the dynamics but not by the
  /// sensitivity analysis; flag them when true.
  bool for_sensitivity = false;
};

ValidationReport validate(const BiVirusModel& m, const ValidateOptions& opts = {});
ValidationReport validate(const VirusParams& p, const ValidateOptions& opts = {});

/// Right-hand side of the bi-virus ODE. Throws DomainError when s is outside
/// the invariant set by more than kDomainTolerance.
std::pair<Vector, Vector> bivirus_field(const BiVirusModel& m, const SystemState& s);

/// Right-hand side of the single-virus ODE on [0,1]^n.
Vector single_virus_field(const VirusParams& p, const Vector& z);

/// Jacobian of the bi-virus field, 2n x 2n, in (x1, x2) block order.
Matrix jacobian(const BiVirusModel& m, const SystemState& s);

namespace detail {
// Unchecked kernels shared with the integrators.
void bivirus_rhs(const BiVirusModel& m, const Eigen::Ref<const Vector>& x1,
                 const Eigen::Ref<const Vector>& x2, Eigen::Ref<Vector> dx1,
                 Eigen::Ref<Vector> dx2);
void single_rhs(const VirusParams& p, const Eigen::Ref<const Vector>& z, Eigen::Ref<Vector> dz);
void require_same_size(const BiVirusModel& m, const SystemState& s);
}  // namespace detail

}  // namespace bivirus
