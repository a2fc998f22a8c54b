#include "bivirus/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bivirus/errors.hpp"

namespace bivirus {

VirusParams VirusParams::from_graph(const ContactGraph& graph, Vector delta) {
  if (static_cast<std::size_t>(delta.size()) != graph.size()) {
    throw PreconditionError("healing-rate vector has " + std::to_string(delta.size()) +
                            " entries for a graph with " + std::to_string(graph.size()) + " nodes");
  }
  return VirusParams{std::move(delta), graph.adjacency_matrix(), std::nullopt};
}

Matrix VirusParams::linearization() const { return B - Matrix(delta.asDiagonal()); }

SystemState SystemState::healthy(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return SystemState{Vector::Zero(m), Vector::Zero(m)};
}

double domain_violation(const SystemState& s) {
  double v = 0.0;
  v = std::max(v, -s.x1.minCoeff());
  v = std::max(v, -s.x2.minCoeff());
  v = std::max(v, (s.x1 + s.x2).maxCoeff() - 1.0);
  return v;
}

double box_violation(const Vector& z) {
  return std::max({0.0, -z.minCoeff(), z.maxCoeff() - 1.0});
}

std::string to_string(HomogeneityKind kind) {
  switch (kind) {
    case HomogeneityKind::General: return "General";
    case HomogeneityKind::HomogeneousSameGraph: return "HomogeneousSameGraph";
    case HomogeneityKind::IdenticalParams: return "IdenticalParams";
  }
  return "?";
}

namespace {

// Single positive arc weight shared by every arc, if there is one.
std::optional<double> uniform_weight(const Matrix& B) {
  std::optional<double> w;
  for (Eigen::Index k = 0; k < B.size(); ++k) {
    const double b = B.data()[k];
    if (b > 0.0) {
      if (w && *w != b) return std::nullopt;
      w = b;
    }
  }
  return w;
}

std::optional<double> uniform_rate(const Vector& delta) {
  if (delta.size() == 0 || !(delta(0) > 0.0)) return std::nullopt;
  if ((delta.array() != delta(0)).any()) return std::nullopt;
  return delta(0);
}

std::optional<Rational> exact_weight(const VirusParams& p) {
  if (!p.exact) return std::nullopt;
  for (std::size_t k = 0; k < p.exact->infection.size(); ++k) {
    if (p.exact->infection[k] > 0) return p.exact->infection[k];
  }
  return std::nullopt;
}

std::optional<Rational> exact_rate(const VirusParams& p) {
  if (!p.exact || p.exact->delta.empty()) return std::nullopt;
  return p.exact->delta.front();
}

void check_params(const VirusParams& p, const std::string& label, ValidationReport& report,
                  const ValidateOptions& opts) {
  const bool finite = p.delta.allFinite() && p.B.allFinite();
  report.checks.push_back({label + ".finite", finite, finite ? "" : "non-finite rate"});

  const bool delta_ok = (p.delta.array() >= 0.0).all();
  report.checks.push_back(
      {label + ".healing_nonnegative", delta_ok, delta_ok ? "" : "a healing rate is negative"});

  const bool b_ok = (p.B.array() >= 0.0).all();
  report.checks.push_back(
      {label + ".infection_nonnegative", b_ok, b_ok ? "" : "an infection rate is negative"});

  const bool irreducible = check_irreducible(p.B);
  report.checks.push_back({label + ".infection_irreducible", irreducible,
                           irreducible ? "" : "infection graph is not strongly connected"});

  if (opts.for_sensitivity) {
    for (Eigen::Index i = 0; i < p.delta.size(); ++i) {
      if (p.delta(i) == 0.0) {
        report.warnings.push_back(label + ": healing rate at node " + std::to_string(i) +
                                  " is zero; sensitivity analysis needs positive rates");
      }
    }
  }
}

bool square_of(const VirusParams& p, Eigen::Index n) {
  return p.delta.size() == n && p.B.rows() == n && p.B.cols() == n;
}

}  // namespace

HomogeneityProfile detect_homogeneity(const BiVirusModel& m) {
  HomogeneityProfile prof;
  const VirusParams& a = m.virus1;
  const VirusParams& b = m.virus2;

  const Matrix pattern1 = (a.B.array() > 0.0).cast<double>();
  const Matrix pattern2 = (b.B.array() > 0.0).cast<double>();
  const auto w1 = uniform_weight(a.B), w2 = uniform_weight(b.B);
  const auto d1 = uniform_rate(a.delta), d2 = uniform_rate(b.delta);
  if (pattern1 == pattern2 && w1 && w2 && d1 && d2) {
    prof.homogeneous = true;
    prof.delta1 = *d1;
    prof.beta1 = *w1;
    prof.delta2 = *d2;
    prof.beta2 = *w2;
    prof.adjacency = pattern1;
    prof.exact_delta1 = exact_rate(a);
    prof.exact_beta1 = exact_weight(a);
    prof.exact_delta2 = exact_rate(b);
    prof.exact_beta2 = exact_weight(b);
  }
  prof.identical = a.delta == b.delta && a.B == b.B && (a.delta.array() > 0.0).all();

  if (prof.identical) {
    prof.kind = HomogeneityKind::IdenticalParams;
  } else if (prof.homogeneous) {
    prof.kind = HomogeneityKind::HomogeneousSameGraph;
  }
  return prof;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::failures() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    if (!c.passed) os << c.name << ": " << c.detail << '\n';
  }
  return os.str();
}

ValidationReport validate(const VirusParams& p, const ValidateOptions& opts) {
  ValidationReport report;
  const auto n = p.delta.size();
  const bool dims = n > 0 && square_of(p, n);
  report.checks.push_back({"dimension", dims, dims ? "" : "delta and B sizes disagree"});
  if (dims) check_params(p, "virus", report, opts);
  return report;
}

ValidationReport validate(const BiVirusModel& m, const ValidateOptions& opts) {
  ValidationReport report;
  const auto n = m.virus1.delta.size();
  const bool dims = n > 0 && square_of(m.virus1, n) && square_of(m.virus2, n);
  report.checks.push_back(
      {"dimension", dims, dims ? "" : "healing vectors and infection matrices disagree in size"});
  if (!dims) return report;
  check_params(m.virus1, "virus1", report, opts);
  check_params(m.virus2, "virus2", report, opts);
  report.profile = detect_homogeneity(m);
  return report;
}

namespace detail {

void require_same_size(const BiVirusModel& m, const SystemState& s) {
  const auto n = static_cast<Eigen::Index>(m.size());
  if (s.x1.size() != n || s.x2.size() != n || m.virus2.delta.size() != n) {
    throw PreconditionError("state dimension does not match the model");
  }
}

void bivirus_rhs(const BiVirusModel& m, const Eigen::Ref<const Vector>& x1,
                 const Eigen::Ref<const Vector>& x2, Eigen::Ref<Vector> dx1,
                 Eigen::Ref<Vector> dx2) {
  const Vector susceptible = Vector::Ones(x1.size()) - x1 - x2;
  dx1 = -m.virus1.delta.cwiseProduct(x1) + susceptible.cwiseProduct(m.virus1.B * x1);
  dx2 = -m.virus2.delta.cwiseProduct(x2) + susceptible.cwiseProduct(m.virus2.B * x2);
}

void single_rhs(const VirusParams& p, const Eigen::Ref<const Vector>& z, Eigen::Ref<Vector> dz) {
  dz = -p.delta.cwiseProduct(z) + (Vector::Ones(z.size()) - z).cwiseProduct(p.B * z);
}

}  // namespace detail

std::pair<Vector, Vector> bivirus_field(const BiVirusModel& m, const SystemState& s) {
  detail::require_same_size(m, s);
  const double v = domain_violation(s);
  if (v > kDomainTolerance) {
    throw DomainError("bivirus_field: state lies " + std::to_string(v) + " outside the domain");
  }
  const auto n = static_cast<Eigen::Index>(m.size());
  Vector dx1(n), dx2(n);
  detail::bivirus_rhs(m, s.x1, s.x2, dx1, dx2);
  return {std::move(dx1), std::move(dx2)};
}

Vector single_virus_field(const VirusParams& p, const Vector& z) {
  if (z.size() != p.delta.size()) throw PreconditionError("single_virus_field: dimension mismatch");
  const double v = box_violation(z);
  if (v > kDomainTolerance) {
    throw DomainError("single_virus_field: state lies " + std::to_string(v) + " outside [0,1]^n");
  }
  Vector dz(z.size());
  detail::single_rhs(p, z, dz);
  return dz;
}

Matrix jacobian(const BiVirusModel& m, const SystemState& s) {
  detail::require_same_size(m, s);
  const auto n = static_cast<Eigen::Index>(m.size());
  const Vector susceptible = Vector::Ones(n) - s.x1 - s.x2;
  const Vector pressure1 = m.virus1.B * s.x1;
  const Vector pressure2 = m.virus2.B * s.x2;

  Matrix J(2 * n, 2 * n);
  J.topLeftCorner(n, n) = susceptible.asDiagonal() * m.virus1.B;
  J.topLeftCorner(n, n).diagonal() -= m.virus1.delta + pressure1;
  J.topRightCorner(n, n) = -Matrix(pressure1.asDiagonal());
  J.bottomLeftCorner(n, n) = -Matrix(pressure2.asDiagonal());
  J.bottomRightCorner(n, n) = susceptible.asDiagonal() * m.virus2.B;
  J.bottomRightCorner(n, n).diagonal() -= m.virus2.delta + pressure2;
  return J;
}

}  // namespace bivirus
