#include "bivirus/sensitivity.hpp"

#include <ostream>
#include <string>

#include <spdlog/spdlog.h>

#include "bivirus/errors.hpp"
#include "bivirus/spectral.hpp"

namespace bivirus {

Perturbation Perturbation::zero(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  return Perturbation{Vector::Zero(m), Matrix::Zero(m, m)};
}

std::string_view to_string(SignVerdict v) {
  switch (v) {
    case SignVerdict::Decreasing: return "decreasing";
    case SignVerdict::Increasing: return "increasing";
    case SignVerdict::Neutral: return "neutral";
    case SignVerdict::Violation: return "violation";
  }
  return "?";
}

SensitivityResult sensitivity_solve(const VirusParams& p, const Vector& x_star,
                                    const Perturbation& pert) {
  const auto n = p.delta.size();
  if (x_star.size() != n || pert.d_delta.size() != n || pert.d_B.rows() != n || pert.d_B.cols() != n) {
    throw PreconditionError("sensitivity_solve: dimension mismatch");
  }
  if (!(p.delta.array() > 0.0).all()) {
    throw PreconditionError("sensitivity_solve: every healing rate must be positive");
  }
  if (!(x_star.array() > 0.0).all()) throw PreconditionError("sensitivity_solve: x_star must be positive");
  Vector residual(n);
  detail::single_rhs(p, x_star, residual);
  if (!(residual.lpNorm<Eigen::Infinity>() < 1e-8)) {
    throw PreconditionError("sensitivity_solve: x_star is not an equilibrium (residual " +
                            std::to_string(residual.lpNorm<Eigen::Infinity>()) + ")");
  }

  const Vector pressure = p.B * x_star;
  Matrix M = (Vector::Ones(n) - x_star).asDiagonal() * p.B;
  M.diagonal() -= p.delta + pressure;

  SensitivityResult out;
  out.system_matrix_abscissa = spectral_abscissa(M);
  if (!(out.system_matrix_abscissa < -kCriticalBand)) {
    throw ConsistencyError("sensitivity_solve: system matrix is not Hurwitz, s = " +
                           std::to_string(out.system_matrix_abscissa));
  }

  const Eigen::PartialPivLU<Matrix> lu(M);
  const Matrix inverse = lu.inverse();
  if (!inverse.allFinite()) throw NumericalError("sensitivity_solve: system matrix is singular");
  out.raw_inverse_negative = (inverse.array() < 0.0).all();
  if (!out.raw_inverse_negative) {
    throw ConsistencyError("sensitivity_solve: inverse of the system matrix has a nonnegative entry");
  }
  out.condition_estimate = 1.0 / lu.rcond();
  out.ill_conditioned = out.condition_estimate > 1e12;
  if (out.ill_conditioned) {
    spdlog::warn("sensitivity system is ill-conditioned (condition estimate {:.3e}); the model is "
                 "close to its epidemic threshold",
                 out.condition_estimate);
  }

  const Vector rhs = x_star.cwiseProduct(pert.d_delta) +
                     (x_star - Vector::Ones(n)).cwiseProduct(pert.d_B * x_star);
  out.d_x = lu.solve(rhs);
  return out;
}

std::vector<MonotonicityRow> monotonicity_report(const VirusParams& p, const Vector& x_star,
                                                 double step, const FixedPointConfig& cfg) {
  if (!(step >= 0.0)) throw PreconditionError("monotonicity_report: step must be nonnegative");
  const auto n = p.delta.size();
  std::vector<MonotonicityRow> rows;

  const auto evaluate = [&](std::string name, const Perturbation& pert, bool healing) {
    MonotonicityRow row;
    row.parameter = std::move(name);
    row.analytic = sensitivity_solve(p, x_star, pert).d_x;
    if (step == 0.0) {
      row.resolved = Vector::Zero(n);
      row.verdict = SignVerdict::Neutral;
    } else {
      VirusParams moved{p.delta + pert.d_delta, p.B + pert.d_B, std::nullopt};
      row.resolved = solve_epidemic(moved, cfg).x - x_star;
      const bool ok = healing ? (row.analytic.array() < 0.0).all() && (row.resolved.array() < 0.0).all()
                              : (row.analytic.array() > 0.0).all() && (row.resolved.array() > 0.0).all();
      row.verdict = !ok ? SignVerdict::Violation
                        : healing ? SignVerdict::Decreasing : SignVerdict::Increasing;
    }
    rows.push_back(std::move(row));
  };

  for (Eigen::Index i = 0; i < n; ++i) {
    Perturbation pert = Perturbation::zero(static_cast<std::size_t>(n));
    pert.d_delta(i) = step;
    evaluate("delta[" + std::to_string(i) + "]", pert, true);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(p.B(i, j) > 0.0)) continue;
      Perturbation pert = Perturbation::zero(static_cast<std::size_t>(n));
      pert.d_B(i, j) = step;
      evaluate("beta[" + std::to_string(i) + "][" + std::to_string(j) + "]", pert, false);
    }
  }
  return rows;
}

void write_sensitivity_csv(std::ostream& os, const std::vector<MonotonicityRow>& rows) {
  const auto n = rows.empty() ? 0 : rows.front().analytic.size();
  os << "parameter";
  for (Eigen::Index i = 0; i < n; ++i) os << ",dx_" << i;
  os << ",verdict\n";
  const auto old_precision = os.precision(17);
  for (const auto& row : rows) {
    os << row.parameter;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << row.analytic(i);
    os << ',' << to_string(row.verdict) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace bivirus
