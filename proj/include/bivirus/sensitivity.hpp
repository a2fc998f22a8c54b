#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bivirus/equilibria.hpp"
#include "bivirus/model.hpp"

namespace bivirus {

/// Perturbation of the healing rates and the infection matrix.
struct Perturbation {
  Vector d_delta;
  Matrix d_B;

  static Perturbation zero(std::size_t n);
};

struct SensitivityResult {
  Vector d_x;
  double system_matrix_abscissa = 0.0;  ///< s(-D + B - X*B - diag(B x*))
  bool raw_inverse_negative = false;
  double condition_estimate = 0.0;      ///< 1-norm condition number estimate of the system matrix
  bool ill_conditioned = false;         ///< condition_estimate > 1e12
};

/// First-order change of the epidemic state x* under `pert`, from the linearized
/// equilibrium condition
///   (-D + B - X*B - diag(B x*)) dx = X* d_delta + (X* - I) d_B x*.
/// Requires positive healing rates. The system matrix must be Hurwitz with an
/// entrywise negative inverse; anything else raises ConsistencyError.
SensitivityResult sensitivity_solve(const VirusParams& p, const Vector& x_star,
                                    const Perturbation& pert);

enum class SignVerdict { Decreasing, Increasing, Neutral, Violation };

std::string_view to_string(SignVerdict v);

struct MonotonicityRow {
  std::string parameter;  ///< "delta[i]" or "beta[i][j]"
  Vector analytic;
  Vector resolved;        ///< x*(perturbed) - x*, by re-solving the equilibrium
  SignVerdict verdict = SignVerdict::Neutral;
};

/// Perturbs each healing rate and each positive infection rate by +step and
/// checks the strict sign of the response against re-solved equilibria.
std::vector<MonotonicityRow> monotonicity_report(const VirusParams& p, const Vector& x_star,
                                                 double step, const FixedPointConfig& cfg = {});

/// One row per perturbed parameter: parameter, dx_0..dx_{n-1}, verdict.
void write_sensitivity_csv(std::ostream& os, const std::vector<MonotonicityRow>& rows);

}  // namespace bivirus
