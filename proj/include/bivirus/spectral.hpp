#pragma once

#include <cstddef>
#include <string_view>

#include "bivirus/types.hpp"

namespace bivirus {

/// Square matrix with nonnegative off-diagonal entries.
///
/// The off-diagonal sign condition is checked exactly on construction; the
/// irreducibility flag is cached from the off-diagonal sparsity pattern.
class MetzlerMatrix {
 public:
  explicit MetzlerMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  bool is_irreducible() const noexcept { return irreducible_; }

 private:
  Matrix entries_;
  bool irreducible_;
};

/// Dominant eigenpair of an irreducible Metzler matrix. Both vectors are strictly
/// positive and normalized to unit l1 norm.
struct PerronPair {
  double value = 0.0;
  Vector right;
  Vector left;
  std::size_t iterations = 0;
};

struct PowerIterationOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
};

/// max Re(lambda) over the spectrum, from a dense eigensolve.
double spectral_abscissa(const Matrix& M);

/// max |lambda| over the spectrum, from a dense eigensolve.
double spectral_radius(const Matrix& M);

/// Perron value and vectors by shift-and-power iteration.
///
/// M is shifted by sigma = 1 + max|M_ii| so that M + sigma*I is nonnegative,
/// irreducible and has a positive diagonal (hence primitive). Power iteration on
/// the shifted matrix and its transpose keeps every iterate strictly positive.
PerronPair perron_pair(const MetzlerMatrix& M, const PowerIterationOptions& opts = {});

enum class Threshold { Below, Critical, Above };

std::string_view to_string(Threshold t);

struct TrichotomyResult {
  Threshold verdict = Threshold::Critical;
  double abscissa = 0.0;  ///< s(Lambda + N)
  double radius = 0.0;    ///< rho(-Lambda^{-1} N)
};

/// Classifies s(Lambda + N) against zero and cross-checks it against
/// rho(-Lambda^{-1} N) against one. Both are banded by `band`; a verdict of
/// Below on one side and Above on the other raises ConsistencyError.
TrichotomyResult threshold_trichotomy(const Matrix& Lambda, const Matrix& N,
                                      double band = kCriticalBand);

/// Diagonal Lyapunov certificate for an irreducible Metzler matrix with s(M) <= 0.
struct LyapunovCertificate {
  Vector diagonal;                 ///< P = diag(left_i / right_i)
  Vector form_eigenvalues;         ///< spectrum of M^T P + P M, ascending
  bool strict = false;             ///< true when negative definite (s(M) < 0)
};

/// Builds P from the Perron quotients and verifies the definiteness of
/// M^T P + P M with a symmetric eigensolve. Only verified certificates are returned.
LyapunovCertificate diagonal_lyapunov(const MetzlerMatrix& M, double band = kCriticalBand);

/// For irreducible nonnegative M and x >= 0 with x != 0 and a zero entry,
/// returns an index i with x_i == 0 and (M x)_i > 0.
std::size_t sign_pattern_violation(const Matrix& M, const Vector& x);

/// Inverse of a Hurwitz irreducible Metzler matrix, asserted entrywise negative.
Matrix negative_inverse_check(const MetzlerMatrix& M, double band = kCriticalBand);

}  // namespace bivirus
