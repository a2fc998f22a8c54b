#include "bivirus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "bivirus/errors.hpp"
#include "bivirus/netgraph.hpp"

namespace bivirus {
namespace {

void require_square_finite(const Matrix& M, const char* what) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw PreconditionError(std::string(what) + ": expected a nonempty square matrix, got " +
                            std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
  }
  if (!M.allFinite()) throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
}

std::string echo(const Matrix& M) {
  std::ostringstream os;
  os.precision(17);
  os << M;
  return os.str();
}

Eigen::VectorXcd eigenvalues(const Matrix& M, const char* what) {
  require_square_finite(M, what);
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": eigensolver did not converge for\n" + echo(M));
  }
  return es.eigenvalues();
}

Threshold banded(double value, double band) {
  if (value < -band) return Threshold::Below;
  if (value > band) return Threshold::Above;
  return Threshold::Critical;
}

// Power iteration on a nonnegative primitive matrix, l1-normalized iterates.
Vector power_iterate(const Matrix& A, const PowerIterationOptions& opts, std::size_t& iters) {
  const auto n = A.rows();
  Vector v = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (iters = 1; iters <= opts.max_iter; ++iters) {
    Vector w = A * v;
    w /= w.sum();
    const double change = (w - v).lpNorm<Eigen::Infinity>();
    v = std::move(w);
    if (change < opts.tol) return v;
  }
  throw NumericalError("power iteration exceeded " + std::to_string(opts.max_iter) +
                       " iterations for\n" + echo(A));
}

}  // namespace

std::string_view to_string(Threshold t) {
  switch (t) {
    case Threshold::Below: return "Below";
    case Threshold::Critical: return "Critical";
    case Threshold::Above: return "Above";
  }
  return "?";
}

MetzlerMatrix::MetzlerMatrix(Matrix entries) : entries_(std::move(entries)), irreducible_(false) {
  require_square_finite(entries_, "MetzlerMatrix");
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      if (i != j && entries_(i, j) < 0.0) {
        throw PreconditionError("MetzlerMatrix: off-diagonal entry (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") is negative");
      }
    }
  }
  irreducible_ = check_irreducible(entries_);
}

double spectral_abscissa(const Matrix& M) {
  return eigenvalues(M, "spectral_abscissa").real().maxCoeff();
}

double spectral_radius(const Matrix& M) {
  return eigenvalues(M, "spectral_radius").cwiseAbs().maxCoeff();
}

PerronPair perron_pair(const MetzlerMatrix& M, const PowerIterationOptions& opts) {
  if (!M.is_irreducible()) throw PreconditionError("perron_pair: matrix is reducible");
  const Matrix& E = M.entries();
  const auto n = E.rows();
  const double sigma = 1.0 + E.diagonal().cwiseAbs().maxCoeff();
  const Matrix A = E + sigma * Matrix::Identity(n, n);

  PerronPair out;
  std::size_t right_iters = 0, left_iters = 0;
  out.right = power_iterate(A, opts, right_iters);
  out.left = power_iterate(A.transpose(), opts, left_iters);
  out.iterations = std::max(right_iters, left_iters);

  // Two-sided quotient: error is the product of the two vector errors.
  out.value = out.left.dot(A * out.right) / out.left.dot(out.right) - sigma;

  if ((out.right.array() <= 0.0).any() || (out.left.array() <= 0.0).any()) {
    throw ConsistencyError("perron_pair: Perron vector is not strictly positive for\n" + echo(E));
  }
  return out;
}

TrichotomyResult threshold_trichotomy(const Matrix& Lambda, const Matrix& N, double band) {
  require_square_finite(Lambda, "threshold_trichotomy");
  require_square_finite(N, "threshold_trichotomy");
  if (Lambda.rows() != N.rows()) throw PreconditionError("threshold_trichotomy: dimension mismatch");
  const auto n = Lambda.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j ? !(Lambda(i, i) < 0.0) : Lambda(i, j) != 0.0) {
        throw PreconditionError("threshold_trichotomy: Lambda must be diagonal with negative entries");
      }
    }
  }
  if ((N.array() < 0.0).any()) throw PreconditionError("threshold_trichotomy: N has negative entries");
  if (!check_irreducible(N)) throw PreconditionError("threshold_trichotomy: N is reducible");

  TrichotomyResult out;
  out.abscissa = spectral_abscissa(Lambda + N);
  const Vector inv_diag = Lambda.diagonal().cwiseInverse();
  out.radius = spectral_radius(-(inv_diag.asDiagonal() * N));
  out.verdict = banded(out.abscissa, band);

  const Threshold by_radius = banded(out.radius - 1.0, band);
  const bool contradict = (out.verdict == Threshold::Below && by_radius == Threshold::Above) ||
                          (out.verdict == Threshold::Above && by_radius == Threshold::Below);
  if (contradict) {
    std::ostringstream os;
    os.precision(17);
    os << "threshold_trichotomy: s(Lambda+N) = " << out.abscissa
       << " disagrees with rho(-Lambda^-1 N) = " << out.radius;
    throw ConsistencyError(os.str());
  }
  return out;
}

LyapunovCertificate diagonal_lyapunov(const MetzlerMatrix& M, double band) {
  const PerronPair pp = perron_pair(M);
  if (pp.value > band) {
    throw PreconditionError("diagonal_lyapunov: s(M) = " + std::to_string(pp.value) + " > 0");
  }
  const Matrix& E = M.entries();
  LyapunovCertificate cert;
  cert.diagonal = pp.left.cwiseQuotient(pp.right);
  const Matrix PM = cert.diagonal.asDiagonal() * E;
  const Matrix Q = PM.transpose() + PM;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("diagonal_lyapunov: symmetric eigensolve failed for\n" + echo(Q));
  }
  cert.form_eigenvalues = es.eigenvalues();
  const auto n = cert.form_eigenvalues.size();
  const double top = cert.form_eigenvalues(n - 1);
  const double tol = 1e-8 * std::max(1.0, Q.cwiseAbs().rowwise().sum().maxCoeff());

  cert.strict = pp.value < -band;
  const bool ok = cert.strict
                      ? top < 0.0
                      : std::abs(top) <= tol && (n == 1 || cert.form_eigenvalues(n - 2) < -tol);
  if (!ok) {
    std::ostringstream os;
    os.precision(17);
    os << "diagonal_lyapunov: certificate failed verification, spectrum of M'P+PM is "
       << cert.form_eigenvalues.transpose();
    throw NumericalError(os.str());
  }
  return cert;
}

std::size_t sign_pattern_violation(const Matrix& M, const Vector& x) {
  require_square_finite(M, "sign_pattern_violation");
  if (x.size() != M.rows()) throw PreconditionError("sign_pattern_violation: dimension mismatch");
  if ((M.array() < 0.0).any()) throw PreconditionError("sign_pattern_violation: M has negative entries");
  if (!check_irreducible(M)) throw PreconditionError("sign_pattern_violation: M is reducible");
  if ((x.array() < 0.0).any()) throw PreconditionError("sign_pattern_violation: x has negative entries");
  if ((x.array() == 0.0).all()) throw PreconditionError("sign_pattern_violation: x is zero");
  if (!(x.array() == 0.0).any()) throw PreconditionError("sign_pattern_violation: x has no zero entry");

  const Vector y = M * x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == 0.0 && y(i) > 0.0) return static_cast<std::size_t>(i);
  }
  throw ConsistencyError("sign_pattern_violation: x and Mx share a sign pattern");
}

Matrix negative_inverse_check(const MetzlerMatrix& M, double band) {
  if (!M.is_irreducible()) throw PreconditionError("negative_inverse_check: matrix is reducible");
  const double s = spectral_abscissa(M.entries());
  if (!(s < -band)) {
    throw PreconditionError("negative_inverse_check: matrix is not Hurwitz, s(M) = " +
                            std::to_string(s));
  }
  const Matrix inv = M.entries().partialPivLu().inverse();
  if (!(inv.array() < 0.0).all()) {
    throw ConsistencyError("negative_inverse_check: inverse has a nonnegative entry:\n" + echo(inv));
  }
  return inv;
}

}  // namespace bivirus
