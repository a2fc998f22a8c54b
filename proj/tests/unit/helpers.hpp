#pragma once

#include "bivirus/model.hpp"

namespace testing {

using bivirus::Matrix;
using bivirus::Vector;

inline Matrix two_cycle() {
  Matrix A(2, 2);
  A << 0, 1, 1, 0;
  return A;
}

/// Directed ring i -> i+1 with unit weights.
inline Matrix directed_ring(Eigen::Index n) {
  Matrix A = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) A((i + 1) % n, i) = 1.0;
  return A;
}

inline Matrix complete_graph(Eigen::Index n) {
  return Matrix::Ones(n, n) - Matrix::Identity(n, n);
}

/// Undirected 4-cycle, every node has in-degree 2.
inline Matrix square() {
  Matrix A(4, 4);
  A << 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0;
  return A;
}

inline bivirus::VirusParams homogeneous(const Matrix& A, double delta, double beta) {
  return bivirus::VirusParams{Vector::Constant(A.rows(), delta), beta * A, std::nullopt};
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

}  // namespace testing
