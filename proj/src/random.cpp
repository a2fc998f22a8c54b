#include "bivirus/random.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace bivirus {

Matrix random_irreducible_nonnegative(std::size_t n, Rng& rng, double density) {
  const auto m = static_cast<Eigen::Index>(n);
  std::uniform_real_distribution<double> weight(0.1, 1.0), coin(0.0, 1.0);
  Matrix B = Matrix::Zero(m, m);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  if (n == 1) {
    B(0, 0) = weight(rng);
    return B;
  }
  for (std::size_t k = 0; k < n; ++k) B(order[(k + 1) % n], order[k]) = weight(rng);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (B(i, j) == 0.0 && coin(rng) < density) B(i, j) = weight(rng);
    }
  }
  return B;
}

Matrix random_irreducible_metzler(std::size_t n, Rng& rng, double lo, double hi) {
  Matrix M = random_irreducible_nonnegative(n, rng);
  std::uniform_real_distribution<double> diag(lo, hi);
  for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, i) = diag(rng);
  return M;
}

VirusParams random_virus(std::size_t n, Rng& rng, Criticality c) {
  VirusParams p;
  p.B = random_irreducible_nonnegative(n, rng);
  // Row sums of D^{-1}B bracket rho(D^{-1}B).
  std::uniform_real_distribution<double> scale = c == Criticality::Subcritical
                                                     ? std::uniform_real_distribution<double>(1.1, 2.0)
                                                     : std::uniform_real_distribution<double>(0.2, 0.8);
  p.delta = p.B.rowwise().sum();
  for (Eigen::Index i = 0; i < p.delta.size(); ++i) p.delta(i) *= scale(rng);
  return p;
}

SystemState random_interior_state(std::size_t n, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  SystemState s{Vector(m), Vector(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const double total = u(rng);
    const double share = u(rng);
    s.x1(i) = total * share;
    s.x2(i) = total * (1.0 - share);
  }
  return s;
}

}  // namespace bivirus
