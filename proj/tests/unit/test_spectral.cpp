#include "doctest.h"
#include "helpers.hpp"

#include "bivirus/errors.hpp"
#include "bivirus/spectral.hpp"

using namespace bivirus;
using namespace testing;
using doctest::Approx;

TEST_CASE("spectral abscissa") {
  CHECK(spectral_abscissa(-Matrix::Identity(2, 2)) == Approx(-1.0));
  Matrix M(2, 2);
  M << -1, 2, 2, -1;
  CHECK(spectral_abscissa(M) == Approx(1.0));
  CHECK(spectral_abscissa(two_cycle() - 0.5 * Matrix::Identity(2, 2)) == Approx(0.5));
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius(Matrix::Identity(3, 3)) == Approx(1.0));
  CHECK(spectral_radius(2.0 * two_cycle()) == Approx(2.0));
  CHECK(spectral_radius(Matrix::Zero(2, 2)) == Approx(0.0));
}

TEST_CASE("Perron pair") {
  SUBCASE("two-cycle") {
    const PerronPair pp = perron_pair(MetzlerMatrix(two_cycle()));
    CHECK(pp.value == Approx(1.0).epsilon(1e-12));
    CHECK(pp.right(0) == Approx(0.5));
    CHECK(pp.right(1) == Approx(0.5));
    CHECK(pp.left(0) == Approx(0.5));
    CHECK(pp.left(1) == Approx(0.5));
  }
  SUBCASE("shifted two-cycle") {
    const PerronPair pp = perron_pair(MetzlerMatrix(two_cycle() - 2.0 * Matrix::Identity(2, 2)));
    CHECK(pp.value == Approx(-1.0).epsilon(1e-12));
    CHECK(pp.right(0) == Approx(0.5));
  }
  SUBCASE("scalar") {
    const PerronPair pp = perron_pair(MetzlerMatrix(Matrix::Constant(1, 1, -3.0)));
    CHECK(pp.value == Approx(-3.0));
    CHECK(pp.right(0) == Approx(1.0));
  }
  SUBCASE("non-symmetric") {
    Matrix M(2, 2);
    M << -1, 2, 0.5, -1;
    const PerronPair pp = perron_pair(MetzlerMatrix(M));
    CHECK(pp.value == Approx(0.0).epsilon(1e-12));
    CHECK(pp.right(0) == Approx(2.0 / 3.0));
    CHECK(pp.left(0) == Approx(1.0 / 3.0));
  }
}

TEST_CASE("Metzler construction rejects negative off-diagonals") {
  Matrix M(2, 2);
  M << 0, -1, 1, 0;
  CHECK_THROWS_AS(MetzlerMatrix{M}, PreconditionError);
}

TEST_CASE("threshold trichotomy") {
  const Matrix N = two_cycle();
  const Matrix I = Matrix::Identity(2, 2);
  auto r = threshold_trichotomy(-I, N);
  CHECK(r.verdict == Threshold::Critical);
  CHECK(r.abscissa == Approx(0.0));
  CHECK(r.radius == Approx(1.0));
  r = threshold_trichotomy(-2.0 * I, N);
  CHECK(r.verdict == Threshold::Below);
  CHECK(r.abscissa == Approx(-1.0));
  CHECK(r.radius == Approx(0.5));
  r = threshold_trichotomy(-0.5 * I, N);
  CHECK(r.verdict == Threshold::Above);
  CHECK(r.abscissa == Approx(0.5));
  CHECK(r.radius == Approx(2.0));
}

TEST_CASE("diagonal Lyapunov certificate") {
  SUBCASE("symmetric, strictly stable") {
    const Matrix M = -Matrix::Identity(2, 2) + 0.5 * two_cycle();
    const auto cert = diagonal_lyapunov(MetzlerMatrix(M));
    CHECK(cert.strict);
    CHECK(cert.diagonal(0) == Approx(cert.diagonal(1)));
    const double scale = cert.diagonal(0);
    CHECK(cert.form_eigenvalues(0) == Approx(-3.0 * scale));
    CHECK(cert.form_eigenvalues(1) == Approx(-1.0 * scale));
  }
  SUBCASE("critical, non-symmetric") {
    Matrix M(2, 2);
    M << -1, 2, 0.5, -1;
    const auto cert = diagonal_lyapunov(MetzlerMatrix(M));
    CHECK_FALSE(cert.strict);
    CHECK(cert.diagonal(1) / cert.diagonal(0) == Approx(4.0));
    CHECK(cert.form_eigenvalues(1) == Approx(0.0).epsilon(1e-10));
    CHECK(cert.form_eigenvalues(0) < 0.0);
  }
  SUBCASE("scalar") {
    const auto cert = diagonal_lyapunov(MetzlerMatrix(Matrix::Constant(1, 1, -1.0)));
    CHECK(cert.diagonal(0) == Approx(1.0));
  }
  SUBCASE("unstable input is rejected") {
    CHECK_THROWS(diagonal_lyapunov(MetzlerMatrix(two_cycle())));
  }
}

TEST_CASE("sign pattern index") {
  CHECK(sign_pattern_violation(two_cycle(), vec({1, 0})) == 1);
  const std::size_t i = sign_pattern_violation(Matrix::Ones(3, 3), vec({0, 1, 0}));
  CHECK((i == 0 || i == 2));
  CHECK(sign_pattern_violation(directed_ring(5), vec({1, 0, 0, 0, 0})) == 1);
}

TEST_CASE("negative inverse of Hurwitz irreducible Metzler matrices") {
  Matrix M(2, 2);
  M << -2, 1, 1, -2;
  Matrix expected(2, 2);
  expected << -2, -1, -1, -2;
  expected /= 3.0;
  CHECK((negative_inverse_check(MetzlerMatrix(M)) - expected).cwiseAbs().maxCoeff() < 1e-14);

  M << -1, 0.5, 0.5, -1;
  expected << -4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, -4.0 / 3.0;
  CHECK((negative_inverse_check(MetzlerMatrix(M)) - expected).cwiseAbs().maxCoeff() < 1e-14);

  const Matrix M3 = complete_graph(3) - 3.0 * Matrix::Identity(3, 3);
  Matrix e3 = Matrix::Constant(3, 3, -0.25);
  e3.diagonal().setConstant(-0.5);
  CHECK((negative_inverse_check(MetzlerMatrix(M3)) - e3).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS(negative_inverse_check(MetzlerMatrix(two_cycle())));
}
