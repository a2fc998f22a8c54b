#include "doctest.h"
#include "helpers.hpp"

#include "bivirus/errors.hpp"
#include "bivirus/model.hpp"
#include "bivirus/rational.hpp"

using namespace bivirus;
using namespace testing;
using doctest::Approx;

TEST_CASE("validation") {
  SUBCASE("homogeneous viruses on one graph") {
    const BiVirusModel m{homogeneous(two_cycle(), 0.5, 1.0), homogeneous(two_cycle(), 0.5, 2.0)};
    const auto r = validate(m);
    CHECK(r.ok());
    CHECK(r.profile.kind == HomogeneityKind::HomogeneousSameGraph);
    CHECK(r.profile.delta1 == 0.5);
    CHECK(r.profile.beta2 == 2.0);
  }
  SUBCASE("identical parameters take precedence") {
    const VirusParams p = homogeneous(directed_ring(3), 0.4, 1.0);
    const auto r = validate(BiVirusModel{p, p});
    CHECK(r.ok());
    CHECK(r.profile.kind == HomogeneityKind::IdenticalParams);
    CHECK(r.profile.homogeneous);
  }
  SUBCASE("reducible infection matrix") {
    Matrix upper(2, 2);
    upper << 0, 1, 0, 0;
    const BiVirusModel m{VirusParams{vec({0.5, 0.5}), upper, std::nullopt}, homogeneous(two_cycle(), 0.5, 1.0)};
    const auto r = validate(m);
    CHECK_FALSE(r.ok());
    CHECK(r.failures().find("virus1.infection_irreducible") != std::string::npos);
  }
  SUBCASE("negative healing rate") {
    const BiVirusModel m{VirusParams{vec({-0.1, 0.5}), two_cycle(), std::nullopt}, homogeneous(two_cycle(), 0.5, 1.0)};
    CHECK(validate(m).failures().find("virus1.healing_nonnegative") != std::string::npos);
  }
  SUBCASE("dimension mismatch") {
    const BiVirusModel m{homogeneous(two_cycle(), 0.5, 1.0), homogeneous(directed_ring(3), 0.5, 1.0)};
    CHECK_FALSE(validate(m).ok());
  }
  SUBCASE("zero healing is a warning only for sensitivity") {
    const BiVirusModel m{VirusParams{vec({0.0, 0.5}), two_cycle(), std::nullopt}, homogeneous(two_cycle(), 0.5, 1.0)};
    CHECK(validate(m).ok());
    ValidateOptions opts;
    opts.for_sensitivity = true;
    const auto r = validate(m, opts);
    CHECK(r.ok());
    CHECK_FALSE(r.warnings.empty());
  }
  SUBCASE("different sparsity is general") {
    const BiVirusModel m{homogeneous(two_cycle(), 0.5, 1.0),
                         VirusParams{vec({0.5, 0.5}), two_cycle() + Matrix::Identity(2, 2), std::nullopt}};
    CHECK(validate(m).profile.kind == HomogeneityKind::General);
  }
}

TEST_CASE("bi-virus field") {
  const BiVirusModel scalar{homogeneous(Matrix::Ones(1, 1), 0.5, 1.0), homogeneous(Matrix::Ones(1, 1), 0.5, 1.0)};
  SUBCASE("healthy state is an equilibrium") {
    const auto f = bivirus_field(scalar, SystemState::healthy(1));
    CHECK(f.first(0) == 0.0);
    CHECK(f.second(0) == 0.0);
  }
  SUBCASE("scalar fixed point") {
    const auto f = bivirus_field(scalar, SystemState{vec({0.5}), vec({0.0})});
    CHECK(f.first(0) == Approx(0.0));
  }
  SUBCASE("saturated nodes only heal") {
    const BiVirusModel m{homogeneous(two_cycle(), 0.5, 1.0), homogeneous(two_cycle(), 0.3, 2.0)};
    const auto f = bivirus_field(m, SystemState{vec({0.25, 0.6}), vec({0.75, 0.4})});
    CHECK((f.first.array() <= 0.0).all());
    CHECK((f.second.array() <= 0.0).all());
  }
  SUBCASE("states outside the domain are rejected") {
    CHECK_THROWS_AS(bivirus_field(scalar, SystemState{vec({0.7}), vec({0.7})}), DomainError);
    CHECK_THROWS_AS(bivirus_field(scalar, SystemState{vec({-0.1}), vec({0.0})}), DomainError);
  }
}

TEST_CASE("single-virus field") {
  const VirusParams p = homogeneous(two_cycle(), 0.5, 1.0);
  CHECK(single_virus_field(p, Vector::Zero(2)).isZero());
  CHECK(single_virus_field(p, Vector::Ones(2)) == -p.delta);
  CHECK(single_virus_field(p, vec({0.5, 0.5})).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Jacobian") {
  const BiVirusModel m{homogeneous(two_cycle(), 0.5, 1.0), homogeneous(two_cycle(), 1.5, 1.0)};
  SUBCASE("block diagonal at the healthy state") {
    const Matrix J = jacobian(m, SystemState::healthy(2));
    CHECK(J.topLeftCorner(2, 2) == m.virus1.linearization());
    CHECK(J.bottomRightCorner(2, 2) == m.virus2.linearization());
    CHECK(J.topRightCorner(2, 2).isZero());
    CHECK(J.bottomLeftCorner(2, 2).isZero());
  }
  SUBCASE("central differences") {
    const SystemState s{vec({0.2, 0.35}), vec({0.4, 0.1})};
    const Matrix J = jacobian(m, s);
    const double h = 1e-6;
    for (Eigen::Index c = 0; c < 4; ++c) {
      SystemState up = s, down = s;
      (c < 2 ? up.x1(c) : up.x2(c - 2)) += h;
      (c < 2 ? down.x1(c) : down.x2(c - 2)) -= h;
      const auto fu = bivirus_field(m, up);
      const auto fd = bivirus_field(m, down);
      Vector col(4);
      col << (fu.first - fd.first) / (2 * h), (fu.second - fd.second) / (2 * h);
      CHECK((J.col(c) - col).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
  SUBCASE("zero eigenvalue along the continuum under equal fitness") {
    const VirusParams p1 = homogeneous(two_cycle(), 0.5, 1.0);
    const VirusParams p2 = homogeneous(two_cycle(), 0.25, 0.5);
    const BiVirusModel eq{p1, p2};
    const SystemState s{vec({0.3, 0.3}), vec({0.2, 0.2})};  // x1 + x2 = 1 - delta/beta
    Vector dir(4);
    dir << s.x1, -s.x1;
    CHECK((jacobian(eq, s) * dir).cwiseAbs().maxCoeff() < 1e-14);
  }
}
