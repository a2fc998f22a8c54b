#include "bivirus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "bivirus/control.hpp"
#include "bivirus/errors.hpp"
#include "bivirus/random.hpp"
#include "bivirus/sensitivity.hpp"
#include "bivirus/spectral.hpp"

namespace bivirus {
namespace {

using Outcome = std::optional<std::string>;  // counterexample, or nullopt on success
using Case = std::function<Outcome(std::size_t n, Rng& rng)>;

std::string show(const Matrix& M) {
  std::ostringstream os;
  os.precision(17);
  os << M;
  return os.str();
}

std::string show(const Vector& v) { return show(Matrix(v.transpose())); }

PropertyResult run(const std::string& name, std::size_t cases, std::size_t min_nodes,
                   const VerifyOptions& opts, std::uint64_t salt, const Case& body) {
  PropertyResult res;
  res.name = name;
  Rng rng(opts.seed * 1000003u + salt);
  const std::size_t lo = std::min(min_nodes, opts.max_nodes);
  std::uniform_int_distribution<std::size_t> size(lo, std::max(lo, opts.max_nodes));
  for (std::size_t k = 0; k < cases; ++k) {
    const std::size_t n = size(rng);
    ++res.cases;
    Outcome bad;
    try {
      bad = body(n, rng);
    } catch (const std::exception& e) {
      bad = std::string("exception: ") + e.what();
    }
    if (bad) {
      res.passed = false;
      res.counterexample = "case " + std::to_string(k) + " (n=" + std::to_string(n) + "): " + *bad;
      break;
    }
  }
  return res;
}

// (I + sign(B))^(n-1) all positive, computed on booleans.
bool reachability_oracle(const Matrix& B) {
  const auto n = B.rows();
  Eigen::MatrixXi R = (B.array() > 0.0).cast<int>().matrix() + Eigen::MatrixXi::Identity(n, n);
  Eigen::MatrixXi P = Eigen::MatrixXi::Identity(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) P = ((P * R).array() > 0).cast<int>().matrix();
  return (P.array() > 0).all();
}

Matrix random_sparse(std::size_t n, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double density = u(rng) * 0.6;
  Matrix B = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (u(rng) < density) B(i, j) = 0.1 + u(rng);
  return B;
}

}  // namespace

bool VerifySummary::all_passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

VerifySummary run_property_suite(const VerifyOptions& opts) {
  const std::size_t R = std::max<std::size_t>(opts.random_models, 1);
  VerifySummary out;
  auto& props = out.properties;

  props.push_back(run("netgraph.irreducibility_vs_reachability", 10 * R, 1, opts, 1,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const Matrix B = random_sparse(n, rng);
    const bool got = check_irreducible(B);
    if (got != reachability_oracle(B)) return "disagrees with reachability for\n" + show(B);
    Eigen::PermutationMatrix<Eigen::Dynamic> P(static_cast<Eigen::Index>(n));
    P.setIdentity();
    std::shuffle(P.indices().data(), P.indices().data() + n, rng);
    const Matrix permuted = P.transpose() * B * P;
    if (check_irreducible(permuted) != got) return "not permutation invariant for\n" + show(B);
    return std::nullopt;
  }));

  props.push_back(run("spectral.perron_pair_vs_eigensolve", 5 * R, 1, opts, 2,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const Matrix M = random_irreducible_metzler(n, rng);
    const PerronPair pp = perron_pair(MetzlerMatrix(M));
    const double s = spectral_abscissa(M);
    if (std::abs(s - pp.value) >= 1e-8) return "abscissa mismatch for\n" + show(M);
    if ((M * pp.right - pp.value * pp.right).lpNorm<Eigen::Infinity>() > 1e-8) return "right residual for\n" + show(M);
    if ((M.transpose() * pp.left - pp.value * pp.left).lpNorm<Eigen::Infinity>() > 1e-8) return "left residual for\n" + show(M);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Vector x(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    const double lambda = (M * x).cwiseQuotient(x).maxCoeff() + 1e-3;
    if (!(s < lambda)) return "Mx < lambda x but s(M) >= lambda for\n" + show(M);
    return std::nullopt;
  }));

  props.push_back(run("spectral.threshold_trichotomy", 10 * R, 1, opts, 3,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const Matrix N = random_irreducible_nonnegative(n, rng);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    Vector lam(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = -u(rng);
    const Matrix Lambda = lam.asDiagonal();
    const auto res = threshold_trichotomy(Lambda, N);
    const int sign_s = res.abscissa > kCriticalBand ? 1 : res.abscissa < -kCriticalBand ? -1 : 0;
    const int sign_r = res.radius - 1 > kCriticalBand ? 1 : res.radius - 1 < -kCriticalBand ? -1 : 0;
    if (sign_s != sign_r) return "sign mismatch for\n" + show(Matrix(Lambda + N));
    return std::nullopt;
  }));

  props.push_back(run("spectral.diagonal_lyapunov", 5 * R, 1, opts, 4,
                      [](std::size_t n, Rng& rng) -> Outcome {
    Matrix M = random_irreducible_metzler(n, rng);
    const double s = spectral_abscissa(M);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool critical = u(rng) < 0.3;
    M.diagonal().array() -= critical ? s : s + 0.05 + u(rng);
    const auto cert = diagonal_lyapunov(MetzlerMatrix(M));
    if (!(cert.diagonal.array() > 0.0).all()) return "P not positive for\n" + show(M);
    const Matrix Q = M.transpose() * cert.diagonal.asDiagonal();
    const Matrix form = Q + Q.transpose();
    const double top = Eigen::SelfAdjointEigenSolver<Matrix>(form).eigenvalues().maxCoeff();
    if (critical ? top > 1e-7 : top >= 0.0) return "certificate not definite for\n" + show(M);
    return std::nullopt;
  }));

  props.push_back(run("spectral.sign_pattern_violation", 10 * R, 2, opts, 5,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const Matrix M = random_irreducible_nonnegative(n, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    std::uniform_int_distribution<Eigen::Index> pick(0, x.size() - 1);
    x(pick(rng)) = 0.5 + u(rng);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (u(rng) < 0.4) x(i) = u(rng);
    if ((x.array() > 0.0).all()) x(pick(rng)) = 0.0;
    if ((x.array() == 0.0).all()) return std::nullopt;
    const std::size_t i = sign_pattern_violation(M, x);
    const auto k = static_cast<Eigen::Index>(i);
    if (!(x(k) == 0.0 && (M * x)(k) > 0.0)) return "index does not witness the lemma";
    return std::nullopt;
  }));

  props.push_back(run("spectral.negative_inverse", 10 * R, 1, opts, 6,
                      [](std::size_t n, Rng& rng) -> Outcome {
    Matrix M = random_irreducible_metzler(n, rng);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    M.diagonal().array() -= spectral_abscissa(M) + u(rng);
    const Matrix inv = negative_inverse_check(MetzlerMatrix(M));
    if (((M * inv) - Matrix::Identity(M.rows(), M.cols())).lpNorm<Eigen::Infinity>() > 1e-8)
      return "inverse inaccurate for\n" + show(M);
    return std::nullopt;
  }));

  props.push_back(run("model.jacobian_vs_finite_differences", 5 * R, 1, opts, 7,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const BiVirusModel m{random_virus(n, rng, Criticality::Supercritical),
                         random_virus(n, rng, Criticality::Subcritical)};
    const SystemState s = random_interior_state(n, rng);
    const Matrix J = jacobian(m, s);
    const auto dim = static_cast<Eigen::Index>(2 * n);
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix fd(dim, dim);
    const double h = 1e-6;
    for (Eigen::Index c = 0; c < dim; ++c) {
      SystemState up = s, down = s;
      (c < nn ? up.x1(c) : up.x2(c - nn)) += h;
      (c < nn ? down.x1(c) : down.x2(c - nn)) -= h;
      const auto fu = bivirus_field(m, up);
      const auto fl = bivirus_field(m, down);
      fd.col(c) << (fu.first - fl.first) / (2 * h), (fu.second - fl.second) / (2 * h);
    }
    const double err = (J - fd).lpNorm<Eigen::Infinity>() / std::max(1.0, J.lpNorm<Eigen::Infinity>());
    if (!(err < 1e-5)) return "relative error " + std::to_string(err);
    return std::nullopt;
  }));

  props.push_back(run("model.single_virus_reduction", 5 * R, 1, opts, 8,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const BiVirusModel m{random_virus(n, rng, Criticality::Supercritical),
                         random_virus(n, rng, Criticality::Supercritical)};
    SystemState s = random_interior_state(n, rng);
    s.x2.setZero();
    const auto f = bivirus_field(m, s);
    if (f.first != single_virus_field(m.virus1, s.x1)) return "x2 = 0 field differs from single field";
    if (!(f.second.array() == 0.0).all()) return "x2 = 0 is not invariant";
    return std::nullopt;
  }));

  props.push_back(run("model.identical_sum_dynamics", 5 * R, 1, opts, 9,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const BiVirusModel m{p, p};
    const SystemState s = random_interior_state(n, rng);
    const auto f = bivirus_field(m, s);
    const Vector sum = single_virus_field(p, s.x1 + s.x2);
    if ((f.first + f.second - sum).lpNorm<Eigen::Infinity>() > 1e-13) return "summed field differs";
    return std::nullopt;
  }));

  props.push_back(run("dynamics.healthy_convergence", R, 1, opts, 10,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const BiVirusModel m{random_virus(n, rng, Criticality::Subcritical),
                         random_virus(n, rng, Criticality::Subcritical)};
    const auto traj = simulate(m, random_interior_state(n, rng));
    if (traj.terminal_reason != TerminalReason::Converged) return "did not converge";
    const double norm = std::max(traj.terminal().x1.lpNorm<Eigen::Infinity>(), traj.terminal().x2.lpNorm<Eigen::Infinity>());
    if (!(norm < 1e-6)) return "terminal norm " + std::to_string(norm);
    return std::nullopt;
  }));

  props.push_back(run("dynamics.domain_invariance", R, 1, opts, 11,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const BiVirusModel m{random_virus(n, rng, Criticality::Supercritical),
                         random_virus(n, rng, Criticality::Supercritical)};
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;
    cfg.t_max = 200.0;
    const auto traj = simulate(m, random_interior_state(n, rng), cfg);
    if (!(traj.max_violation < kDomainTolerance)) return "violation " + std::to_string(traj.max_violation);
    for (const auto& s : traj.states)
      if (domain_violation(s) > 0.0) return "recorded state outside the domain";
    return std::nullopt;
  }));

  props.push_back(run("equilibria.fixed_point_vs_ode_and_uniqueness", R, 1, opts, 12,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const EpidemicSolution sol = solve_epidemic(p);
    if (!(sol.residual < 1e-10)) return "residual " + std::to_string(sol.residual);
    if (!(sol.x.array() < 1.0).all()) return "epidemic state not interior";
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector z0(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z0.size(); ++i) z0(i) = 0.01 + 0.98 * u(rng);
    const auto traj = simulate_single(p, z0);
    if ((traj.terminal() - sol.x).lpNorm<Eigen::Infinity>() >= 1e-6) return "ODE terminal differs from fixed point";
    for (int k = 0; k < 10; ++k) {
      Vector start = sol.initializer;
      for (Eigen::Index i = 0; i < start.size(); ++i) start(i) += u(rng) * (1.0 - start(i));
      const auto other = solve_epidemic_from(p, start);
      if ((other.x - sol.x).lpNorm<Eigen::Infinity>() >= 1e-9) return "second fixed point from\n" + show(start);
    }
    return std::nullopt;
  }));

  props.push_back(run("equilibria.homogeneous_identity", R, 1, opts, 13,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const Matrix A = (random_irreducible_nonnegative(n, rng).array() > 0.0).cast<double>();
    const double sA = spectral_abscissa(A);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const double beta = 0.5 + u(rng);
    const double delta = beta * sA * u(rng);
    const VirusParams p{Vector::Constant(static_cast<Eigen::Index>(n), delta), beta * A, std::nullopt};
    const Vector x = solve_epidemic(p).x;
    const double s = spectral_abscissa((Vector::Ones(x.size()) - x).asDiagonal() * A);
    if (std::abs(s - delta / beta) >= 1e-8) return "s((I-X)A) differs from delta/beta";
    return std::nullopt;
  }));

  props.push_back(run("dynamics.lyapunov_trace_monotone", R, 1, opts, 14,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const Vector x = solve_epidemic(p).x;
    std::uniform_real_distribution<double> u(0.01, 0.99);
    Vector z0(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z0.size(); ++i) z0(i) = u(rng);
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-13;
    const auto trace = lyapunov_trace(p, z0, x, cfg);
    for (std::size_t k = 1; k < trace.size(); ++k)
      if (trace[k] > trace[k - 1] + 1e-12) return "trace increases at step " + std::to_string(k);
    return std::nullopt;
  }));

  props.push_back(run("dynamics.positivity_time", R, 2, opts, 15,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    Vector z0 = Vector::Zero(static_cast<Eigen::Index>(n));
    std::uniform_int_distribution<Eigen::Index> pick(0, z0.size() - 1);
    z0(pick(rng)) = 0.3;
    if (!positivity_time(p, z0)) return "never strictly positive from\n" + show(z0);
    return std::nullopt;
  }));

  props.push_back(run("sensitivity.analytic_vs_resolve", R, 1, opts, 16,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const Vector x = solve_epidemic(p).x;
    const double h = 1e-6;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Perturbation pert = Perturbation::zero(n);
    for (Eigen::Index i = 0; i < pert.d_delta.size(); ++i) pert.d_delta(i) = h * u(rng);
    for (Eigen::Index k = 0; k < p.B.size(); ++k)
      if (p.B.data()[k] > 0.0) pert.d_B.data()[k] = h * u(rng);
    const Vector analytic = sensitivity_solve(p, x, pert).d_x;
    const VirusParams up{p.delta + pert.d_delta, p.B + pert.d_B, std::nullopt};
    const VirusParams down{p.delta - pert.d_delta, p.B - pert.d_B, std::nullopt};
    const Vector fd = (solve_epidemic(up).x - solve_epidemic(down).x) / 2.0;
    const double rel = (analytic - fd).lpNorm<Eigen::Infinity>() / fd.lpNorm<Eigen::Infinity>();
    if (!(rel < 1e-3)) return "relative error " + std::to_string(rel);
    for (const auto& row : monotonicity_report(p, x, 1e-4))
      if (row.verdict == SignVerdict::Violation) return "sign violation for " + row.parameter;
    return std::nullopt;
  }));

  props.push_back(run("control.closed_loop_repeller", R, 1, opts, 17,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const VirusParams p = random_virus(n, rng, Criticality::Subcritical);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    Vector k(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = u(rng);
    if (!(closed_loop_ratio(p, k) > 1.0)) return "rho(I + K^-1 B) <= 1";
    RepellerOptions ro;
    ro.random_directions = 2;
    ro.seed = rng();
    const auto rep = repeller_experiment(p, k, {1e-4, 1e-2}, ro);
    for (const auto& run : rep.runs)
      if (!run.escaped) return "closed loop did not leave the healthy state from\n" + show(run.direction);
    return std::nullopt;
  }));

  props.push_back(run("control.feedback_field_identity", 5 * R, 1, opts, 18,
                      [](std::size_t n, Rng& rng) -> Outcome {
    const BiVirusModel m{random_virus(n, rng, Criticality::Supercritical),
                         random_virus(n, rng, Criticality::Subcritical)};
    std::uniform_real_distribution<double> u(0.2, 3.0);
    FeedbackGains g{Vector(static_cast<Eigen::Index>(n)), Vector(static_cast<Eigen::Index>(n))};
    for (Eigen::Index i = 0; i < g.k1.size(); ++i) {
      g.k1(i) = u(rng);
      g.k2(i) = u(rng);
    }
    const SystemState s = random_interior_state(n, rng);
    BiVirusModel frozen = m;
    frozen.virus1.delta = g.k1.cwiseProduct(s.x1);
    frozen.virus2.delta = g.k2.cwiseProduct(s.x2);
    const auto a = feedback_field(m, g, s);
    const auto b = bivirus_field(frozen, s);
    if ((a.first - b.first).lpNorm<Eigen::Infinity>() > 1e-15 ||
        (a.second - b.second).lpNorm<Eigen::Infinity>() > 1e-15)
      return "feedback field differs from state-dependent healing";
    return std::nullopt;
  }));

  return out;
}

}  // namespace bivirus
