// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bivirus/control.hpp"
#include "bivirus/equilibria.hpp"
#include "bivirus/errors.hpp"
#include "bivirus/random.hpp"
#include "bivirus/rational.hpp"
#include "bivirus/sensitivity.hpp"
#include "bivirus/spectral.hpp"

using namespace bivirus;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
  std::string failure;

  void fail(const std::string& what) {
    if (passed) failure = what;
    passed = false;
  }
};

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int band_sign(double v) { return v > kCriticalBand ? 1 : v < -kCriticalBand ? -1 : 0; }

double sup(const Vector& v) { return v.cwiseAbs().maxCoeff(); }
double sup(const SystemState& s) { return std::max(sup(s.x1), sup(s.x2)); }

Vector random_box(std::size_t n, Rng& rng, double lo, double hi) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

/// 0/1 pattern of a random irreducible graph.
Matrix random_pattern(std::size_t n, Rng& rng) {
  return (random_irreducible_nonnegative(n, rng, 0.4).array() > 0.0).cast<double>();
}

/// Homogeneous virus with exact decimal rates on pattern A.
VirusParams exact_homogeneous(const Matrix& A, const std::string& delta, const std::string& beta) {
  const Rational d = parse_decimal(delta), b = parse_decimal(beta);
  VirusParams p{Vector::Constant(A.rows(), static_cast<double>(d)), static_cast<double>(b) * A, ExactRates{}};
  p.exact->delta.assign(static_cast<std::size_t>(A.rows()), d);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) p.exact->infection.push_back(A(i, j) > 0 ? b : Rational(0));
  return p;
}

Outcome threshold_trichotomy_agreement() {
  Outcome out;
  Rng rng(101);
  int counts[3] = {0, 0, 0};
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const Matrix N = random_irreducible_nonnegative(n, rng);
    Vector lam = -random_box(n, rng, 0.1, 3.0);
    // every fifth pair is rescaled onto the threshold itself
    if (k % 5 == 0) lam *= spectral_radius(Matrix(Vector(-lam.cwiseInverse()).asDiagonal() * N));
    const Matrix Lambda = lam.asDiagonal();
    const int s_sign = band_sign(spectral_abscissa(Lambda + N));
    const int r_sign = band_sign(spectral_radius(Matrix(Vector(-lam.cwiseInverse()).asDiagonal() * N)) - 1.0);
    ++counts[s_sign + 1];
    if (s_sign != r_sign) out.fail("pair " + std::to_string(k) + ": sign(s) != sign(rho - 1)");
    try {
      const auto r = threshold_trichotomy(Lambda, N);
      if (static_cast<int>(r.verdict) - 1 != s_sign) out.fail("pair " + std::to_string(k) + ": verdict differs");
    } catch (const Error& e) {
      out.fail("pair " + std::to_string(k) + ": " + e.what());
    }
  }
  out.detail = "500 pairs (" + std::to_string(counts[0]) + " below, " + std::to_string(counts[1]) +
               " critical, " + std::to_string(counts[2]) + " above)";
  return out;
}

Outcome healthy_convergence() {
  Outcome out;
  Rng rng(202);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const BiVirusModel m{random_virus(n, rng, Criticality::Subcritical), random_virus(n, rng, Criticality::Subcritical)};
    if (m.virus1.linearization().size() && (spectral_abscissa(m.virus1.linearization()) > 0.0 ||
                                           spectral_abscissa(m.virus2.linearization()) > 0.0)) {
      out.fail("model " + std::to_string(k) + " is not subcritical");
      continue;
    }
    const auto traj = simulate(m, random_interior_state(n, rng));
    const double norm = sup(traj.terminal());
    worst = std::max(worst, norm);
    if (traj.terminal_reason != TerminalReason::Converged || !(norm < 1e-6))
      out.fail("model " + std::to_string(k) + ": terminal norm " + std::to_string(norm));
  }
  std::ostringstream os;
  os << "50 models, worst terminal norm " << worst;
  out.detail = os.str();
  return out;
}

Outcome epidemic_solver() {
  Outcome out;
  double closed_err = 0.0, ode_err = 0.0, spread = 0.0, residual = 0.0;

  // d-regular graphs: directed ring (d = 1), 4-cycle (d = 2), complete graphs (d = n - 1)
  std::vector<std::pair<Matrix, double>> graphs;
  for (Eigen::Index n : {3, 6}) {
    Matrix ring = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) ring((i + 1) % n, i) = 1.0;
    graphs.emplace_back(ring, 1.0);
  }
  Matrix square(4, 4);
  square << 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0;
  graphs.emplace_back(square, 2.0);
  for (Eigen::Index n : {3, 5, 8}) graphs.emplace_back(Matrix::Ones(n, n) - Matrix::Identity(n, n), double(n - 1));
  for (const auto& [A, d] : graphs) {
    for (double beta : {0.5, 1.0, 2.5}) {
      for (double frac : {0.1, 0.5, 0.9}) {
        const double delta = frac * beta * d;
        const VirusParams p{Vector::Constant(A.rows(), delta), beta * A, std::nullopt};
        const Vector x = solve_epidemic(p).x;
        closed_err = std::max(closed_err, sup((x.array() - (1.0 - delta / (beta * d))).matrix()));
      }
    }
  }
  if (!(closed_err < 1e-10)) out.fail("closed form error " + std::to_string(closed_err));

  Rng rng(303);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const EpidemicSolution sol = solve_epidemic(p);
    residual = std::max(residual, sol.residual);
    if (!(sol.residual < 1e-10)) out.fail("model " + std::to_string(k) + ": residual too large");
    const auto traj = simulate_single(p, random_box(n, rng, 0.01, 0.99));
    const double e = sup(Vector(traj.terminal() - sol.x));
    ode_err = std::max(ode_err, e);
    if (!(e < 1e-6)) out.fail("model " + std::to_string(k) + ": ODE terminal differs by " + std::to_string(e));
    for (int j = 0; j < 10; ++j) {
      const Vector start = j == 0 ? sol.initializer : random_box(n, rng, 1e-3, 1.0);
      const double d = sup(Vector(solve_epidemic_from(p, start).x - sol.x));
      spread = std::max(spread, d);
      if (!(d < 1e-9)) out.fail("model " + std::to_string(k) + ": initializer " + std::to_string(j) + " differs");
    }
  }
  std::ostringstream os;
  os << "closed form err " << closed_err << ", residual " << residual << ", ODE err " << ode_err
     << ", initializer spread " << spread;
  out.detail = os.str();
  return out;
}

Outcome survival_of_the_fitter() {
  Outcome out;
  Rng rng(404);
  double worst = 0.0;
  int runs = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = uniform_size(rng, 2, 8);
    const Matrix A = random_pattern(n, rng);
    const double sA = spectral_abscissa(A);
    const double r1 = sA * uniform(rng, 0.3, 0.9);
    const double r2 = r1 * uniform(rng, 0.3, 0.9);
    const double b1 = uniform(rng, 0.5, 2.0), b2 = uniform(rng, 0.5, 2.0);
    const BiVirusModel m{VirusParams{Vector::Constant(A.rows(), r1 * b1), b1 * A, std::nullopt},
                         VirusParams{Vector::Constant(A.rows(), r2 * b2), b2 * A, std::nullopt}};
    const auto label = classify(m);
    if (label.fitness != Fitness::Virus2Fitter) out.fail("instance " + std::to_string(k) + ": fitness label");
    const auto set = enumerate_equilibria(m);
    if (set.equilibria.size() != 3 || set.equilibria[0].verdict != StabilityVerdict::Unstable ||
        set.equilibria[1].verdict != StabilityVerdict::Unstable ||
        set.equilibria[2].verdict != StabilityVerdict::LocallyStable) {
      out.fail("instance " + std::to_string(k) + ": Jacobian verdicts");
      continue;
    }
    const Vector x2 = set.equilibria[2].point.x2;
    for (int j = 0; j < 5; ++j) {
      const auto traj = simulate(m, random_interior_state(n, rng));
      const double e = std::max(sup(traj.terminal().x1), sup(Vector(traj.terminal().x2 - x2)));
      worst = std::max(worst, e);
      ++runs;
      if (traj.terminal_reason != TerminalReason::Converged || !(e < 1e-6))
        out.fail("instance " + std::to_string(k) + " run " + std::to_string(j) + ": distance " + std::to_string(e));
    }
  }
  std::ostringstream os;
  os << "20 instances, " << runs << " runs, worst distance to (0, x2) " << worst;
  out.detail = os.str();
  return out;
}

Outcome coexistence() {
  Outcome out;
  struct Instance {
    std::string d1, b1, d2, b2;
  };
  const std::vector<Instance> rates{{"0.5", "1", "0.25", "0.5"},
                                    {"0.3", "0.6", "0.1", "0.2"},
                                    {"0.4", "1.2", "0.2", "0.6"},
                                    {"0.6", "1.5", "0.6", "1.5"},
                                    {"0.35", "0.7", "0.35", "0.7"}};
  Rng rng(505);
  double worst_parallel = 0.0, worst_sum = 0.0, worst_eig = 0.0;
  int instances = 0;
  for (std::size_t k = 0; k < rates.size() * 2; ++k) {
    const Instance& r = rates[k % rates.size()];
    const std::size_t n = uniform_size(rng, 2, 6);
    const Matrix A = random_pattern(n, rng);
    const BiVirusModel m{exact_homogeneous(A, r.d1, r.b1), exact_homogeneous(A, r.d2, r.b2)};
    const auto label = classify(m);
    const double threshold = static_cast<double>(parse_decimal(r.d1) / parse_decimal(r.b1));
    if (!(spectral_abscissa(A) > threshold)) continue;
    ++instances;
    if (label.fitness != Fitness::EqualFitness || !label.exact_comparison)
      out.fail("instance " + std::to_string(k) + ": not labelled equal fitness");

    std::vector<SystemState> ics;
    for (int j = 0; j < 4; ++j) ics.push_back(random_interior_state(n, rng));
    const IntegratorConfig icfg;
    std::vector<ContinuumPoint> points;
    try {
      points = coexistence_continuum(m, ics, icfg);
    } catch (const Error& e) {
      out.fail("instance " + std::to_string(k) + ": " + e.what());
      continue;
    }
    const Vector total = solve_epidemic(m.virus1).x;
    double lo = points.front().alpha, hi = lo;
    for (const auto& pt : points) {
      lo = std::min(lo, pt.alpha);
      hi = std::max(hi, pt.alpha);
      const Vector& a = pt.point.x1;
      const Vector& b = pt.point.x2;
      const double parallel = ((a - pt.alpha * b).cwiseAbs().array() / (pt.alpha * b).array()).maxCoeff();
      worst_parallel = std::max(worst_parallel, parallel);
      if (!(parallel < 1e-6)) out.fail("instance " + std::to_string(k) + ": terminal not parallel");
      const double sum = sup(Vector(a + b - total));
      worst_sum = std::max(worst_sum, sum);
      if (!(sum < 1e-6)) out.fail("instance " + std::to_string(k) + ": x1 + x2 differs from x*");

      const Matrix J = jacobian(m, pt.point);
      Vector dir(2 * a.size());
      dir << a, -a;
      const double image = sup(Vector(J * dir)) / sup(a);
      const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(J).eigenvalues();
      const double nearest = ev.cwiseAbs().minCoeff();
      worst_eig = std::max({worst_eig, image, nearest});
      if (!(nearest < 1e-6) || !(image < 1e-6))
        out.fail("instance " + std::to_string(k) + ": no zero eigenvalue along (x1, -x1)");
    }
    if (!(hi - lo > 0.1)) out.fail("instance " + std::to_string(k) + ": alpha values do not spread");
  }
  if (instances < 5) out.fail("too few supercritical instances");
  std::ostringstream os;
  os << instances << " instances, worst parallel dev " << worst_parallel << ", sum dev " << worst_sum
     << ", zero-eigen residual " << worst_eig;
  out.detail = os.str();
  return out;
}

Outcome sensitivity() {
  Outcome out;
  Rng rng(606);
  double worst_rel = 0.0;
  std::size_t rows = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const Vector x = solve_epidemic(p).x;
    const double h = 1e-6;
    Perturbation pert = Perturbation::zero(n);
    for (Eigen::Index i = 0; i < pert.d_delta.size(); ++i) pert.d_delta(i) = h * uniform(rng, -1, 1);
    for (Eigen::Index i = 0; i < p.B.size(); ++i)
      if (p.B.data()[i] > 0.0) pert.d_B.data()[i] = h * uniform(rng, -1, 1);
    const Vector analytic = sensitivity_solve(p, x, pert).d_x;
    const VirusParams up{p.delta + pert.d_delta, p.B + pert.d_B, std::nullopt};
    const VirusParams down{p.delta - pert.d_delta, p.B - pert.d_B, std::nullopt};
    const Vector resolved = (solve_epidemic(up).x - solve_epidemic(down).x) / 2.0;
    const double rel = sup(Vector(analytic - resolved)) / sup(resolved);
    worst_rel = std::max(worst_rel, rel);
    if (!(rel < 1e-3)) out.fail("model " + std::to_string(k) + ": relative error " + std::to_string(rel));

    for (const auto& row : monotonicity_report(p, x, 1e-4)) {
      ++rows;
      const bool healing = row.parameter.rfind("delta", 0) == 0;
      const bool analytic_ok = healing ? (row.analytic.array() < 0.0).all() : (row.analytic.array() > 0.0).all();
      const bool resolved_ok = healing ? (row.resolved.array() < 0.0).all() : (row.resolved.array() > 0.0).all();
      if (!analytic_ok || !resolved_ok) out.fail("model " + std::to_string(k) + ": sign of " + row.parameter);
    }
  }
  double scalar_err = 0.0;
  for (double beta : {0.5, 1.0, 3.0}) {
    for (double frac : {0.2, 0.5, 0.8}) {
      const VirusParams p{Vector::Constant(1, frac * beta), Matrix::Constant(1, 1, beta), std::nullopt};
      Perturbation unit = Perturbation::zero(1);
      unit.d_delta(0) = 1.0;
      const Vector dx = sensitivity_solve(p, solve_epidemic(p).x, unit).d_x;
      scalar_err = std::max(scalar_err, std::abs(dx(0) + 1.0 / beta));
    }
  }
  if (!(scalar_err < 1e-10)) out.fail("scalar derivative error " + std::to_string(scalar_err));
  std::ostringstream os;
  os << "50 models, worst relative error " << worst_rel << ", " << rows << " sign rows, scalar err " << scalar_err;
  out.detail = os.str();
  return out;
}

Outcome feedback_impossibility() {
  Outcome out;
  Rng rng(707);
  double min_ratio = 1e300, worst_target = 0.0, worst_base = 0.0, worst_abscissa = 0.0;
  std::size_t runs = 0;
  IntegratorConfig baseline_cfg;
  baseline_cfg.t_max = 1e8;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const VirusParams p{Vector::Zero(static_cast<Eigen::Index>(n)), random_irreducible_nonnegative(n, rng), std::nullopt};
    const Vector gains = random_box(n, rng, 0.2, 3.0);
    const double ratio = closed_loop_ratio(p, gains);
    min_ratio = std::min(min_ratio, ratio);
    if (!(ratio > 1.0)) out.fail("model " + std::to_string(k) + ": rho(I + K^-1 B) <= 1");

    RepellerOptions opts;
    opts.seed = 1000 + static_cast<std::uint64_t>(k);
    const auto rep = repeller_experiment(p, gains, {1e-6, 1e-4, 1e-2}, opts);
    if (!(rep.target.array() > 0.0).all()) out.fail("model " + std::to_string(k) + ": target not positive");
    for (const auto& run : rep.runs) {
      ++runs;
      worst_target = std::max(worst_target, run.distance_to_target);
      if (!run.escaped) out.fail("model " + std::to_string(k) + ": a perturbed run did not reach x*");
    }

    const BaselineReport base = constant_healing_baseline(p, random_box(n, rng, 0.05, 0.95), baseline_cfg);
    worst_abscissa = std::max(worst_abscissa, std::abs(base.abscissa));
    const double terminal = sup(base.trajectory.terminal());
    worst_base = std::max(worst_base, terminal);
    if (!(std::abs(base.abscissa) < 1e-9)) out.fail("model " + std::to_string(k) + ": baseline abscissa");
    const auto& states = base.trajectory.states;
    const double midway = sup(states[states.size() / 2]);
    if (base.trajectory.terminal_reason != TerminalReason::Converged || !(terminal < 1e-4) || !(terminal < midway))
      out.fail("model " + std::to_string(k) + ": baseline terminal norm " + std::to_string(terminal));
  }
  std::ostringstream os;
  os << "20 models, min ratio " << min_ratio << ", " << runs << " perturbed runs, worst distance to x* "
     << worst_target << "; baseline |s| " << worst_abscissa << ", terminal norm " << worst_base;
  out.detail = os.str();
  return out;
}

Outcome structural_lemmas() {
  Outcome out;
  Rng rng(808);
  std::ostringstream os;

  for (int k = 0; k < 200; ++k) {
    const std::size_t n = uniform_size(rng, 2, 8);
    const Matrix M = random_irreducible_nonnegative(n, rng);
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    const std::size_t support = uniform_size(rng, 1, n - 1);
    for (std::size_t j = 0; j < support; ++j) x(static_cast<Eigen::Index>(uniform_size(rng, 0, n - 1))) = uniform(rng, 0.1, 1.0);
    const auto i = static_cast<Eigen::Index>(sign_pattern_violation(M, x));
    if (!(x(i) == 0.0 && (M * x)(i) > 0.0)) out.fail("sign pattern instance " + std::to_string(k));
  }
  os << "sign pattern 200";

  IntegratorConfig tight;
  tight.rtol = 1e-10;
  tight.atol = 1e-12;
  double violation = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const BiVirusModel m{random_virus(n, rng, Criticality::Supercritical), random_virus(n, rng, Criticality::Supercritical)};
    SystemState s0 = random_interior_state(n, rng);
    if (k % 2 == 0) {  // start on the face x1 + x2 = 1
      const Vector total = s0.x1 + s0.x2;
      s0.x1 = s0.x1.cwiseQuotient(total);
      s0.x2 = Vector::Ones(s0.x1.size()) - s0.x1;
    }
    const auto traj = simulate(m, s0, tight);
    violation = std::max(violation, traj.max_violation);
    if (!(traj.max_violation < 1e-9)) out.fail("domain violation in run " + std::to_string(k));
  }
  os << ", domain violation " << violation;

  double tau_max = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = uniform_size(rng, 2, 8);
    const VirusParams p = random_virus(n, rng, k % 2 ? Criticality::Supercritical : Criticality::Subcritical);
    Vector z0 = Vector::Zero(static_cast<Eigen::Index>(n));
    const std::size_t support = uniform_size(rng, 1, n - 1);
    for (std::size_t j = 0; j < support; ++j) z0(static_cast<Eigen::Index>(uniform_size(rng, 0, n - 1))) = uniform(rng, 0.1, 1.0);
    const auto tau = positivity_time(p, z0);
    if (!tau) {
      out.fail("positivity time infinite for instance " + std::to_string(k));
    } else {
      tau_max = std::max(tau_max, *tau);
    }
  }
  os << ", positivity time max " << tau_max;

  double max_entry = -1e300;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    Matrix M = random_irreducible_metzler(n, rng);
    M.diagonal().array() -= spectral_abscissa(M) + uniform(rng, 0.01, 2.0);
    try {
      negative_inverse_check(MetzlerMatrix(M));
    } catch (const Error& e) {
      out.fail("inverse instance " + std::to_string(k) + ": " + e.what());
    }
    max_entry = std::max(max_entry, Matrix(M.fullPivLu().inverse()).maxCoeff());
  }
  if (!(max_entry < 0.0)) out.fail("an inverse entry is nonnegative");
  os << ", largest inverse entry " << max_entry;

  IntegratorConfig trace_cfg;
  trace_cfg.rtol = 1e-10;
  trace_cfg.atol = 1e-13;
  double rise = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = uniform_size(rng, 1, 8);
    const VirusParams p = random_virus(n, rng, Criticality::Supercritical);
    const Vector x = solve_epidemic(p).x;
    const auto trace = lyapunov_trace(p, random_box(n, rng, 0.01, 0.99), x, trace_cfg);
    for (std::size_t j = 1; j < trace.size(); ++j) rise = std::max(rise, trace[j] - trace[j - 1]);
  }
  if (!(rise <= 1e-12)) out.fail("Lyapunov trace increased by " + std::to_string(rise));
  os << ", largest trace increase " << rise;
  out.detail = os.str();
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"threshold trichotomy", threshold_trichotomy_agreement},
      {"healthy-state convergence", healthy_convergence},
      {"epidemic solver", epidemic_solver},
      {"survival of the fitter", survival_of_the_fitter},
      {"coexistence continuum", coexistence},
      {"sensitivity", sensitivity},
      {"feedback impossibility", feedback_impossibility},
      {"structural lemmas", structural_lemmas},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    if (!o.passed) {
      std::printf("     first failure: %s\n", o.failure.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
