#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "bivirus/config.hpp"
#include "bivirus/errors.hpp"
#include "bivirus/report.hpp"
#include "bivirus/verify.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bivirus;

namespace {

enum Exit : int { kOk = 0, kValidation = 1, kNumerical = 2, kConsistency = 3 };

struct Context {
  ExperimentConfig cfg;
  std::optional<fs::path> out;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("bivirus");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("BIVIRUS_LOG")) {
    const std::string level(env);
    if (level == "error" || level == "info" || level == "debug") {
      spdlog::set_level(spdlog::level::from_str(level));
    } else {
      spdlog::warn("ignoring BIVIRUS_LOG={}, expected error, info or debug", level);
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << text;
  spdlog::info("wrote {}", path.string());
}

int emit(const Context& ctx, const std::string& file, const json& report) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (ctx.out) write_text(*ctx.out / file, text);
  return kOk;
}

const Vector& part(const SystemState& s, int k) { return k == 1 ? s.x1 : s.x2; }

int cmd_classify(const Context& ctx, const ValidationReport& validation) {
  const RegimeLabel label = classify(ctx.cfg.model);
  return emit(ctx, "classify.json", json{{"validation", to_json(validation)}, {"label", to_json(label)}});
}

int cmd_simulate(const Context& ctx) {
  const auto& states = ctx.cfg.initial_states;
  if (states.empty()) throw ValidationError("initial_states: at least one state is required");
  json runs = json::array();
  int code = kOk;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const TrajectoryRecord traj = simulate(ctx.cfg.model, states[k], ctx.cfg.integrator);
    if (traj.terminal_reason == TerminalReason::DomainError) code = kNumerical;
    json item = trajectory_summary(traj);
    item["index"] = k;
    runs.push_back(std::move(item));
    if (ctx.out) {
      std::ofstream os(*ctx.out / ("trajectory_" + std::to_string(k) + ".csv"), std::ios::binary);
      write_trajectory_csv(os, traj);
    }
  }
  emit(ctx, "simulate.json", json{{"runs", runs}});
  return code;
}

int cmd_equilibrium(const Context& ctx) {
  const EquilibriumSet set = enumerate_equilibria(ctx.cfg.model, ctx.cfg.fixed_point);
  json report = to_json(set);
  if (set.continuum && !ctx.cfg.initial_states.empty()) {
    json members = json::array();
    for (const auto& p : coexistence_continuum(ctx.cfg.model, ctx.cfg.initial_states,
                                               ctx.cfg.integrator, ctx.cfg.fixed_point))
      members.push_back(to_json(p));
    report["continuum_members"] = members;
  }
  return emit(ctx, "equilibria.json", report);
}

int cmd_sensitivity(const Context& ctx) {
  json viruses = json::array();
  for (int k = 1; k <= 2; ++k) {
    const VirusParams& p = k == 1 ? ctx.cfg.model.virus1 : ctx.cfg.model.virus2;
    json item{{"virus", k}, {"abscissa", spectral_abscissa(p.linearization())}};
    if (spectral_abscissa(p.linearization()) <= kCriticalBand) {
      item["skipped"] = "no epidemic state";
      viruses.push_back(std::move(item));
      continue;
    }
    const EpidemicSolution sol = solve_epidemic(p, ctx.cfg.fixed_point);
    const auto rows = monotonicity_report(p, sol.x, ctx.cfg.sensitivity.step, ctx.cfg.fixed_point);
    std::size_t violations = 0;
    for (const auto& row : rows) violations += row.verdict == SignVerdict::Violation;
    item["epidemic_state"] = to_json(sol.x);
    item["rows"] = rows.size();
    item["violations"] = violations;
    viruses.push_back(std::move(item));
    if (ctx.out) {
      std::ofstream os(*ctx.out / ("sensitivity_virus" + std::to_string(k) + ".csv"), std::ios::binary);
      write_sensitivity_csv(os, rows);
    }
  }
  return emit(ctx, "sensitivity.json", json{{"viruses", viruses}});
}

int cmd_control(const Context& ctx) {
  const BiVirusModel& m = ctx.cfg.model;
  const auto n = m.virus1.delta.size();
  const FeedbackGains gains = ctx.cfg.control.gains.value_or(
      FeedbackGains{Vector::Ones(n), Vector::Ones(n)});
  gains.validate(static_cast<std::size_t>(n));

  RepellerOptions ro;
  ro.random_directions = ctx.cfg.control.random_directions;
  ro.seed = ctx.cfg.seed;

  IntegratorConfig baseline_cfg = ctx.cfg.integrator;
  baseline_cfg.t_max = std::max(baseline_cfg.t_max, 1e8);

  json viruses = json::array();
  bool escaped = true;
  for (int k = 1; k <= 2; ++k) {
    const VirusParams& p = k == 1 ? m.virus1 : m.virus2;
    const Vector& gain = k == 1 ? gains.k1 : gains.k2;
    const RepellerReport rep = repeller_experiment(p, gain, ctx.cfg.control.magnitudes, ro,
                                                   ctx.cfg.integrator, ctx.cfg.fixed_point);
    escaped = escaped && rep.all_escaped;
    const Vector z0 = ctx.cfg.initial_states.empty() ? Vector::Constant(n, 0.5)
                                                     : part(ctx.cfg.initial_states.front(), k);
    viruses.push_back(json{{"virus", k},
                           {"repeller", to_json(rep)},
                           {"baseline", to_json(constant_healing_baseline(p, z0, baseline_cfg))}});
  }

  json feedback = json::array();
  for (const auto& s0 : ctx.cfg.initial_states)
    feedback.push_back(trajectory_summary(bivirus_feedback_simulate(m, gains, s0, ctx.cfg.integrator)));

  emit(ctx, "control.json", json{{"origin_abscissa", feedback_origin_abscissa(m, gains)},
                                 {"viruses", viruses},
                                 {"feedback_runs", feedback}});
  return escaped ? kOk : kConsistency;
}

int cmd_verify(const Context& ctx, const ValidationReport& validation) {
  const VerifySummary summary = run_property_suite(ctx.cfg.verify);
  json props = json::array();
  for (const auto& p : summary.properties) {
    json item{{"name", p.name}, {"cases", p.cases}, {"passed", p.passed}};
    if (!p.passed) item["counterexample"] = p.counterexample;
    props.push_back(std::move(item));
    spdlog::info("{} {} ({} cases)", p.passed ? "PASS" : "FAIL", p.name, p.cases);
  }
  emit(ctx, "verify.json", json{{"validation", to_json(validation)},
                                {"all_passed", summary.all_passed()},
                                {"properties", props}});
  return summary.all_passed() ? kOk : kConsistency;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Numerical:
    case ErrorKind::Domain:
      return kNumerical;
    case ErrorKind::Consistency:
      return kConsistency;
    default:
      return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Bi-virus SIS model experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  for (const char* name : {"classify", "simulate", "equilibrium", "sensitivity", "control", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "directory for report and data files");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Context ctx{load_config(config_path), std::nullopt};
    if (!out_dir.empty()) {
      ctx.out = fs::path(out_dir);
    } else if (ctx.cfg.output_dir) {
      ctx.out = ctx.cfg.output_dir;
    }
    if (ctx.out) fs::create_directories(*ctx.out);

    ValidateOptions vopts;
    vopts.for_sensitivity = command == "sensitivity";
    const ValidationReport validation = validate(ctx.cfg.model, vopts);
    for (const auto& w : validation.warnings) spdlog::warn("{}", w);
    if (!validation.ok()) {
      const json report{{"validation", to_json(validation)}};
      std::cout << report.dump(2) << "\n";
      spdlog::error("validation failed: {}", validation.failures());
      return kValidation;
    }

    if (command == "classify") return cmd_classify(ctx, validation);
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "equilibrium") return cmd_equilibrium(ctx);
    if (command == "sensitivity") return cmd_sensitivity(ctx);
    if (command == "control") return cmd_control(ctx);
    return cmd_verify(ctx, validation);
  } catch (const Error& e) {
    spdlog::error("{}: {} error: {}", command, to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", command, e.what());
    return kNumerical;
  }
}
