#include "bivirus/report.hpp"

#include <string>

namespace bivirus {

using nlohmann::json;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const SystemState& s) { return json{{"x1", to_json(s.x1)}, {"x2", to_json(s.x2)}}; }

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json item{{"name", c.name}, {"passed", c.passed}};
    if (!c.passed) item["detail"] = c.detail;
    checks.push_back(std::move(item));
  }
  json profile{{"kind", to_string(r.profile.kind)},
               {"homogeneous", r.profile.homogeneous},
               {"identical", r.profile.identical}};
  if (r.profile.homogeneous) {
    profile["delta1"] = r.profile.delta1;
    profile["beta1"] = r.profile.beta1;
    profile["delta2"] = r.profile.delta2;
    profile["beta2"] = r.profile.beta2;
  }
  return json{{"ok", r.ok()}, {"checks", checks}, {"warnings", r.warnings}, {"profile", profile}};
}

json to_json(const RegimeLabel& label) {
  json out{{"regime", to_string(label.regime)},
           {"abscissa1", label.abscissa1},
           {"abscissa2", label.abscissa2}};
  out["fitness"] = label.fitness ? json(to_string(*label.fitness)) : json(nullptr);
  if (label.fitness) out["exact_comparison"] = label.exact_comparison;
  out["reproduction1"] = label.reproduction1 ? json(*label.reproduction1) : json(nullptr);
  out["reproduction2"] = label.reproduction2 ? json(*label.reproduction2) : json(nullptr);
  return out;
}

json to_json(const EquilibriumReport& r) {
  return json{{"kind", to_string(r.kind)},
              {"point", to_json(r.point)},
              {"residual", r.residual},
              {"jacobian_abscissa", r.jacobian_abscissa},
              {"verdict", to_string(r.verdict)}};
}

json to_json(const EquilibriumSet& set) {
  json list = json::array();
  for (const auto& r : set.equilibria) list.push_back(to_json(r));
  json out{{"equilibria", list}};
  if (set.continuum) {
    out["coexistence_continuum"] = json{{"total", to_json(set.continuum->total)},
                                        {"representative", to_json(set.continuum->representative)}};
  } else {
    out["coexistence_continuum"] = nullptr;
  }
  return out;
}

json to_json(const ContinuumPoint& p) {
  json out{{"alpha", p.alpha}, {"point", to_json(p.point)}, {"parallel_deviation", p.parallel_deviation}};
  out["sum_deviation"] = p.sum_deviation ? json(*p.sum_deviation) : json(nullptr);
  return out;
}

json to_json(const RepellerReport& r) {
  json runs = json::array();
  for (const auto& run : r.runs) {
    runs.push_back(json{{"magnitude", run.magnitude},
                        {"direction", to_json(run.direction)},
                        {"terminal", to_json(run.terminal)},
                        {"terminal_reason", to_string(run.terminal_reason)},
                        {"initial_norm", run.initial_norm},
                        {"terminal_norm", run.terminal_norm},
                        {"distance_to_target", run.distance_to_target},
                        {"verdict", run.escaped ? "escaped" : "counterexample"}});
  }
  return json{{"target", to_json(r.target)},
              {"closed_loop_ratio", r.ratio},
              {"all_escaped", r.all_escaped},
              {"runs", runs}};
}

json to_json(const BaselineReport& r) {
  return json{{"delta", to_json(r.params.delta)},
              {"abscissa", r.abscissa},
              {"terminal", to_json(r.trajectory.terminal())},
              {"terminal_time", r.trajectory.times.back()},
              {"terminal_reason", to_string(r.trajectory.terminal_reason)}};
}

json trajectory_summary(const TrajectoryRecord& traj) {
  return json{{"terminal", to_json(traj.terminal())},
              {"terminal_time", traj.times.back()},
              {"terminal_reason", to_string(traj.terminal_reason)},
              {"steps", traj.steps},
              {"recorded", traj.times.size()},
              {"max_violation", traj.max_violation}};
}

json to_json(const SensitivityResult& r) {
  return json{{"d_x", to_json(r.d_x)},
              {"system_matrix_abscissa", r.system_matrix_abscissa},
              {"raw_inverse_negative", r.raw_inverse_negative},
              {"condition_estimate", r.condition_estimate},
              {"ill_conditioned", r.ill_conditioned}};
}

}  // namespace bivirus
