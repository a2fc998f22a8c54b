#pragma once

#include <vector>

#include "bivirus/control.hpp"
#include "bivirus/dynamics.hpp"
#include "bivirus/equilibria.hpp"
#include "bivirus/model.hpp"
#include "bivirus/sensitivity.hpp"
#include "json.hpp"

namespace bivirus {

// JSON views of the library's result types, used for CLI reports.

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const SystemState& s);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const RegimeLabel& label);
nlohmann::json to_json(const EquilibriumReport& r);
nlohmann::json to_json(const EquilibriumSet& set);
nlohmann::json to_json(const ContinuumPoint& p);
nlohmann::json to_json(const RepellerReport& r);
nlohmann::json to_json(const BaselineReport& r);
nlohmann::json trajectory_summary(const TrajectoryRecord& traj);
nlohmann::json to_json(const SensitivityResult& r);

}  // namespace bivirus
