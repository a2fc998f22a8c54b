#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "bivirus/config.hpp"
#include "bivirus/control.hpp"
#include "bivirus/dynamics.hpp"
#include "bivirus/equilibria.hpp"
#include "bivirus/errors.hpp"
#include "bivirus/netgraph.hpp"
#include "bivirus/sensitivity.hpp"
#include "bivirus/spectral.hpp"
#include "bivirus/verify.hpp"

namespace py = pybind11;
using namespace bivirus;

namespace {

VirusParams make_virus(const Vector& delta, const Matrix& B) { return VirusParams{delta, B, std::nullopt}; }

template <typename E>
std::string name_of(E value) {
  return std::string(to_string(value));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bi-virus SIS model: thresholds, simulation, equilibria, sensitivity and feedback control";

  static py::exception<Error> error(m, "Error");
  static py::exception<ValidationError> validation(m, "ValidationError", error.ptr());
  static py::exception<PreconditionError> precondition(m, "PreconditionError", error.ptr());
  static py::exception<ParseError> parse(m, "ParseError", error.ptr());
  static py::exception<NumericalError> numerical(m, "NumericalError", error.ptr());
  static py::exception<DomainError> domain(m, "DomainError", error.ptr());
  static py::exception<ConsistencyError> consistency(m, "ConsistencyError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(validation.ptr(), e.what());
    } catch (const PreconditionError& e) {
      PyErr_SetString(precondition.ptr(), e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(parse.ptr(), e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical.ptr(), e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(domain.ptr(), e.what());
    } catch (const ConsistencyError& e) {
      PyErr_SetString(consistency.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<VirusParams>(m, "VirusParams")
      .def(py::init(&make_virus), py::arg("delta"), py::arg("B"))
      .def_readwrite("delta", &VirusParams::delta)
      .def_readwrite("B", &VirusParams::B)
      .def("linearization", &VirusParams::linearization);

  py::class_<BiVirusModel>(m, "BiVirusModel")
      .def(py::init([](VirusParams a, VirusParams b) { return BiVirusModel{std::move(a), std::move(b)}; }),
           py::arg("virus1"), py::arg("virus2"))
      .def_readwrite("virus1", &BiVirusModel::virus1)
      .def_readwrite("virus2", &BiVirusModel::virus2);

  py::class_<SystemState>(m, "SystemState")
      .def(py::init([](Vector x1, Vector x2) { return SystemState{std::move(x1), std::move(x2)}; }),
           py::arg("x1"), py::arg("x2"))
      .def_readwrite("x1", &SystemState::x1)
      .def_readwrite("x2", &SystemState::x2);

  m.def("spectral_abscissa", &spectral_abscissa, py::arg("M"));
  m.def("spectral_radius", &spectral_radius, py::arg("M"));
  m.def("is_irreducible", &check_irreducible, py::arg("B"));
  m.def(
      "perron_pair",
      [](const Matrix& M) {
        const PerronPair pp = perron_pair(MetzlerMatrix(M));
        return py::make_tuple(pp.value, pp.right, pp.left);
      },
      py::arg("M"), "Perron value with unit right and left vectors of an irreducible Metzler matrix.");
  m.def(
      "threshold_trichotomy",
      [](const Matrix& Lambda, const Matrix& N) {
        const auto r = threshold_trichotomy(Lambda, N);
        return py::make_tuple(name_of(r.verdict), r.abscissa, r.radius);
      },
      py::arg("Lambda"), py::arg("N"));

  m.def(
      "validate",
      [](const BiVirusModel& model) {
        const auto r = validate(model);
        return py::make_tuple(r.ok(), r.failures(), r.warnings);
      },
      py::arg("model"), "(ok, failure text, warnings)");

  m.def(
      "classify",
      [](const BiVirusModel& model) {
        const RegimeLabel l = classify(model);
        py::dict d;
        d["regime"] = name_of(l.regime);
        d["fitness"] = l.fitness ? py::object(py::str(name_of(*l.fitness))) : py::object(py::none());
        d["abscissa1"] = l.abscissa1;
        d["abscissa2"] = l.abscissa2;
        d["reproduction1"] = l.reproduction1;
        d["reproduction2"] = l.reproduction2;
        return d;
      },
      py::arg("model"));

  m.def("field", &bivirus_field, py::arg("model"), py::arg("state"));
  m.def("jacobian", &jacobian, py::arg("model"), py::arg("state"));

  m.def(
      "simulate",
      [](const BiVirusModel& model, const SystemState& s0, double t_max, double convergence_tol) {
        IntegratorConfig cfg;
        cfg.t_max = t_max;
        cfg.convergence_tol = convergence_tol;
        const TrajectoryRecord traj = simulate(model, s0, cfg);
        const auto n = static_cast<Eigen::Index>(model.size());
        const auto rows = static_cast<Eigen::Index>(traj.states.size());
        Matrix x1(rows, n), x2(rows, n);
        for (Eigen::Index k = 0; k < rows; ++k) {
          x1.row(k) = traj.states[static_cast<std::size_t>(k)].x1.transpose();
          x2.row(k) = traj.states[static_cast<std::size_t>(k)].x2.transpose();
        }
        py::dict d;
        d["t"] = traj.times;
        d["x1"] = x1;
        d["x2"] = x2;
        d["terminal_reason"] = name_of(traj.terminal_reason);
        d["max_violation"] = traj.max_violation;
        return d;
      },
      py::arg("model"), py::arg("state"), py::arg("t_max") = 1e4, py::arg("convergence_tol") = 1e-10);

  m.def(
      "solve_epidemic",
      [](const VirusParams& p) {
        const EpidemicSolution s = solve_epidemic(p);
        return py::make_tuple(s.x, s.residual, s.iterations);
      },
      py::arg("virus"), "(x*, residual, iterations) of the single-virus epidemic state.");

  m.def(
      "equilibria",
      [](const BiVirusModel& model) {
        py::list out;
        for (const auto& r : enumerate_equilibria(model).equilibria) {
          py::dict d;
          d["kind"] = name_of(r.kind);
          d["x1"] = r.point.x1;
          d["x2"] = r.point.x2;
          d["residual"] = r.residual;
          d["jacobian_abscissa"] = r.jacobian_abscissa;
          d["verdict"] = name_of(r.verdict);
          out.append(d);
        }
        return out;
      },
      py::arg("model"));

  m.def(
      "sensitivity",
      [](const VirusParams& p, const Vector& x_star, const Vector& d_delta, const Matrix& d_B) {
        return sensitivity_solve(p, x_star, Perturbation{d_delta, d_B}).d_x;
      },
      py::arg("virus"), py::arg("x_star"), py::arg("d_delta"), py::arg("d_B"));

  m.def("closed_loop_ratio", &closed_loop_ratio, py::arg("virus"), py::arg("k"));
  m.def(
      "closed_loop_transform",
      [](const VirusParams& p, const Vector& k) { return closed_loop_transform(p, k); },
      py::arg("virus"), py::arg("k"));

  m.def(
      "verify",
      [](std::size_t random_models, std::size_t max_nodes, std::uint64_t seed) {
        const VerifySummary s = run_property_suite(VerifyOptions{random_models, max_nodes, seed});
        py::dict d;
        for (const auto& p : s.properties) d[py::str(p.name)] = py::make_tuple(p.passed, p.counterexample);
        return d;
      },
      py::arg("random_models") = 5, py::arg("max_nodes") = 5, py::arg("seed") = 1);
}
