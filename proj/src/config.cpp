#include "bivirus/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "bivirus/errors.hpp"
#include "bivirus/rational.hpp"
#include "json.hpp"

namespace bivirus {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) fail(path, "unknown field '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(path, std::string("missing field '") + key + "'");
  return obj.at(key);
}

// A rate: decimal string (exact) or JSON number (inexact).
struct Rate {
  double value;
  std::optional<Rational> exact;
};

Rate read_rate(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto& text = j.get_ref<const std::string&>();
    try {
      Rational exact = parse_decimal(text);
      return Rate{std::strtod(text.c_str(), nullptr), std::move(exact)};
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }
  if (j.is_number()) return Rate{j.get<double>(), std::nullopt};
  fail(path, "expected a decimal string or number");
}

double read_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return read_rate(j, path).value;
  fail(path, "expected a number");
}

std::size_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

Vector read_vector(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array()) fail(path, "expected an array");
  if (j.size() != n) fail(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = read_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

VirusParams read_virus(const json& j, const std::string& path, std::size_t n) {
  only_keys(j, path, {"delta", "B", "arcs"});
  const auto m = static_cast<Eigen::Index>(n);
  VirusParams p;
  p.delta = Vector(m);
  p.B = Matrix::Zero(m, m);
  ExactRates exact;
  exact.delta.resize(n);
  exact.infection.assign(n * n, Rational(0));
  bool all_exact = true;

  const json& delta = require(j, path, "delta");
  const std::string dpath = path + ".delta";
  if (!delta.is_array()) fail(dpath, "expected an array of decimal strings");
  if (delta.size() != n) fail(dpath, "expected " + std::to_string(n) + " entries, got " + std::to_string(delta.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const Rate r = read_rate(delta[i], dpath + "[" + std::to_string(i) + "]");
    p.delta(static_cast<Eigen::Index>(i)) = r.value;
    if (r.exact) exact.delta[i] = *r.exact; else all_exact = false;
  }

  const bool has_b = j.contains("B"), has_arcs = j.contains("arcs");
  if (has_b == has_arcs) fail(path, "exactly one of the fields 'B' or 'arcs' is required");
  if (has_b) {
    const json& B = j.at("B");
    const std::string bpath = path + ".B";
    if (!B.is_array() || B.size() != n) fail(bpath, "expected " + std::to_string(n) + " rows");
    for (std::size_t i = 0; i < n; ++i) {
      const std::string rpath = bpath + "[" + std::to_string(i) + "]";
      if (!B[i].is_array() || B[i].size() != n) fail(rpath, "expected " + std::to_string(n) + " entries");
      for (std::size_t k = 0; k < n; ++k) {
        const Rate r = read_rate(B[i][k], rpath + "[" + std::to_string(k) + "]");
        p.B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = r.value;
        if (r.exact) exact.infection[i * n + k] = *r.exact; else all_exact = false;
      }
    }
  } else {
    const json& arcs = j.at("arcs");
    const std::string apath = path + ".arcs";
    if (!arcs.is_array()) fail(apath, "expected an array of {source, target, weight}");
    std::vector<Arc> list;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const std::string ipath = apath + "[" + std::to_string(a) + "]";
      only_keys(arcs[a], ipath, {"source", "target", "weight"});
      Arc arc;
      arc.source = read_count(require(arcs[a], ipath, "source"), ipath + ".source");
      arc.target = read_count(require(arcs[a], ipath, "target"), ipath + ".target");
      const Rate r = read_rate(require(arcs[a], ipath, "weight"), ipath + ".weight");
      arc.weight = r.value;
      if (arc.source >= n || arc.target >= n) fail(ipath, "node index out of range");
      if (r.exact) exact.infection[arc.target * n + arc.source] = *r.exact; else all_exact = false;
      list.push_back(arc);
    }
    try {
      p.B = ContactGraph(n, std::move(list)).adjacency_matrix();
    } catch (const PreconditionError& e) {
      fail(apath, e.what());
    }
  }
  if (all_exact) p.exact = std::move(exact);
  return p;
}

IntegratorConfig read_integrator(const json& j, const std::string& path) {
  only_keys(j, path, {"method", "dt", "rtol", "atol", "t_max", "convergence_tol", "record_stride", "max_step"});
  IntegratorConfig cfg;
  if (j.contains("method")) {
    const std::string m = j.at("method").is_string() ? j.at("method").get<std::string>() : "";
    if (m == "rk4") cfg.method = IntegratorMethod::RK4Fixed;
    else if (m == "rk45") cfg.method = IntegratorMethod::RK45Adaptive;
    else fail(path + ".method", "expected \"rk4\" or \"rk45\"");
  }
  if (j.contains("dt")) cfg.dt = read_number(j.at("dt"), path + ".dt");
  if (j.contains("rtol")) cfg.rtol = read_number(j.at("rtol"), path + ".rtol");
  if (j.contains("atol")) cfg.atol = read_number(j.at("atol"), path + ".atol");
  if (j.contains("t_max")) cfg.t_max = read_number(j.at("t_max"), path + ".t_max");
  if (j.contains("convergence_tol")) cfg.convergence_tol = read_number(j.at("convergence_tol"), path + ".convergence_tol");
  if (j.contains("max_step")) cfg.max_step = read_number(j.at("max_step"), path + ".max_step");
  if (j.contains("record_stride")) cfg.record_stride = read_count(j.at("record_stride"), path + ".record_stride");
  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    fail(path, e.what());
  }
  return cfg;
}

FixedPointConfig read_fixed_point(const json& j, const std::string& path) {
  only_keys(j, path, {"c_fraction", "epsilon_scale", "tol", "max_iter"});
  FixedPointConfig cfg;
  if (j.contains("c_fraction")) cfg.c_fraction = read_number(j.at("c_fraction"), path + ".c_fraction");
  if (j.contains("epsilon_scale")) cfg.epsilon_scale = read_number(j.at("epsilon_scale"), path + ".epsilon_scale");
  if (j.contains("tol")) cfg.tol = read_number(j.at("tol"), path + ".tol");
  if (j.contains("max_iter")) cfg.max_iter = read_count(j.at("max_iter"), path + ".max_iter");
  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    fail(path, e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    const auto upto = json_text.substr(0, std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, json_text.size()));
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    const auto last_nl = upto.rfind('\n');
    const auto column = last_nl == std::string_view::npos ? upto.size() + 1 : upto.size() - last_nl;
    throw ParseError("config line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": malformed JSON");
  }

  only_keys(root, "config", {"model", "initial_states", "integrator", "fixed_point", "sensitivity",
                             "control", "verify", "seed", "output_dir"});
  ExperimentConfig cfg;

  const json& model = require(root, "config", "model");
  only_keys(model, "model", {"n", "virus1", "virus2"});
  const std::size_t n = read_count(require(model, "model", "n"), "model.n");
  if (n == 0) fail("model.n", "must be positive");
  cfg.model.virus1 = read_virus(require(model, "model", "virus1"), "model.virus1", n);
  cfg.model.virus2 = read_virus(require(model, "model", "virus2"), "model.virus2", n);

  if (root.contains("initial_states")) {
    const json& ics = root.at("initial_states");
    if (!ics.is_array()) fail("initial_states", "expected an array");
    for (std::size_t k = 0; k < ics.size(); ++k) {
      const std::string path = "initial_states[" + std::to_string(k) + "]";
      only_keys(ics[k], path, {"x1", "x2"});
      SystemState s{read_vector(require(ics[k], path, "x1"), path + ".x1", n),
                    read_vector(require(ics[k], path, "x2"), path + ".x2", n)};
      if (domain_violation(s) > kDomainTolerance) fail(path, "state lies outside the domain");
      cfg.initial_states.push_back(std::move(s));
    }
  }
  if (root.contains("integrator")) cfg.integrator = read_integrator(root.at("integrator"), "integrator");
  if (root.contains("fixed_point")) cfg.fixed_point = read_fixed_point(root.at("fixed_point"), "fixed_point");

  if (root.contains("sensitivity")) {
    const json& j = root.at("sensitivity");
    only_keys(j, "sensitivity", {"step"});
    if (j.contains("step")) cfg.sensitivity.step = read_number(j.at("step"), "sensitivity.step");
    if (!(cfg.sensitivity.step >= 0.0)) fail("sensitivity.step", "must be nonnegative");
  }

  if (root.contains("control")) {
    const json& j = root.at("control");
    only_keys(j, "control", {"k1", "k2", "magnitudes", "random_directions"});
    if (j.contains("k1") != j.contains("k2")) fail("control", "k1 and k2 must be given together");
    if (j.contains("k1")) {
      FeedbackGains g{read_vector(j.at("k1"), "control.k1", n), read_vector(j.at("k2"), "control.k2", n)};
      if (!(g.k1.array() > 0.0).all()) fail("control.k1", "gains must be positive");
      if (!(g.k2.array() > 0.0).all()) fail("control.k2", "gains must be positive");
      cfg.control.gains = std::move(g);
    }
    if (j.contains("magnitudes")) {
      const json& mags = j.at("magnitudes");
      if (!mags.is_array() || mags.empty()) fail("control.magnitudes", "expected a nonempty array");
      cfg.control.magnitudes.clear();
      for (std::size_t k = 0; k < mags.size(); ++k) {
        const std::string path = "control.magnitudes[" + std::to_string(k) + "]";
        const double v = read_number(mags[k], path);
        if (!(v > 0.0 && v <= 1.0)) fail(path, "must lie in (0, 1]");
        cfg.control.magnitudes.push_back(v);
      }
    }
    if (j.contains("random_directions")) {
      cfg.control.random_directions = read_count(j.at("random_directions"), "control.random_directions");
    }
  }

  if (root.contains("verify")) {
    const json& j = root.at("verify");
    only_keys(j, "verify", {"random_models", "max_nodes", "seed"});
    if (j.contains("random_models")) cfg.verify.random_models = read_count(j.at("random_models"), "verify.random_models");
    if (j.contains("max_nodes")) cfg.verify.max_nodes = read_count(j.at("max_nodes"), "verify.max_nodes");
    if (j.contains("seed")) cfg.verify.seed = read_count(j.at("seed"), "verify.seed");
    if (cfg.verify.max_nodes < 1) fail("verify.max_nodes", "must be positive");
  }
  if (root.contains("seed")) cfg.seed = read_count(root.at("seed"), "seed");
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) fail("output_dir", "expected a path string");
    cfg.output_dir = root.at("output_dir").get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace bivirus
