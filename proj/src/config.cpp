#include "varexp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace varexp {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& ctx,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
    }
  }
}

double need_number(const json& obj, const std::string& ctx, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing key '" + key + "'");
  if (!obj[key].is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<double>();
}

Mesh parse_mesh(const json& j) {
  reject_unknown(j, "mesh", {"dimension", "extent", "cells"});
  const int dim = static_cast<int>(need_number(j, "mesh", "dimension"));
  if (!j.contains("extent") || !j["extent"].is_array()) {
    throw ConfigError("mesh: missing 'extent' array");
  }
  if (!j.contains("cells") || !j["cells"].is_array()) {
    throw ConfigError("mesh: missing 'cells' array");
  }
  const auto extent = j["extent"].get<std::vector<double>>();
  const auto cells = j["cells"].get<std::vector<int>>();
  try {
    if (dim == 1) {
      if (extent.size() != 2 || cells.size() != 1) {
        throw ConfigError("mesh: 1D needs extent [a,b] and cells [n]");
      }
      return Mesh::interval(extent[0], extent[1], cells[0]);
    }
    if (dim == 2) {
      if (extent.size() != 4 || cells.size() != 2) {
        throw ConfigError("mesh: 2D needs extent [ax,bx,ay,by] and cells [nx,ny]");
      }
      return Mesh::rectangle(extent[0], extent[1], extent[2], extent[3], cells[0],
                             cells[1]);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mesh: ") + e.what());
  }
  throw ConfigError("mesh: dimension must be 1 or 2");
}

ExponentSpec parse_exponent(const json& j, const Mesh& mesh) {
  if (!j.is_object() || !j.contains("family")) {
    throw ConfigError("exponent: missing 'family'");
  }
  const std::string family = j["family"].get<std::string>();
  if (family == "constant") {
    reject_unknown(j, "exponent", {"family", "value"});
    return ConstantExponent{need_number(j, "exponent", "value")};
  }
  if (family == "affine") {
    reject_unknown(j, "exponent", {"family", "c0", "cx", "cy"});
    return AffineExponent{need_number(j, "exponent", "c0"),
                          need_number(j, "exponent", "cx"),
                          number_or(j, "cy", 0.0)};
  }
  if (family == "sinusoidal") {
    reject_unknown(j, "exponent", {"family", "c0", "amplitude", "omega"});
    return SinusoidalExponent{need_number(j, "exponent", "c0"),
                              need_number(j, "exponent", "amplitude"),
                              need_number(j, "exponent", "omega")};
  }
  if (family == "gaussian_bump") {
    reject_unknown(j, "exponent", {"family", "c0", "amplitude", "center", "sigma2"});
    GaussianBumpExponent g;
    g.c0 = need_number(j, "exponent", "c0");
    g.amplitude = need_number(j, "exponent", "amplitude");
    g.sigma2 = need_number(j, "exponent", "sigma2");
    if (!j.contains("center") || !j["center"].is_array()) {
      throw ConfigError("exponent: gaussian_bump needs a 'center' array");
    }
    const auto c = j["center"].get<std::vector<double>>();
    if (c.empty() || c.size() > 2) throw ConfigError("exponent: center must have 1 or 2 entries");
    g.x0 = c[0];
    g.y0 = c.size() > 1 ? c[1] : 0.0;
    return g;
  }
  if (family == "tabulated") {
    reject_unknown(j, "exponent", {"family", "path"});
    if (!j.contains("path")) throw ConfigError("exponent: tabulated needs 'path'");
    try {
      return read_tabulated(j["path"].get<std::string>(), mesh.node_count());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("exponent: ") + e.what());
    }
  }
  throw ConfigError("exponent: unknown family '" + family + "'");
}

FunctionSpec parse_function(const json& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw ConfigError("function: missing 'family'");
  }
  FunctionSpec f;
  f.family = j["family"].get<std::string>();
  const std::set<std::string> families = {"zero",          "constant", "sinpi",
                                          "affine",        "gaussian_bump",
                                          "tabulated"};
  if (!families.count(f.family)) {
    throw ConfigError("function: unknown family '" + f.family + "'");
  }
  reject_unknown(j, "function",
                 {"family", "value", "c0", "cx", "cy", "amplitude", "center",
                  "sigma2", "path", "zero_boundary"});
  f.value = number_or(j, "value", 0.0);
  f.c0 = number_or(j, "c0", 0.0);
  f.cx = number_or(j, "cx", 0.0);
  f.cy = number_or(j, "cy", 0.0);
  f.amplitude = number_or(j, "amplitude", 1.0);
  f.sigma2 = number_or(j, "sigma2", 0.01);
  if (j.contains("center")) {
    const auto c = j["center"].get<std::vector<double>>();
    if (c.empty() || c.size() > 2) throw ConfigError("function: center must have 1 or 2 entries");
    f.x0 = c[0];
    f.y0 = c.size() > 1 ? c[1] : 0.0;
  }
  if (j.contains("path")) f.path = j["path"].get<std::string>();
  if (j.contains("zero_boundary")) f.zero_boundary = j["zero_boundary"].get<bool>();
  return f;
}

std::pair<SequenceRule, std::vector<int>> parse_sequence(const json& j,
                                                         const Mesh& mesh) {
  if (!j.is_object() || !j.contains("rule")) {
    throw ConfigError("sequence: missing 'rule'");
  }
  if (!j.contains("h_list") || !j["h_list"].is_array()) {
    throw ConfigError("sequence: missing 'h_list' array");
  }
  const auto h_list = j["h_list"].get<std::vector<int>>();
  const std::string rule = j["rule"].get<std::string>();
  if (rule == "additive") {
    reject_unknown(j, "sequence", {"rule", "delta", "h_list"});
    return {AdditiveRule{need_number(j, "sequence", "delta")}, h_list};
  }
  if (rule == "blend") {
    reject_unknown(j, "sequence", {"rule", "q", "h_list"});
    if (!j.contains("q")) throw ConfigError("sequence: blend needs 'q'");
    const ExponentSpec qspec = parse_exponent(j["q"], mesh);
    const ExponentField q = build_field(mesh, qspec);
    return {BlendRule{q.values()}, h_list};
  }
  throw ConfigError("sequence: unknown rule '" + rule + "'");
}

SolverConfig parse_solver(const json& j) {
  reject_unknown(j, "solver",
                 {"initial_step", "backtrack", "tol_lambda", "tol_residual",
                  "max_iter", "restarts"});
  SolverConfig cfg;
  cfg.initial_step = number_or(j, "initial_step", cfg.initial_step);
  cfg.backtrack = number_or(j, "backtrack", cfg.backtrack);
  cfg.tol_lambda = number_or(j, "tol_lambda", cfg.tol_lambda);
  cfg.tol_residual = number_or(j, "tol_residual", cfg.tol_residual);
  cfg.max_iter = static_cast<int>(number_or(j, "max_iter", cfg.max_iter));
  cfg.restarts = static_cast<int>(number_or(j, "restarts", cfg.restarts));
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

CheckSpec parse_check(const json& j) {
  reject_unknown(j, "check", {"kind", "perturbation", "runs"});
  CheckSpec spec;
  if (j.contains("kind")) spec.kind = j["kind"].get<std::string>();
  const std::set<std::string> kinds = {"gamma", "semicontinuity", "modular"};
  if (!kinds.count(spec.kind)) {
    throw ConfigError("check: unknown kind '" + spec.kind + "'");
  }
  if (j.contains("perturbation")) {
    const json& pj = j["perturbation"];
    reject_unknown(pj, "check.perturbation", {"kind", "amplitude"});
    const std::string pk = pj.contains("kind") ? pj["kind"].get<std::string>() : "identity";
    if (pk == "identity") {
      spec.rule.kind = PerturbationKind::identity;
    } else if (pk == "scale") {
      spec.rule.kind = PerturbationKind::scale;
    } else if (pk == "noise") {
      spec.rule.kind = PerturbationKind::noise;
    } else if (pk == "bump") {
      spec.rule.kind = PerturbationKind::bump;
    } else {
      throw ConfigError("check.perturbation: unknown kind '" + pk + "'");
    }
    spec.rule.amplitude = number_or(pj, "amplitude", spec.rule.amplitude);
  }
  spec.runs = static_cast<int>(number_or(j, "runs", 1));
  if (spec.runs < 1) throw ConfigError("check: runs must be >= 1");
  return spec;
}

}  // namespace

GridFunction build_function(const FunctionSpec& spec, const Mesh& mesh) {
  GridFunction u(mesh);
  if (spec.family == "zero") {
    return u;
  }
  if (spec.family == "tabulated") {
    const TabulatedExponent t = read_tabulated(spec.path, mesh.node_count());
    u = GridFunction(mesh, t.values);
  } else {
    const auto lo = mesh.node(0);
    const auto hi = mesh.node(mesh.node_count() - 1);
    u = interpolate(
        [&](double x, double y) -> double {
          if (spec.family == "constant") return spec.value;
          if (spec.family == "affine") return spec.c0 + spec.cx * x + spec.cy * y;
          if (spec.family == "sinpi") {
            double v = std::sin(M_PI * (x - lo[0]) / (hi[0] - lo[0]));
            if (mesh.dimension() == 2) {
              v *= std::sin(M_PI * (y - lo[1]) / (hi[1] - lo[1]));
            }
            return v;
          }
          // gaussian_bump
          const double dx = x - spec.x0;
          const double dy = mesh.dimension() == 2 ? y - spec.y0 : 0.0;
          return spec.amplitude * std::exp(-(dx * dx + dy * dy) / spec.sigma2);
        },
        mesh);
  }
  if (spec.zero_boundary) u.zero_boundary();
  return u;
}

RunConfig load_config(const std::string& command, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  reject_unknown(j, "config",
                 {"mesh", "exponent", "function", "sequence", "solver", "check",
                  "growth", "output", "seed", "stability_tol"});

  RunConfig cfg;
  cfg.command = command;
  if (!j.contains("mesh")) throw ConfigError("config: missing 'mesh'");
  cfg.mesh = parse_mesh(j["mesh"]);
  if (j.contains("exponent")) {
    cfg.exponent = parse_exponent(j["exponent"], cfg.mesh);
  }
  if (j.contains("function")) cfg.function = parse_function(j["function"]);
  if (j.contains("sequence")) {
    auto [rule, h_list] = parse_sequence(j["sequence"], cfg.mesh);
    cfg.sequence_rule = rule;
    cfg.h_list = h_list;
  }
  if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
  if (j.contains("check")) cfg.check = parse_check(j["check"]);
  if (j.contains("growth")) {
    reject_unknown(j["growth"], "growth", {"p0", "m_max"});
    GrowthSpec g;
    g.p0 = need_number(j["growth"], "growth", "p0");
    g.m_max = static_cast<int>(need_number(j["growth"], "growth", "m_max"));
    cfg.growth = g;
  }
  if (j.contains("output")) cfg.output_dir = j["output"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("stability_tol")) cfg.stability_rel_tol = j["stability_tol"].get<double>();

  // command-specific requirements
  if (command == "norm" && !cfg.function) {
    throw ConfigError("norm: config must name a 'function'");
  }
  if ((command == "sweep" || command == "gamma") && !cfg.sequence_rule) {
    throw ConfigError(command + ": config must define a 'sequence'");
  }
  if (command == "gamma" && !cfg.function) {
    throw ConfigError("gamma: config must name a 'function'");
  }
  if (command == "growth") {
    if (!cfg.growth) throw ConfigError("growth: config must define 'growth'");
    if (cfg.mesh.dimension() != 1) throw ConfigError("growth: mesh must be 1D");
    if (cfg.growth->m_max < 2) throw ConfigError("growth: m_max must be >= 2");
  }
  if (!j.contains("exponent") && command != "growth") {
    throw ConfigError("config: missing 'exponent'");
  }

  cfg.solver.seed = cfg.seed;
  json canon = j;
  canon["command"] = command;
  canon["seed"] = cfg.seed;
  cfg.canonical_json = canon.dump();
  return cfg;
}

void override_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.solver.seed = seed;
  json canon = json::parse(cfg.canonical_json);
  canon["seed"] = seed;
  cfg.canonical_json = canon.dump();
}

void override_output(RunConfig& cfg, const std::string& dir) {
  cfg.output_dir = dir;
}

}  // namespace varexp
