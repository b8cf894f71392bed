#pragma once

#include <optional>
#include <string>

#include "varexp/stability.hpp"

namespace varexp {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FunctionSpec {
  // zero | constant | sinpi (product of sin(pi * normalized coordinate))
  // | affine | gaussian_bump | tabulated
  std::string family = "zero";
  double value = 0;                     // constant
  double c0 = 0, cx = 0, cy = 0;        // affine
  double x0 = 0, y0 = 0, sigma2 = 0.01; // gaussian_bump
  double amplitude = 1.0;               // gaussian_bump
  std::string path;                     // tabulated
  bool zero_boundary = true;
};

GridFunction build_function(const FunctionSpec& spec, const Mesh& mesh);

struct CheckSpec {
  std::string kind = "gamma";  // gamma | semicontinuity | modular
  PerturbationRule rule;
  int runs = 1;
};

struct GrowthSpec {
  double p0 = 2.0;
  int m_max = 5;
};

struct RunConfig {
  std::string command;
  Mesh mesh = Mesh::interval(0, 1, 1);
  ExponentSpec exponent = ConstantExponent{2.0};
  std::optional<FunctionSpec> function;
  std::optional<SequenceRule> sequence_rule;
  std::vector<int> h_list;
  SolverConfig solver;
  std::optional<CheckSpec> check;
  std::optional<GrowthSpec> growth;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  double stability_rel_tol = 1e-2;
  std::string canonical_json;  // canonical dump used for the config hash
};

/// Parses and fully validates a JSON config file for the given command.
/// Unknown keys are rejected. Throws ConfigError on any problem.
RunConfig load_config(const std::string& command, const std::string& path);

/// Scalar overrides applied after parsing (CLI flags).
void override_seed(RunConfig& cfg, std::uint64_t seed);
void override_output(RunConfig& cfg, const std::string& dir);

}  // namespace varexp
