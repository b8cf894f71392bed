// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each criterion is self-contained and states its numbers.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "varexp/config.hpp"
#include "varexp/csv.hpp"
#include "varexp/stability.hpp"

using namespace varexp;
namespace fs = std::filesystem;

namespace {

const double pi = std::numbers::pi;

struct Result {
  bool pass = false;
  std::string detail;
};

GridFunction sine_mode(const Mesh& m) {
  return interpolate(
      [](double x, double) { return std::sin(std::numbers::pi * x); }, m);
}

GridFunction random_function(const Mesh& m, std::mt19937_64& rng,
                             bool dirichlet) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  GridFunction u(m);
  for (int i = 0; i < m.node_count(); ++i) {
    if (!dirichlet || !m.is_boundary(i)) u[i] = uni(rng);
  }
  return u;
}

ExponentField random_exponent(const Mesh& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(1.2, 4.0);
  std::vector<double> vals(m.node_count());
  for (double& v : vals) v = uni(rng);
  return ExponentField(m, vals);
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", x);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
Result criterion_1() {
  std::mt19937_64 rng(1001);
  double worst_hom = 0.0, worst_collapse = 0.0;
  int unit_ball_failures = 0;
  std::uniform_int_distribution<int> cells(8, 64);
  std::uniform_int_distribution<int> cells2(4, 12);
  std::uniform_real_distribution<double> alpha_dist(0.05, 20.0);
  std::uniform_real_distribution<double> p0_dist(1.2, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Mesh m = (trial % 4 == 0)
                       ? Mesh::rectangle(0, 1, 0, 1, cells2(rng), cells2(rng))
                       : Mesh::interval(0, 1, cells(rng));
    const ExponentField p = random_exponent(m, rng);
    const GridFunction u = random_function(m, rng, false);
    const double base = luxemburg_norm(u, p);
    const double alpha = alpha_dist(rng) * (trial % 2 ? 1.0 : -1.0);
    GridFunction scaled = alpha * u;
    const double hom =
        std::abs(luxemburg_norm(scaled, p) - std::abs(alpha) * base) /
        (std::abs(alpha) * base);
    worst_hom = std::max(worst_hom, hom);
    if (!unit_ball_check(u, p).pass) ++unit_ball_failures;
    const double p0 = p0_dist(rng);
    const ExponentField pc = build_field(m, ConstantExponent{p0});
    const double collapse = std::pow(modular(u, pc), 1.0 / p0);
    worst_collapse = std::max(
        worst_collapse, std::abs(luxemburg_norm(u, pc) - collapse) / collapse);
  }
  Result r;
  r.pass = worst_hom <= 1e-10 && unit_ball_failures == 0 &&
           worst_collapse <= 1e-10;
  r.detail = "1000 pairs; homogeneity defect " + sci(worst_hom) +
             ", unit-ball failures " + std::to_string(unit_ball_failures) +
             ", collapse defect " + sci(worst_collapse);
  return r;
}

// ---------------------------------------------------------------- criterion 2
Result criterion_2() {
  const Mesh m = Mesh::interval(0, 1, 32);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  const double at_equal = embedding_constant(1.0, p, p);
  const ExponentField q1000 =
      build_field(m, ConstantExponent{2.0 + 1.0 / 1000.0});
  const double gap = embedding_constant(1.0, p, q1000) - 1.0;
  Result r;
  r.pass = at_equal == 1.0 && gap <= 1e-3 && gap >= -1e-12;
  r.detail = "C(p,p) = " + std::to_string(at_equal) +
             ", C(p, p + 1e-3) - 1 = " + sci(gap);
  return r;
}

// ---------------------------------------------------------------- criterion 3
Result criterion_3() {
  std::mt19937_64 rng(3003);
  double worst_fd = 0.0, worst_euler = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Mesh m = (trial % 4 == 0) ? Mesh::rectangle(0, 1, 0, 1, 10, 10)
                                    : Mesh::interval(0, 1, 64);
    const ExponentField p = random_exponent(m, rng);
    const GridFunction u = random_function(m, rng, true);
    const GridFunction v = random_function(m, rng, true);
    const double t = 1e-6;
    const double fd_K = (K(u + t * v, p) - K(u + (-t) * v, p)) / (2.0 * t);
    const double fd_k = (k(u + t * v, p) - k(u + (-t) * v, p)) / (2.0 * t);
    worst_fd = std::max(worst_fd, std::abs(K_prime_action(u, v, p) - fd_K) /
                                      std::max(std::abs(fd_K), 1e-9));
    worst_fd = std::max(worst_fd, std::abs(k_prime_action(u, v, p) - fd_k) /
                                      std::max(std::abs(fd_k), 1e-9));
    worst_euler =
        std::max(worst_euler,
                 std::abs(K_prime_action(u, u, p) - K(u, p)) / K(u, p));
    worst_euler =
        std::max(worst_euler,
                 std::abs(k_prime_action(u, u, p) - k(u, p)) / k(u, p));
  }
  Result r;
  r.pass = worst_fd <= 1e-5 && worst_euler <= 1e-8;
  r.detail = "100 pairs; FD defect " + sci(worst_fd) + ", Euler defect " +
             sci(worst_euler);
  return r;
}

// ---------------------------------------------------------------- criterion 4
Result criterion_4() {
  const Mesh m = Mesh::interval(0, 1, 2048);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  SolverConfig cfg;
  cfg.tol_lambda = 1e-12;
  cfg.tol_residual = 1e-9;
  cfg.seed = 4;
  const EigenPair ep = solve_first_eigenpair(p, cfg);
  const double lambda_err = std::abs(ep.lambda - pi) / pi;
  const double reduction = ep.el_residual / ep.initial_residual;
  Result r;
  r.pass = lambda_err <= 1e-3 && reduction <= 1e-4;
  r.detail = "lambda = " + std::to_string(ep.lambda) + " (rel err " +
             sci(lambda_err) + "), residual reduction " + sci(reduction);
  return r;
}

// ---------------------------------------------------------------- criterion 5
Result criterion_5() {
  // Oracle eigenvalues computed once at n = 8192, tol_lambda 1e-10,
  // 10 restarts, seed 7 (configs kept under docs/oracles in the repo);
  // both agree with the 1D closed form (p-1)^{1/p} * 2*pi/(p*sin(pi/p))
  // = 3.0469919990461722 to better than 1e-7 relative.
  const double oracle_15 = 3.0469922794234248;
  const double oracle_30 = 3.0469920480131747;
  Result r;
  r.pass = true;
  std::ostringstream detail;
  const double oracles[2] = {oracle_15, oracle_30};
  const double exponents[2] = {1.5, 3.0};
  for (int i = 0; i < 2; ++i) {
    const Mesh m = Mesh::interval(0, 1, 2048);
    const ExponentField p = build_field(m, ConstantExponent{exponents[i]});
    SolverConfig cfg;
    cfg.seed = 5;
    const EigenPair ep = solve_first_eigenpair(p, cfg);
    const double err = std::abs(ep.lambda - oracles[i]) / oracles[i];
    if (err > 5e-3) r.pass = false;
    if (i) detail << ", ";
    detail << "p=" << exponents[i] << " rel err " << sci(err);
  }
  r.detail = detail.str();
  return r;
}

// ---------------------------------------------------------------- criterion 6
Result criterion_6() {
  const Mesh m = Mesh::interval(0, 1, 2048);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  const ExponentSequence seq =
      build_sequence(p, AdditiveRule{1.0}, {1, 2, 4, 8, 16, 32, 64, 128, 256});
  SolverConfig cfg;
  cfg.seed = 6;
  const StabilityReport rep = stability_sweep(p, seq, cfg);
  bool decreasing = rep.verdict_available;
  const size_t n = rep.increments.size();
  for (size_t i = n - 3; i + 1 < n; ++i) {
    if (rep.increments[i + 1] > rep.increments[i] * (1.0 + 1e-9)) {
      decreasing = false;
    }
  }
  const double final_gap = std::abs(rep.rows.back().lambda - pi);
  Result r;
  r.pass = decreasing && final_gap <= 1e-2 * pi;
  r.detail = "last increments " + sci(rep.increments[n - 2]) + " -> " +
             sci(rep.increments[n - 1]) + ", |lambda_256 - pi| = " +
             sci(final_gap) + " (tol " + sci(1e-2 * pi) + ")";
  return r;
}

// ---------------------------------------------------------------- criterion 7
Result criterion_7() {
  const Mesh m = Mesh::rectangle(0, 1, 0, 1, 64, 64);
  const ExponentField p = build_field(m, AffineExponent{1.5, 0.3, 0.0});
  const ExponentSequence seq =
      build_sequence(p, AdditiveRule{0.1}, {1, 2, 4, 8, 16, 32, 64});
  SolverConfig cfg;
  cfg.seed = 7;
  const StabilityReport rep = stability_sweep(p, seq, cfg);
  Result r;
  r.pass = rep.verdict_available && rep.consistent_with_right_continuity;
  r.detail = "final gap " + sci(rep.final_gap) + " vs tol " +
             sci(rep.tolerance) + ", base lambda " +
             std::to_string(rep.base_lambda);
  return r;
}

// ---------------------------------------------------------------- criterion 8
Result criterion_8() {
  const Mesh m = Mesh::interval(0, 1, 4096);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  const ExponentSequence seq = build_sequence(
      p, AdditiveRule{1.0}, {1, 2, 4, 8, 16, 32, 64, 128, 256});
  const GridFunction w = sine_mode(m);
  const CellVectorField g = gradient(w);
  const double target = pi / std::sqrt(2.0);
  bool decreasing = true;
  double prev = 1e300, final_gap = 0.0;
  for (int h : seq.h_list()) {
    const double gap = std::abs(luxemburg_norm(g, seq.field_at(h)) - target);
    if (gap > prev * (1.0 + 1e-12)) decreasing = false;
    prev = gap;
    final_gap = gap;
  }
  Result r;
  r.pass = decreasing && final_gap <= 1e-4 * target;
  r.detail = "gaps decreasing: " + std::string(decreasing ? "yes" : "no") +
             ", |K_256 - pi/sqrt2| = " + sci(final_gap) + " vs tol " +
             sci(1e-4 * target) +
             " (exponent gap alone exceeds the tolerance; see README)";
  return r;
}

// ---------------------------------------------------------------- criterion 9
Result criterion_9() {
  const Mesh m = Mesh::interval(0, 1, 512);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  // delta = 1: the exponent-induced norm boost (~delta/h) dominates the
  // zero-mean noise contribution (~amplitude/h scaled by 1/sqrt(n)) by more
  // than an order of magnitude, so the liminf inequality holds seed-by-seed
  const ExponentSequence seq = build_sequence(
      p, AdditiveRule{1.0},
      {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096});
  const GridFunction u = sine_mode(m);
  int semi_pass = 0, conv_pass = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    PerturbationRule rule;
    rule.kind = PerturbationKind::noise;
    rule.amplitude = 0.1;
    rule.seed = s;
    if (norm_semicontinuity_check(p, seq, u, rule).pass) ++semi_pass;
    if (modular_convergence_check(p, seq, u, rule).pass) ++conv_pass;
  }
  Result r;
  r.pass = semi_pass == 200 && conv_pass == 200;
  r.detail = "semicontinuity " + std::to_string(semi_pass) +
             "/200, modular+norm convergence " + std::to_string(conv_pass) +
             "/200";
  return r;
}

// --------------------------------------------------------------- criterion 10
Result criterion_10() {
  const Mesh m = Mesh::rectangle(0, 1, 0, 1, 64, 64);
  const std::vector<double> scales = {0.05, 0.08, 0.12, 0.2, 0.3};
  const std::vector<double> amplitudes = {1e-6, 1e-4, 1e-2, 1.0, 100.0};
  const auto min_ratio = [&](const ExponentField& p) {
    double best = 1e300;
    for (const ProbeRow& row :
         concentration_probe(p, 0.5, 0.5, scales, amplitudes)) {
      best = std::min(best, row.ratio);
    }
    return best;
  };
  const double with_dip = min_ratio(
      build_field(m, GaussianBumpExponent{1.9, -0.3, 0.5, 0.5, 0.01}));
  const double constant = min_ratio(build_field(m, ConstantExponent{1.9}));
  Result r;
  r.pass = with_dip < 0.5 * constant;
  r.detail = "min ratio " + sci(with_dip) + " vs constant-field min " +
             sci(constant) + " (ratio " + sci(with_dip / constant) + ")";
  return r;
}

// --------------------------------------------------------------- criterion 11
Result criterion_11() {
  SolverConfig cfg;
  cfg.seed = 11;
  const GrowthTable table = growth_rate_table(2.0, 0, 1, 5, 1024, cfg);
  double worst = 0.0;
  for (const GrowthRow& row : table.rows) {
    worst = std::max(worst,
                     std::abs(row.lambda_norm - row.m * pi) / (row.m * pi));
  }
  Result r;
  r.pass = worst <= 5e-3 && table.fitted_slope >= 1.95 &&
           table.fitted_slope <= 2.05 && !table.note.empty();
  r.detail = "norm-form defect " + sci(worst) + ", fitted slope " +
             std::to_string(table.fitted_slope) + ", discrepancy note " +
             (table.note.empty() ? "MISSING" : "recorded");
  return r;
}

// --------------------------------------------------------------- criterion 12
Result criterion_12() {
  const std::string cli = VAREXP_CLI_PATH;
  const fs::path base =
      fs::temp_directory_path() / "varexp_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);

  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(base / name);
    out << body;
    return (base / name).string();
  };
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"norm", write("norm.json", R"({
        "mesh": {"dimension": 1, "extent": [0, 1], "cells": [256]},
        "exponent": {"family": "affine", "c0": 2.0, "cx": 1.0},
        "function": {"family": "sinpi"}, "output": "unused", "seed": 12})")},
      {"eigen", write("eigen.json", R"({
        "mesh": {"dimension": 1, "extent": [0, 1], "cells": [128]},
        "exponent": {"family": "constant", "value": 2.5},
        "output": "unused", "seed": 12})")},
      {"sweep", write("sweep.json", R"({
        "mesh": {"dimension": 1, "extent": [0, 1], "cells": [64]},
        "exponent": {"family": "constant", "value": 2.0},
        "sequence": {"rule": "additive", "delta": 1.0, "h_list": [1, 2, 4]},
        "output": "unused", "seed": 12})")},
      {"gamma", write("gamma.json", R"({
        "mesh": {"dimension": 1, "extent": [0, 1], "cells": [64]},
        "exponent": {"family": "constant", "value": 2.0},
        "function": {"family": "sinpi"},
        "sequence": {"rule": "additive", "delta": 0.5, "h_list": [1, 2, 4, 8]},
        "check": {"kind": "semicontinuity",
                  "perturbation": {"kind": "noise", "amplitude": 0.1},
                  "runs": 3},
        "output": "unused", "seed": 12})")},
      {"growth", write("growth.json", R"({
        "mesh": {"dimension": 1, "extent": [0, 1], "cells": [256]},
        "growth": {"p0": 2.0, "m_max": 5},
        "output": "unused", "seed": 12})")}};

  const auto read_file = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  Result r;
  r.pass = true;
  for (const auto& [command, config] : runs) {
    const fs::path out1 = base / (command + "_1");
    const fs::path out2 = base / (command + "_2");
    for (const fs::path& out : {out1, out2}) {
      const std::string invocation = cli + " " + command + " --config " +
                                     config + " --out " + out.string() +
                                     " > /dev/null 2>&1";
      const int status = std::system(invocation.c_str());
      if (status < 0 || WEXITSTATUS(status) != 0) {
        r.pass = false;
        r.detail = command + ": run failed";
      }
    }
    if (!r.pass) break;
    std::vector<fs::path> files1, files2;
    for (const auto& e : fs::directory_iterator(out1)) files1.push_back(e.path());
    for (const auto& e : fs::directory_iterator(out2)) files2.push_back(e.path());
    std::sort(files1.begin(), files1.end());
    std::sort(files2.begin(), files2.end());
    if (files1.size() != files2.size() || files1.empty()) {
      r.pass = false;
      r.detail = command + ": artifact count mismatch";
      break;
    }
    for (size_t i = 0; i < files1.size(); ++i) {
      if (files1[i].filename() != files2[i].filename() ||
          read_file(files1[i]) != read_file(files2[i])) {
        r.pass = false;
        r.detail = command + ": " + files1[i].filename().string() +
                   " differs between reruns";
      }
    }
    if (!r.pass) break;
  }
  if (r.pass) r.detail = "5 commands rerun byte-identically";
  fs::remove_all(base);
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"Luxemburg kernel randomized suite", criterion_1},
      {"embedding constant limit", criterion_2},
      {"derivative formulas vs finite differences", criterion_3},
      {"eigen solve, linear case", criterion_4},
      {"eigen solve, nonlinear constant p", criterion_5},
      {"stability sweep, constant base", criterion_6},
      {"stability sweep, variable base 2D", criterion_7},
      {"gradient-norm convergence along p_h", criterion_8},
      {"semicontinuity and modular convergence suites", criterion_9},
      {"concentration probe", criterion_10},
      {"growth table", criterion_11},
      {"determinism of CLI artifacts", criterion_12},
  };
  int passed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%2zu] %s  %s — %s (%.1f s)\n", i + 1,
                r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                r.detail.c_str(), secs);
    std::fflush(stdout);
    if (r.pass) ++passed;
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
