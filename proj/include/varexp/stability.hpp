#pragma once

#include <string>
#include <vector>

#include "varexp/solver.hpp"

namespace varexp {

struct SweepRow {
  int h = 0;
  double sup_distance = 0;  // ||p_h - p||_inf
  double lambda = 0;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

struct StabilityReport {
  std::vector<SweepRow> rows;  // sorted by h ascending
  double base_lambda = 0;
  double base_residual = 0;
  std::vector<double> increments;  // |lambda_{h_{i+1}} - lambda_{h_i}|
  double final_gap = 0;            // |lambda_{h_max} - base_lambda|
  double tolerance = 0;            // absolute gap threshold used
  bool verdict_available = false;  // false when any row failed to converge
  bool consistent_with_right_continuity = false;
};

/// Solves the first eigenpair along the sequence and for the base field;
/// verdict requires the final gap below rel_tol * base_lambda and the
/// last three increments non-increasing.
StabilityReport stability_sweep(const ExponentField& p,
                                const ExponentSequence& seq,
                                const SolverConfig& cfg,
                                double rel_tol = 1e-2);

struct CheckReport {
  std::string name;
  std::string sample;
  std::vector<int> h;
  std::vector<double> observed;    // primary sequence
  std::vector<double> observed2;   // secondary sequence (modular check)
  double base_value = 0;
  double base_value2 = 0;
  double tolerance = 0;
  bool pass = false;
};

/// Observes K_h = ||grad w||_{p_h(x)}; pass when |K_h - K_base| is
/// non-increasing and the final gap is at most 1e-4 * K_base. The
/// zero-gradient branch passes trivially; w identically 0 is an error.
CheckReport gamma_limsup_check(const ExponentField& p,
                               const ExponentSequence& seq,
                               const GridFunction& w);

enum class PerturbationKind { identity, scale, noise, bump };

struct PerturbationRule {
  PerturbationKind kind = PerturbationKind::identity;
  double amplitude = 0.1;
  std::uint64_t seed = 0;
};

GridFunction apply_perturbation(const GridFunction& u, int h,
                                const PerturbationRule& rule);

/// Lower-semicontinuity surrogate: min over the tail half of the h list
/// of ||u_h||_{p_h} must be >= ||u||_p - 1e-6.
CheckReport norm_semicontinuity_check(const ExponentField& p,
                                      const ExponentSequence& seq,
                                      const GridFunction& u,
                                      const PerturbationRule& rule);

/// Modular and norm convergence surrogate under the bounded-energy
/// hypothesis sup_h ||grad u_h||_{p_h} finite; pass when both final gaps
/// are within 1e-4 relative of the base values.
CheckReport modular_convergence_check(const ExponentField& p,
                                      const ExponentSequence& seq,
                                      const GridFunction& u,
                                      const PerturbationRule& rule);

struct GrowthRow {
  int m = 0;
  double lambda_norm = 0;     // norm-form value m * lambda^(1)
  double lambda_modular = 0;  // (norm-form)^{p0}
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  double fitted_slope = 0;       // least-squares slope of log lambda_modular vs log m
  double np_exponent = 0;        // N/p0 scaling candidate (N = 1 here)
  bool slope_matches_np = false;
  std::string note;              // records the exponent discrepancy when present
};

GrowthTable growth_rate_table(double p0, double a, double b, int m_max,
                              int cells, const SolverConfig& cfg);

}  // namespace varexp
