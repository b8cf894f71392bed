#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "varexp/modular.hpp"

namespace varexp {

struct SolverConfig {
  double initial_step = 0.5;
  double backtrack = 0.5;     // step shrink factor in (0,1)
  double tol_lambda = 1e-9;   // relative change of the Rayleigh ratio
  double tol_residual = 1e-6; // Euler-Lagrange residual
  int max_iter = 50000;
  int restarts = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EigenPair {
  double lambda = 0;
  GridFunction u;
  double el_residual = 0;
  double initial_residual = 0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
};

/// K(u) = ||grad u||_{p(x)}. Throws on a zero gradient field.
double K(const GridFunction& u, const ExponentField& p);
/// k(u) = ||u||_{p(x)}. Throws on the zero function.
double k(const GridFunction& u, const ExponentField& p);
/// Ratio of the p(x)-weighted modulars of grad(u)/K(u) and u/k(u).
double S(const GridFunction& u, const ExponentField& p);

/// Directional derivative actions of K and k at u in direction v.
double K_prime_action(const GridFunction& u, const GridFunction& v,
                      const ExponentField& p);
double k_prime_action(const GridFunction& u, const GridFunction& v,
                      const ExponentField& p);

double rayleigh_ratio(const GridFunction& u, const ExponentField& p);

/// Weak-form defect: sup over interior nodal hat functions v of
/// |<K'(u),v> * D_K - lambda * S(u) * <k'(u),v> * D_k| where D_K, D_k are
/// the derivative-formula denominators. Requires k(u) = 1.
double el_residual(const GridFunction& u, double lambda,
                   const ExponentField& p);

class SolverNonConvergence : public std::runtime_error {
public:
  SolverNonConvergence(std::string msg, EigenPair best)
      : std::runtime_error(std::move(msg)), best_iterate(std::move(best)) {}
  EigenPair best_iterate;
};

/// First eigenpair by projected descent on the Rayleigh ratio under the
/// constraint k(u) = 1. Throws SolverNonConvergence if no restart meets
/// the tolerances within max_iter.
EigenPair solve_first_eigenpair(const ExponentField& p, const SolverConfig& cfg);

/// m-th norm-form eigenvalue for constant p in 1D via the m-fold odd
/// reflection structure: lambda^(m) = m * lambda^(1) on the same interval.
double constant_p_higher_eigenvalue_1d(int m, double p0, double a, double b,
                                       int cells, const SolverConfig& cfg);

/// int |grad u|^{p(x)} / int |u|^{p(x)}.
double inhomogeneous_ratio(const GridFunction& u, const ExponentField& p);

struct ProbeRow {
  double scale = 0;
  double amplitude = 0;
  double ratio = 0;
};

/// Evaluates the inhomogeneous ratio on Gaussian bumps centered at x0
/// with the given widths and amplitudes.
std::vector<ProbeRow> concentration_probe(const ExponentField& p, double x0,
                                          double y0,
                                          const std::vector<double>& scales,
                                          const std::vector<double>& amplitudes);

}  // namespace varexp
