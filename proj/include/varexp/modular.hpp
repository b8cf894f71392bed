#pragma once

#include "varexp/discretization.hpp"
#include "varexp/exponent.hpp"
#include "varexp/grid_function.hpp"

namespace varexp {

/// p(x)-modular by midpoint quadrature: sum over cells of
/// |f(center)|^{p(center)} * measure.
double modular(const GridFunction& f, const ExponentField& p);
double modular(const CellVectorField& f, const ExponentField& p);

/// Luxemburg norm: the unique gamma with modular(f/gamma, p) = 1, by
/// bracketed bisection (relative tolerance 1e-12) with Newton polish.
/// Returns 0 when the modular vanishes.
double luxemburg_norm(const GridFunction& f, const ExponentField& p);
double luxemburg_norm(const CellVectorField& f, const ExponentField& p);

/// Shared kernel on cell magnitudes; exposed for the solver.
double modular_kernel(const std::vector<double>& magnitudes,
                      const ExponentField& p);
double luxemburg_kernel(const std::vector<double>& magnitudes,
                        const ExponentField& p);

struct UnitBallVerdict {
  double norm = 0;
  double modular = 0;
  int norm_sign = 0;     // sign of norm - 1 with a 1e-9 band around 1
  int modular_sign = 0;  // sign of modular - 1, same band
  bool pass = false;     // signs agree
};

UnitBallVerdict unit_ball_check(const GridFunction& f, const ExponentField& p);

/// Embedding constant C(|Omega|, p, q) for p <= q nodewise:
/// [(p/q)_+ + (1 - p/q)_+] * max{|Omega|^{(1/p-1/q)_+}, |Omega|^{(1/p-1/q)_-}}
/// with (.)_+/(.)_- the max/min over nodes.
double embedding_constant(double omega_measure, const ExponentField& p,
                          const ExponentField& q);

struct HolderVerdict {
  double lhs = 0;  // ||u||_{p(x)}
  double rhs = 0;  // C(|Omega|,p,q) * ||u||_{q(x)}
  bool pass = false;
};

HolderVerdict holder_check(const GridFunction& u, const ExponentField& p,
                           const ExponentField& q);

}  // namespace varexp
