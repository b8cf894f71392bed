#include "varexp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varexp {

namespace {

std::vector<double> magnitudes_of(const GridFunction& f) {
  auto avg = cell_average(f);
  for (double& v : avg) v = std::abs(v);
  return avg;
}

std::vector<double> magnitudes_of(const CellVectorField& f) {
  std::vector<double> mag(f.mesh().cell_count());
  for (int c = 0; c < f.mesh().cell_count(); ++c) mag[c] = f.magnitude(c);
  return mag;
}

double scaled_modular(const std::vector<double>& mag, const ExponentField& p,
                      double gamma) {
  const Mesh& m = p.mesh();
  const auto& pc = p.cell_values();
  double sum = 0.0;
  for (int c = 0; c < m.cell_count(); ++c) {
    if (mag[c] == 0.0) continue;
    sum += std::pow(mag[c] / gamma, pc[c]) * m.cell_measure(c);
  }
  return sum;
}

}  // namespace

double modular_kernel(const std::vector<double>& mag, const ExponentField& p) {
  return scaled_modular(mag, p, 1.0);
}

double luxemburg_kernel(const std::vector<double>& mag, const ExponentField& p) {
  const double m = modular_kernel(mag, p);
  if (m == 0.0) return 0.0;
  if (!std::isfinite(m)) {
    throw std::runtime_error("luxemburg_norm: non-finite modular");
  }
  // Power bounds give the initial bracket for the root of
  // modular(f/gamma) = 1, a strictly decreasing function of gamma.
  const double b1 = std::pow(m, 1.0 / p.p_minus());
  const double b2 = std::pow(m, 1.0 / p.p_plus());
  double lo = std::min(b1, b2);
  double hi = std::max(b1, b2);
  // Guard against rounding at the bracket edges.
  int guard = 0;
  while (scaled_modular(mag, p, lo) < 1.0 && guard++ < 64) lo *= 0.5;
  guard = 0;
  while (scaled_modular(mag, p, hi) > 1.0 && guard++ < 64) hi *= 2.0;

  const double rel_tol = 1e-12;
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (scaled_modular(mag, p, mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * mid) break;
  }
  if (it >= 200) {
    throw std::runtime_error("luxemburg_norm: bisection did not converge in 200 iterations");
  }
  // Newton polish on g(gamma) = modular(f/gamma) - 1; g'(gamma) =
  // -(1/gamma) * sum p_c (mag_c/gamma)^{p_c} measure_c.
  double gamma = 0.5 * (lo + hi);
  const auto& pc = p.cell_values();
  for (int k = 0; k < 3; ++k) {
    double g = -1.0, dg = 0.0;
    for (int c = 0; c < p.mesh().cell_count(); ++c) {
      if (mag[c] == 0.0) continue;
      const double t = std::pow(mag[c] / gamma, pc[c]) * p.mesh().cell_measure(c);
      g += t;
      dg -= pc[c] * t / gamma;
    }
    if (dg == 0.0) break;
    const double next = gamma - g / dg;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    gamma = next;
  }
  return gamma;
}

double modular(const GridFunction& f, const ExponentField& p) {
  require_same_mesh(f.mesh(), p.mesh(), "modular");
  return modular_kernel(magnitudes_of(f), p);
}

double modular(const CellVectorField& f, const ExponentField& p) {
  require_same_mesh(f.mesh(), p.mesh(), "modular");
  return modular_kernel(magnitudes_of(f), p);
}

double luxemburg_norm(const GridFunction& f, const ExponentField& p) {
  require_same_mesh(f.mesh(), p.mesh(), "luxemburg_norm");
  return luxemburg_kernel(magnitudes_of(f), p);
}

double luxemburg_norm(const CellVectorField& f, const ExponentField& p) {
  require_same_mesh(f.mesh(), p.mesh(), "luxemburg_norm");
  return luxemburg_kernel(magnitudes_of(f), p);
}

namespace {
int band_sign(double x, double band) {
  if (std::abs(x - 1.0) <= band) return 0;
  return x < 1.0 ? -1 : 1;
}
}  // namespace

UnitBallVerdict unit_ball_check(const GridFunction& f, const ExponentField& p) {
  UnitBallVerdict v;
  v.norm = luxemburg_norm(f, p);
  v.modular = modular(f, p);
  const double band = 1e-9;
  v.norm_sign = band_sign(v.norm, band);
  v.modular_sign = band_sign(v.modular, band);
  v.pass = v.norm_sign == v.modular_sign;
  return v;
}

double embedding_constant(double omega_measure, const ExponentField& p,
                          const ExponentField& q) {
  require_same_mesh(p.mesh(), q.mesh(), "embedding_constant");
  if (omega_measure <= 0) {
    throw std::invalid_argument("embedding_constant: domain measure must be positive");
  }
  double ratio_max = -std::numeric_limits<double>::infinity();
  double comp_max = -std::numeric_limits<double>::infinity();
  double exp_max = -std::numeric_limits<double>::infinity();
  double exp_min = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < p.values().size(); ++i) {
    const double pi = p.values()[i];
    const double qi = q.values()[i];
    if (pi > qi) {
      throw std::invalid_argument("embedding_constant: p > q at node " + std::to_string(i));
    }
    const double r = pi / qi;
    ratio_max = std::max(ratio_max, r);
    comp_max = std::max(comp_max, 1.0 - r);
    const double e = 1.0 / pi - 1.0 / qi;
    exp_max = std::max(exp_max, e);
    exp_min = std::min(exp_min, e);
  }
  const double factor = ratio_max + comp_max;
  const double measure_part =
      std::max(std::pow(omega_measure, exp_max), std::pow(omega_measure, exp_min));
  return factor * measure_part;
}

HolderVerdict holder_check(const GridFunction& u, const ExponentField& p,
                           const ExponentField& q) {
  HolderVerdict v;
  const double C = embedding_constant(p.mesh().domain_measure(), p, q);
  v.lhs = luxemburg_norm(u, p);
  v.rhs = C * luxemburg_norm(u, q);
  v.pass = v.lhs <= v.rhs * (1.0 + 1e-9);
  return v;
}

}  // namespace varexp
