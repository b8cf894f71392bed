#include "varexp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace varexp {

void SolverConfig::validate() const {
  if (!(initial_step > 0)) throw std::invalid_argument("solver: initial_step must be positive");
  if (!(backtrack > 0 && backtrack < 1)) {
    throw std::invalid_argument("solver: backtracking factor must be in (0,1)");
  }
  if (!(tol_lambda > 0) || !(tol_residual > 0)) {
    throw std::invalid_argument("solver: tolerances must be positive");
  }
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (restarts < 1) throw std::invalid_argument("solver: restarts must be >= 1");
}

namespace {

struct Actions {
  double K = 0, k = 0;
  double DK = 0, Dk = 0;  // derivative-formula denominators
  std::vector<double> a;  // <K'(u), hat_i>
  std::vector<double> b;  // <k'(u), hat_i>
};

std::vector<double> gradient_magnitudes(const CellVectorField& g) {
  std::vector<double> mag(g.mesh().cell_count());
  for (int c = 0; c < g.mesh().cell_count(); ++c) mag[c] = g.magnitude(c);
  return mag;
}

// Scatters per-cell gradient weights w_c (a vector per cell) through the
// transpose of the gradient stencil into a nodal vector.
void scatter_gradient_adjoint(const Mesh& m,
                              const std::vector<std::array<double, 2>>& w,
                              std::vector<double>& out) {
  if (m.dimension() == 1) {
    const double inv_h = 1.0 / m.hx();
    for (int c = 0; c < m.cell_count(); ++c) {
      out[c] -= w[c][0] * inv_h;
      out[c + 1] += w[c][0] * inv_h;
    }
    return;
  }
  const double cx = 0.5 / m.hx();
  const double cy = 0.5 / m.hy();
  for (int c = 0; c < m.cell_count(); ++c) {
    const auto n = m.cell_nodes(c);
    const double wx = w[c][0] * cx;
    const double wy = w[c][1] * cy;
    out[n[0]] += -wx - wy;
    out[n[1]] += wx - wy;
    out[n[2]] += -wx + wy;
    out[n[3]] += wx + wy;
  }
}

// Scatters per-cell averaging weights through the transpose of the
// cell-average stencil.
void scatter_average_adjoint(const Mesh& m, const std::vector<double>& w,
                             std::vector<double>& out) {
  if (m.dimension() == 1) {
    for (int c = 0; c < m.cell_count(); ++c) {
      out[c] += 0.5 * w[c];
      out[c + 1] += 0.5 * w[c];
    }
    return;
  }
  for (int c = 0; c < m.cell_count(); ++c) {
    const auto n = m.cell_nodes(c);
    const double q = 0.25 * w[c];
    out[n[0]] += q;
    out[n[1]] += q;
    out[n[2]] += q;
    out[n[3]] += q;
  }
}

Actions assemble_actions(const GridFunction& u, const ExponentField& p) {
  const Mesh& m = u.mesh();
  Actions act;
  const CellVectorField g = gradient(u);
  const auto gmag = gradient_magnitudes(g);
  const auto uc = cell_average(u);
  act.K = luxemburg_kernel(gmag, p);
  std::vector<double> umag(uc.size());
  for (size_t c = 0; c < uc.size(); ++c) umag[c] = std::abs(uc[c]);
  act.k = luxemburg_kernel(umag, p);
  if (act.K == 0.0) throw std::invalid_argument("K(u): zero gradient field");
  if (act.k == 0.0) throw std::invalid_argument("k(u): zero function");

  const auto& pc = p.cell_values();
  std::vector<std::array<double, 2>> wg(m.cell_count(), {0.0, 0.0});
  std::vector<double> wu(m.cell_count(), 0.0);
  for (int c = 0; c < m.cell_count(); ++c) {
    const double meas = m.cell_measure(c);
    const double gm = gmag[c] / act.K;
    if (gm > 0.0) {
      // |v|^{p-2} v with the removable singularity at v = 0 set to 0
      act.DK += pc[c] * std::pow(gm, pc[c]) * meas;
      const double w = pc[c] * std::pow(gm, pc[c] - 2.0) * meas / act.K;
      wg[c] = {w * g.vectors()[c][0], w * g.vectors()[c][1]};
    }
    const double um = umag[c] / act.k;
    if (um > 0.0) {
      act.Dk += pc[c] * std::pow(um, pc[c]) * meas;
      wu[c] = pc[c] * std::pow(um, pc[c] - 2.0) * (uc[c] / act.k) * meas;
    }
  }
  act.a.assign(m.node_count(), 0.0);
  act.b.assign(m.node_count(), 0.0);
  scatter_gradient_adjoint(m, wg, act.a);
  scatter_average_adjoint(m, wu, act.b);
  for (double& v : act.a) v /= act.DK;
  for (double& v : act.b) v /= act.Dk;
  return act;
}

// Dirichlet stiffness solve used as the descent metric. 1D: Thomas
// algorithm on the tridiagonal stencil; 2D: conjugate gradients on the
// 5-point stencil.
std::vector<double> stiffness_solve(const Mesh& m, const std::vector<double>& rhs) {
  std::vector<double> x(m.node_count(), 0.0);
  if (m.dimension() == 1) {
    const int nint = m.cells_x() - 1;
    if (nint < 1) return x;
    const double diag0 = 2.0 / m.hx();
    const double off = -1.0 / m.hx();
    std::vector<double> diag(nint, diag0), d(nint);
    for (int i = 0; i < nint; ++i) d[i] = rhs[i + 1];
    for (int i = 1; i < nint; ++i) {
      const double w = off / diag[i - 1];
      diag[i] -= w * off;
      d[i] -= w * d[i - 1];
    }
    x[nint] = d[nint - 1] / diag[nint - 1];
    for (int i = nint - 2; i >= 0; --i) {
      x[i + 1] = (d[i] - off * x[i + 2]) / diag[i];
    }
    return x;
  }
  // 2D: CG on the full nodal vector, boundary rows pinned to zero.
  const int n = m.node_count();
  const int row = m.cells_x() + 1;
  const double cx = m.hy() / m.hx();
  const double cy = m.hx() / m.hy();
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (int i = 0; i < n; ++i) {
      if (m.is_boundary(i)) {
        out[i] = 0.0;
        continue;
      }
      out[i] = cx * (2.0 * v[i] - v[i - 1] - v[i + 1]) +
               cy * (2.0 * v[i] - v[i - row] - v[i + row]);
    }
  };
  std::vector<double> r(n, 0.0), pdir(n, 0.0), Ap(n, 0.0);
  for (int i = 0; i < n; ++i) r[i] = m.is_boundary(i) ? 0.0 : rhs[i];
  pdir = r;
  double rr = 0.0;
  for (double v : r) rr += v * v;
  const double rr0 = rr;
  if (rr0 == 0.0) return x;
  for (int it = 0; it < 4 * n; ++it) {
    apply(pdir, Ap);
    double pAp = 0.0;
    for (int i = 0; i < n; ++i) pAp += pdir[i] * Ap[i];
    if (pAp <= 0.0) break;
    const double alpha = rr / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * pdir[i];
      r[i] -= alpha * Ap[i];
    }
    double rr_new = 0.0;
    for (double v : r) rr_new += v * v;
    if (rr_new <= 1e-22 * rr0) break;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) pdir[i] = r[i] + beta * pdir[i];
  }
  return x;
}

double rayleigh_of(const GridFunction& u, const ExponentField& p, double* k_out) {
  const auto gmag = gradient_magnitudes(gradient(u));
  auto uc = cell_average(u);
  for (double& v : uc) v = std::abs(v);
  const double Kv = luxemburg_kernel(gmag, p);
  const double kv = luxemburg_kernel(uc, p);
  if (k_out) *k_out = kv;
  if (kv == 0.0) return std::numeric_limits<double>::infinity();
  return Kv / kv;
}

GridFunction initial_guess(const ExponentField& p, std::uint64_t seed, int restart) {
  const Mesh& m = p.mesh();
  GridFunction u(m);
  const auto lo = m.node(0);
  const auto hi = m.node(m.node_count() - 1);
  for (int i = 0; i < m.node_count(); ++i) {
    const auto x = m.node(i);
    const double tx = (x[0] - lo[0]) / (hi[0] - lo[0]);
    double v = 4.0 * tx * (1.0 - tx);
    if (m.dimension() == 2) {
      const double ty = (x[1] - lo[1]) / (hi[1] - lo[1]);
      v *= 4.0 * ty * (1.0 - ty);
    }
    u[i] = v;
  }
  if (restart > 0) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(restart));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < m.node_count(); ++i) {
      if (!m.is_boundary(i)) u[i] += 0.1 * uni(rng);
    }
  }
  u.zero_boundary();
  return u;
}

struct RestartResult {
  EigenPair pair;
  bool ok = false;
};

RestartResult run_restart(const ExponentField& p, const SolverConfig& cfg,
                          int restart) {
  const Mesh& m = p.mesh();
  GridFunction u = initial_guess(p, cfg.seed, restart);
  {
    double kv = 0;
    rayleigh_of(u, p, &kv);
    if (kv == 0.0) throw std::runtime_error("solver: degenerate initial iterate");
    u *= 1.0 / kv;
  }

  RestartResult rr;
  rr.pair.u = u;
  double lambda = 0;
  double tau = cfg.initial_step;
  bool converged = false;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    Actions act = assemble_actions(u, p);
    lambda = act.K / act.k;
    double res = 0.0;
    std::vector<double> r(m.node_count(), 0.0);
    for (int i = 0; i < m.node_count(); ++i) {
      if (m.is_boundary(i)) continue;
      r[i] = act.a[i] - lambda * act.b[i];
      res = std::max(res, std::abs(r[i]));
    }
    res *= act.DK;
    if (it == 0) rr.pair.initial_residual = res;
    rr.pair.el_residual = res;
    if (res <= cfg.tol_residual) {
      converged = true;
      break;
    }
    const std::vector<double> dir = stiffness_solve(m, r);
    // backtracking line search on the Rayleigh ratio
    bool accepted = false;
    double t = tau;
    double new_lambda = 0, new_k = 0;
    GridFunction trial(m);
    for (int bt = 0; bt < 80; ++bt) {
      trial = u;
      for (int i = 0; i < m.node_count(); ++i) trial[i] -= t * dir[i];
      const double Rt = rayleigh_of(trial, p, &new_k);
      if (new_k > 0.0 && Rt < lambda) {
        accepted = true;
        new_lambda = Rt;
        break;
      }
      t *= cfg.backtrack;
    }
    if (!accepted) {
      // numerical floor of the line search: stationary point
      converged = true;
      break;
    }
    trial *= 1.0 / new_k;
    u = trial;
    tau = std::min(t / cfg.backtrack, 1e6);
    const double change = std::abs(lambda - new_lambda);
    lambda = new_lambda;
    if (change <= cfg.tol_lambda * lambda) {
      // recompute the residual at the accepted iterate before reporting
      Actions last = assemble_actions(u, p);
      lambda = last.K / last.k;
      double res2 = 0.0;
      for (int i = 0; i < m.node_count(); ++i) {
        if (m.is_boundary(i)) continue;
        res2 = std::max(res2, std::abs(last.a[i] - lambda * last.b[i]));
      }
      rr.pair.el_residual = res2 * last.DK;
      converged = true;
      ++it;
      break;
    }
  }
  // normalize exactly and fix the sign convention
  double kv = 0;
  rayleigh_of(u, p, &kv);
  u *= 1.0 / kv;
  const auto [mn, mx] = std::minmax_element(u.values().begin(), u.values().end());
  if (*mx < -*mn) u *= -1.0;
  rr.pair.u = u;
  rr.pair.lambda = lambda;
  rr.pair.iterations = it;
  rr.pair.converged = converged;
  rr.ok = converged;
  return rr;
}

}  // namespace

double K(const GridFunction& u, const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "K");
  const CellVectorField g = gradient(u);
  const double v = luxemburg_norm(g, p);
  if (v == 0.0) throw std::invalid_argument("K(u): zero gradient field");
  return v;
}

double k(const GridFunction& u, const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "k");
  const double v = luxemburg_norm(u, p);
  if (v == 0.0) throw std::invalid_argument("k(u): zero function");
  return v;
}

double S(const GridFunction& u, const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "S");
  const Actions act = assemble_actions(u, p);
  return act.DK / act.Dk;
}

double K_prime_action(const GridFunction& u, const GridFunction& v,
                      const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "K_prime_action");
  require_same_mesh(v.mesh(), p.mesh(), "K_prime_action");
  if (!v.is_dirichlet_admissible()) {
    throw std::invalid_argument("K_prime_action: test function must vanish on the boundary");
  }
  const Actions act = assemble_actions(u, p);
  double sum = 0.0;
  for (int i = 0; i < p.mesh().node_count(); ++i) sum += act.a[i] * v[i];
  return sum;
}

double k_prime_action(const GridFunction& u, const GridFunction& v,
                      const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "k_prime_action");
  require_same_mesh(v.mesh(), p.mesh(), "k_prime_action");
  if (!v.is_dirichlet_admissible()) {
    throw std::invalid_argument("k_prime_action: test function must vanish on the boundary");
  }
  const Actions act = assemble_actions(u, p);
  double sum = 0.0;
  for (int i = 0; i < p.mesh().node_count(); ++i) sum += act.b[i] * v[i];
  return sum;
}

double rayleigh_ratio(const GridFunction& u, const ExponentField& p) {
  return K(u, p) / k(u, p);
}

double el_residual(const GridFunction& u, double lambda, const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "el_residual");
  const Actions act = assemble_actions(u, p);
  if (std::abs(act.k - 1.0) > 1e-6) {
    throw std::invalid_argument("el_residual: u must be normalized to k(u) = 1");
  }
  const double s = act.DK / act.Dk;
  double res = 0.0;
  for (int i = 0; i < p.mesh().node_count(); ++i) {
    if (p.mesh().is_boundary(i)) continue;
    res = std::max(res, std::abs(act.a[i] * act.DK - lambda * s * act.b[i] * act.Dk));
  }
  return res;
}

EigenPair solve_first_eigenpair(const ExponentField& p, const SolverConfig& cfg) {
  cfg.validate();
  if (p.mesh().interior_node_count() < 2) {
    throw std::invalid_argument("solver: mesh must have at least 2 interior nodes");
  }
  EigenPair best;
  bool have_converged = false;
  bool have_any = false;
  int restarts_used = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    ++restarts_used;
    RestartResult rr = run_restart(p, cfg, r);
    const bool better = [&] {
      if (!have_any) return true;
      if (rr.ok != have_converged) return rr.ok;
      if (std::abs(rr.pair.lambda - best.lambda) <= cfg.tol_lambda * best.lambda) {
        return rr.pair.el_residual < best.el_residual;
      }
      return rr.pair.lambda < best.lambda;
    }();
    if (better) {
      best = rr.pair;
      have_converged = rr.ok;
    }
    have_any = true;
  }
  best.restarts_used = restarts_used;
  if (!have_converged) {
    throw SolverNonConvergence("solver did not converge within max_iter on any restart",
                               best);
  }
  return best;
}

double constant_p_higher_eigenvalue_1d(int m, double p0, double a, double b,
                                       int cells, const SolverConfig& cfg) {
  if (m < 1) throw std::invalid_argument("constant_p_higher_eigenvalue_1d: m must be >= 1");
  const Mesh mesh = Mesh::interval(a, b, cells);
  const ExponentField p = build_field(mesh, ConstantExponent{p0});
  const EigenPair first = solve_first_eigenpair(p, cfg);
  // m-fold odd reflection: each sub-bump is the first eigenfunction on an
  // interval of length (b-a)/m and the norm-form ratio scales like m.
  return m * first.lambda;
}

double inhomogeneous_ratio(const GridFunction& u, const ExponentField& p) {
  require_same_mesh(u.mesh(), p.mesh(), "inhomogeneous_ratio");
  const double den = modular(u, p);
  if (den == 0.0) throw std::invalid_argument("inhomogeneous_ratio: zero function");
  return modular(gradient(u), p) / den;
}

std::vector<ProbeRow> concentration_probe(const ExponentField& p, double x0,
                                          double y0,
                                          const std::vector<double>& scales,
                                          const std::vector<double>& amplitudes) {
  const Mesh& m = p.mesh();
  const auto lo = m.node(0);
  const auto hi = m.node(m.node_count() - 1);
  const bool inside = x0 > lo[0] && x0 < hi[0] &&
                      (m.dimension() == 1 || (y0 > lo[1] && y0 < hi[1]));
  if (!inside) {
    throw std::invalid_argument("concentration_probe: x0 outside the domain");
  }
  std::vector<ProbeRow> rows;
  for (double eps : scales) {
    if (!(eps > 0)) throw std::invalid_argument("concentration_probe: scale must be positive");
    GridFunction phi = interpolate(
        [&](double x, double y) {
          const double dx = x - x0;
          const double dy = m.dimension() == 2 ? y - y0 : 0.0;
          return std::exp(-(dx * dx + dy * dy) / (eps * eps));
        },
        m);
    phi.zero_boundary();
    for (double t : amplitudes) {
      GridFunction u = phi;
      u *= t;
      rows.push_back({eps, t, inhomogeneous_ratio(u, p)});
    }
  }
  return rows;
}

}  // namespace varexp
