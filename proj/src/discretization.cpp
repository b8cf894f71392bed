#include "varexp/discretization.hpp"

#include <cmath>
#include <stdexcept>

namespace varexp {

CellVectorField gradient(const GridFunction& u) {
  const Mesh& m = u.mesh();
  CellVectorField g(m);
  const auto& v = u.values();
  if (m.dimension() == 1) {
    const double inv_h = 1.0 / m.hx();
    for (int c = 0; c < m.cell_count(); ++c) {
      g.vectors()[c] = {(v[c + 1] - v[c]) * inv_h, 0.0};
    }
    return g;
  }
  const double inv_hx = 1.0 / m.hx();
  const double inv_hy = 1.0 / m.hy();
  for (int c = 0; c < m.cell_count(); ++c) {
    const auto n = m.cell_nodes(c);
    // average of the two edge differences along each axis
    const double gx = 0.5 * ((v[n[1]] - v[n[0]]) + (v[n[3]] - v[n[2]])) * inv_hx;
    const double gy = 0.5 * ((v[n[2]] - v[n[0]]) + (v[n[3]] - v[n[1]])) * inv_hy;
    g.vectors()[c] = {gx, gy};
  }
  return g;
}

std::vector<double> cell_average(const GridFunction& u) {
  const Mesh& m = u.mesh();
  const auto& v = u.values();
  std::vector<double> avg(m.cell_count());
  if (m.dimension() == 1) {
    for (int c = 0; c < m.cell_count(); ++c) {
      avg[c] = 0.5 * (v[c] + v[c + 1]);
    }
  } else {
    for (int c = 0; c < m.cell_count(); ++c) {
      const auto n = m.cell_nodes(c);
      avg[c] = 0.25 * (v[n[0]] + v[n[1]] + v[n[2]] + v[n[3]]);
    }
  }
  return avg;
}

GridFunction interpolate(const ScalarFunction& f, const Mesh& mesh) {
  GridFunction u(mesh);
  for (int i = 0; i < mesh.node_count(); ++i) {
    const auto x = mesh.node(i);
    const double v = f(x[0], x[1]);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("interpolate: non-finite sample at node " +
                                  std::to_string(i));
    }
    u[i] = v;
  }
  return u;
}

}  // namespace varexp
