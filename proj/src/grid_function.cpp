#include "varexp/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace varexp {

GridFunction::GridFunction(Mesh mesh, std::vector<double> nodal_values)
    : mesh_(std::move(mesh)), values_(std::move(nodal_values)) {
  if (static_cast<int>(values_.size()) != mesh_.node_count()) {
    throw std::invalid_argument("GridFunction: nodal value count does not match mesh");
  }
}

GridFunction::GridFunction(Mesh mesh)
    : mesh_(std::move(mesh)), values_(mesh_.node_count(), 0.0) {}

bool GridFunction::is_dirichlet_admissible() const {
  for (int i = 0; i < mesh_.node_count(); ++i) {
    if (mesh_.is_boundary(i) && values_[i] != 0.0) return false;
  }
  return true;
}

bool GridFunction::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool GridFunction::is_zero() const {
  for (double v : values_) {
    if (v != 0.0) return false;
  }
  return true;
}

void GridFunction::zero_boundary() {
  for (int i = 0; i < mesh_.node_count(); ++i) {
    if (mesh_.is_boundary(i)) values_[i] = 0.0;
  }
}

GridFunction& GridFunction::operator*=(double alpha) {
  for (double& v : values_) v *= alpha;
  return *this;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_mesh(mesh_, other.mesh_, "GridFunction addition");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

CellVectorField::CellVectorField(Mesh mesh,
                                 std::vector<std::array<double, 2>> vectors)
    : mesh_(std::move(mesh)), vecs_(std::move(vectors)) {
  if (static_cast<int>(vecs_.size()) != mesh_.cell_count()) {
    throw std::invalid_argument("CellVectorField: vector count does not match mesh");
  }
}

CellVectorField::CellVectorField(Mesh mesh)
    : mesh_(std::move(mesh)),
      vecs_(mesh_.cell_count(), std::array<double, 2>{0.0, 0.0}) {}

double CellVectorField::magnitude(int cell) const {
  return std::hypot(vecs_[cell][0], vecs_[cell][1]);
}

bool CellVectorField::all_finite() const {
  for (const auto& v : vecs_) {
    if (!std::isfinite(v[0]) || !std::isfinite(v[1])) return false;
  }
  return true;
}

}  // namespace varexp
