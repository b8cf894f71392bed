#pragma once

#include <array>
#include <vector>

#include "varexp/mesh.hpp"

namespace varexp {

/// Nodal scalar field with the mesh's Dirichlet boundary mask.
class GridFunction {
public:
  GridFunction() : GridFunction(Mesh::interval(0.0, 1.0, 1)) {}
  GridFunction(Mesh mesh, std::vector<double> nodal_values);
  explicit GridFunction(Mesh mesh);  // zero function

  const Mesh& mesh() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](int node) const { return values_[node]; }
  double& operator[](int node) { return values_[node]; }

  bool is_dirichlet_admissible() const;
  bool all_finite() const;
  bool is_zero() const;

  void zero_boundary();

  GridFunction& operator*=(double alpha);
  GridFunction& operator+=(const GridFunction& other);
  friend GridFunction operator*(double alpha, GridFunction f) {
    f *= alpha;
    return f;
  }
  friend GridFunction operator+(GridFunction a, const GridFunction& b) {
    a += b;
    return a;
  }
  friend GridFunction operator-(GridFunction a) {
    a *= -1.0;
    return a;
  }

private:
  Mesh mesh_;
  std::vector<double> values_;
};

/// One vector per cell; the y component is zero in 1D.
class CellVectorField {
public:
  CellVectorField(Mesh mesh, std::vector<std::array<double, 2>> vectors);
  explicit CellVectorField(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const std::vector<std::array<double, 2>>& vectors() const { return vecs_; }
  std::vector<std::array<double, 2>>& vectors() { return vecs_; }
  double magnitude(int cell) const;
  bool all_finite() const;

private:
  Mesh mesh_;
  std::vector<std::array<double, 2>> vecs_;
};

}  // namespace varexp
