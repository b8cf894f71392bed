#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace varexp {

/// Tensor-product grid on a 1D interval (a,b) or a 2D rectangle
/// (ax,bx)x(ay,by). Nodes are the tensor grid points, cells the intervals
/// or rectangles between them. Node ordering is x-fastest (row major in y).
class Mesh {
public:
  static Mesh interval(double a, double b, int cells);
  static Mesh rectangle(double ax, double bx, double ay, double by,
                        int cells_x, int cells_y);

  int dimension() const { return dim_; }
  int cells_x() const { return nx_; }
  int cells_y() const { return ny_; }
  int node_count() const;
  int cell_count() const;

  double hx() const { return (bx_ - ax_) / nx_; }
  double hy() const { return (by_ - ay_) / ny_; }

  std::array<double, 2> node(int i) const;
  std::array<double, 2> cell_center(int c) const;
  double cell_measure(int c) const;
  double domain_measure() const;

  /// Node indices of a cell: 2 nodes in 1D, 4 in 2D (x-fastest order).
  std::array<int, 4> cell_nodes(int c) const;

  bool is_boundary(int node) const;
  int boundary_node_count() const;
  int interior_node_count() const;

  Mesh refine(int factor) const;

  bool operator==(const Mesh& other) const;
  bool operator!=(const Mesh& other) const { return !(*this == other); }

  std::string describe() const;

  /// Default node cap; overridable via VAREXP_MAX_NODES.
  static std::int64_t max_nodes();

private:
  Mesh() = default;
  int dim_ = 1;
  int nx_ = 1, ny_ = 1;
  double ax_ = 0, bx_ = 1, ay_ = 0, by_ = 1;
};

/// Throws std::invalid_argument if the two objects do not live on the
/// same mesh.
void require_same_mesh(const Mesh& a, const Mesh& b, const char* what);

}  // namespace varexp
