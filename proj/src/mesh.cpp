#include "varexp/mesh.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace varexp {

namespace {

void check_extent(double a, double b, const char* axis) {
  if (!(b > a)) {
    throw std::invalid_argument(std::string("mesh extent must satisfy a < b on axis ") + axis);
  }
}

void check_cells(int n, const char* axis) {
  if (n < 1) {
    throw std::invalid_argument(std::string("cells per axis must be >= 1 on axis ") + axis);
  }
}

}  // namespace

std::int64_t Mesh::max_nodes() {
  if (const char* env = std::getenv("VAREXP_MAX_NODES")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 10'000'000;
}

Mesh Mesh::interval(double a, double b, int cells) {
  check_extent(a, b, "x");
  check_cells(cells, "x");
  Mesh m;
  m.dim_ = 1;
  m.nx_ = cells;
  m.ny_ = 1;
  m.ax_ = a;
  m.bx_ = b;
  m.ay_ = 0;
  m.by_ = 1;
  if (m.node_count() > max_nodes()) {
    throw std::invalid_argument("mesh exceeds the node cap");
  }
  return m;
}

Mesh Mesh::rectangle(double ax, double bx, double ay, double by, int cells_x,
                     int cells_y) {
  check_extent(ax, bx, "x");
  check_extent(ay, by, "y");
  check_cells(cells_x, "x");
  check_cells(cells_y, "y");
  Mesh m;
  m.dim_ = 2;
  m.nx_ = cells_x;
  m.ny_ = cells_y;
  m.ax_ = ax;
  m.bx_ = bx;
  m.ay_ = ay;
  m.by_ = by;
  if (m.node_count() > max_nodes()) {
    throw std::invalid_argument("mesh exceeds the node cap");
  }
  return m;
}

int Mesh::node_count() const {
  return dim_ == 1 ? nx_ + 1 : (nx_ + 1) * (ny_ + 1);
}

int Mesh::cell_count() const { return dim_ == 1 ? nx_ : nx_ * ny_; }

std::array<double, 2> Mesh::node(int i) const {
  if (dim_ == 1) {
    return {ax_ + i * hx(), 0.0};
  }
  const int ix = i % (nx_ + 1);
  const int iy = i / (nx_ + 1);
  return {ax_ + ix * hx(), ay_ + iy * hy()};
}

std::array<double, 2> Mesh::cell_center(int c) const {
  if (dim_ == 1) {
    return {ax_ + (c + 0.5) * hx(), 0.0};
  }
  const int cx = c % nx_;
  const int cy = c / nx_;
  return {ax_ + (cx + 0.5) * hx(), ay_ + (cy + 0.5) * hy()};
}

double Mesh::cell_measure(int) const {
  return dim_ == 1 ? hx() : hx() * hy();
}

double Mesh::domain_measure() const {
  return dim_ == 1 ? (bx_ - ax_) : (bx_ - ax_) * (by_ - ay_);
}

std::array<int, 4> Mesh::cell_nodes(int c) const {
  if (dim_ == 1) {
    return {c, c + 1, -1, -1};
  }
  const int cx = c % nx_;
  const int cy = c / nx_;
  const int n00 = cy * (nx_ + 1) + cx;
  return {n00, n00 + 1, n00 + (nx_ + 1), n00 + (nx_ + 1) + 1};
}

bool Mesh::is_boundary(int node) const {
  if (dim_ == 1) {
    return node == 0 || node == nx_;
  }
  const int ix = node % (nx_ + 1);
  const int iy = node / (nx_ + 1);
  return ix == 0 || ix == nx_ || iy == 0 || iy == ny_;
}

int Mesh::boundary_node_count() const {
  if (dim_ == 1) return 2;
  return 2 * (nx_ + 1) + 2 * (ny_ + 1) - 4;
}

int Mesh::interior_node_count() const {
  return node_count() - boundary_node_count();
}

Mesh Mesh::refine(int factor) const {
  if (factor < 2) {
    throw std::invalid_argument("refine factor must be >= 2");
  }
  if (dim_ == 1) {
    return interval(ax_, bx_, nx_ * factor);
  }
  return rectangle(ax_, bx_, ay_, by_, nx_ * factor, ny_ * factor);
}

bool Mesh::operator==(const Mesh& o) const {
  return dim_ == o.dim_ && nx_ == o.nx_ && ny_ == o.ny_ && ax_ == o.ax_ &&
         bx_ == o.bx_ && ay_ == o.ay_ && by_ == o.by_;
}

std::string Mesh::describe() const {
  std::ostringstream s;
  if (dim_ == 1) {
    s << "interval(" << ax_ << "," << bx_ << ")x" << nx_;
  } else {
    s << "rectangle(" << ax_ << "," << bx_ << ")x(" << ay_ << "," << by_
      << ")x" << nx_ << "x" << ny_;
  }
  return s.str();
}

void require_same_mesh(const Mesh& a, const Mesh& b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string("mesh mismatch in ") + what);
  }
}

}  // namespace varexp
