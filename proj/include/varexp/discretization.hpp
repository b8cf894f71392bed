#pragma once

#include <functional>

#include "varexp/grid_function.hpp"

namespace varexp {

/// Forward difference per cell in 1D; in 2D the per-cell average of the
/// edge differences along each axis. Exact on affine functions.
CellVectorField gradient(const GridFunction& u);

/// Cell-center values by arithmetic averaging of the cell's node values.
std::vector<double> cell_average(const GridFunction& u);

using ScalarFunction = std::function<double(double, double)>;

/// Nodal sampling of a closed-form function. Boundary nodes keep the
/// sampled value; callers zero them for Dirichlet test functions.
GridFunction interpolate(const ScalarFunction& f, const Mesh& mesh);

}  // namespace varexp
