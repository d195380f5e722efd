#pragma once

#include <Eigen/Sparse>

#include "gkps/grid.hpp"

namespace gkps {

using SparseMat = Eigen::SparseMatrix<double>;

// Residual and exact Jacobian of det M_h(u) - K f_h(u)^{(m+n+2)/2} = 0 over
// the unknown nodes (pole + interior; the Dirichlet ring is eliminated).
// min_eig_M scans every node of the full field, boundary included.
struct AssemblyOutput {
    Vec residual;
    SparseMat jacobian;
    double min_eig_M = 0.0;
};

// values carries all grid.nodes() entries with the Dirichlet data already
// written into the boundary slot(s); K is indexed like the unknowns.
AssemblyOutput radial_residual(const RadialGrid& grid, const Vec& values, const Vec& K,
                               const ProblemDims& dims);
AssemblyOutput radial_jacobian(const RadialGrid& grid, const Vec& values, const Vec& K,
                               const ProblemDims& dims);
AssemblyOutput grid2d_assemble(const PolarGrid2D& grid, const Vec& values, const Vec& K,
                               const ProblemDims& dims, bool want_jacobian = true);

// Full field vector from unknowns plus the Dirichlet boundary value.
Vec with_boundary(const RadialGrid& grid, const Vec& unknowns, double boundary_value);
Vec with_boundary(const PolarGrid2D& grid, const Vec& unknowns, double boundary_value);

}  // namespace gkps
