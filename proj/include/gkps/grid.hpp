#pragma once

#include "gkps/geometry.hpp"
#include "gkps/types.hpp"

namespace gkps {

// Uniform grid on [0, theta_max]: node 0 is the pole, node nr-1 carries the
// Dirichlet value.  Unknowns are nodes 0..nr-2.
struct RadialGrid {
    GeodesicCap cap;
    int nr = 129;

    double h() const { return cap.theta_max / (nr - 1); }
    double theta(int k) const { return cap.theta_max * k / (nr - 1); }
    int nodes() const { return nr; }
    int unknowns() const { return nr - 1; }

    void validate() const {
        cap.validate();
        if (nr < 5) throw std::invalid_argument("RadialGrid: need nr >= 5");
    }
};

// Polar grid on the cap of S^2: a single pole node plus nr-1 uniform rings of
// nphi nodes; the outermost ring carries the Dirichlet value.  phi is
// periodic; nphi must be even (the pole stencil pairs antipodal rays).
struct PolarGrid2D {
    GeodesicCap cap;
    int nr = 65;
    int nphi = 128;

    double h() const { return cap.theta_max / (nr - 1); }
    double hphi() const { return 2.0 * 3.14159265358979323846 / nphi; }
    double theta(int j) const { return cap.theta_max * j / (nr - 1); }
    double phi(int i) const { return hphi() * i; }
    int nodes() const { return 1 + (nr - 1) * nphi; }
    int unknowns() const { return 1 + (nr - 2) * nphi; }
    // j in 1..nr-1, i wrapped mod nphi; the pole is node 0
    int node_id(int j, int i) const {
        const int iw = ((i % nphi) + nphi) % nphi;
        return 1 + (j - 1) * nphi + iw;
    }

    void validate() const {
        cap.validate();
        if (cap.m != 2) throw std::invalid_argument("PolarGrid2D: cap must live on S^2");
        if (nr < 5) throw std::invalid_argument("PolarGrid2D: need nr >= 5");
        if (nphi < 8 || nphi % 2 != 0)
            throw std::invalid_argument("PolarGrid2D: need even nphi >= 8");
    }
};

// Nodal scalar fields are plain vectors of length grid.nodes().
using DiscreteField = Vec;

// Radial derivatives at a node: centered stencils inside, the symmetric-ghost
// limit at the pole, one-sided second-order at the Dirichlet ring.
struct RadialDeriv {
    double u = 0.0;
    double du = 0.0;
    double ddu = 0.0;
};
RadialDeriv radial_node_deriv(const RadialGrid& grid, const Vec& values, int k);
ProductJet radial_node_jet(const RadialGrid& grid, const Vec& values, int k,
                           const ProblemDims& dims);

// Chart partials at a 2D node (rings only; the pole is handled separately).
Polar2Partials polar_node_partials(const PolarGrid2D& grid, const Vec& values, int j, int i);

// Frame gradient and Hessian at the pole, recovered from the first ring by
// pairing antipodal rays and projecting onto the low angular modes.
struct PoleJet {
    double u = 0.0;
    double gx = 0.0, gy = 0.0;
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;
};
PoleJet polar_pole_jet(const PolarGrid2D& grid, const Vec& values);

ProductJet polar_node_jet(const PolarGrid2D& grid, const Vec& values, int node,
                          const ProblemDims& dims);

// Smallest eigenvalue of the full M(u) at every node; the global minimum and
// per-node convexity flags.
struct PdScan {
    double min_eig_M = 0.0;
    Vec node_min_eig;
    std::vector<bool> convex;
};
PdScan pd_scan(const RadialGrid& grid, const Vec& values, const ProblemDims& dims,
               double tol = 1e-10);
PdScan pd_scan(const PolarGrid2D& grid, const Vec& values, const ProblemDims& dims,
               double tol = 1e-10);

// Discrete curvature operator det M_h(u) / f_h(u)^{(m+n+2)/2} at every node.
Vec discrete_f_operator(const RadialGrid& grid, const Vec& values, const ProblemDims& dims);
Vec discrete_f_operator(const PolarGrid2D& grid, const Vec& values, const ProblemDims& dims);

}  // namespace gkps
