#pragma once

#include <functional>
#include <random>

#include "gkps/abf.hpp"
#include "gkps/grid.hpp"

namespace gkps {

// Extrinsic finite-difference recomputation of K against the closed form.
struct OracleReport {
    double K_analytic = 0.0;
    double K_extrinsic = 0.0;
    double rel_error = 0.0;
    double fd_step = 0.0;
    double convergence_ratio = 0.0;  // rel_error(step) / rel_error(step/2)
    double norm_defect = 0.0;        // max | |X| - 1 | over the stencil
    double tangent_defect = 0.0;     // max |<normal, X_A>| at the center
};

// Parametrized neighborhood of a point of the hypersurface: factor points and
// the scalar field as functions of chart coordinates z = (z_x, z_y).
struct EmbeddedPatch {
    int m = 0;
    int n = 0;
    std::function<Vec(const Vec&)> gamma;  // z_x -> unit vector in R^{m+1}
    std::function<Vec(const Vec&)> rho;    // z_y -> unit vector in R^{n+1}
    std::function<double(const Vec&)> u;   // full z -> value
};

// Normal-coordinate patch realizing a prescribed frame jet at its center.
EmbeddedPatch normal_patch(const ProductJet& jet);

// Geodesic polar product chart on S^2 x S^1 around (theta0, phi0, y0).
EmbeddedPatch s2s1_patch(const std::function<double(double, double, double)>& u,
                         double theta0, double phi0, double y0);

// Differences the embedding for tangents and the metric, takes the normal as
// the orthonormal complement of span{X, X_A} (sign matched to the closed-form
// normal direction), differences the normal for h, and compares det h/det g
// against K_analytic at fd_step and fd_step/2.
OracleReport extrinsic_oracle(const EmbeddedPatch& patch, double K_analytic, double fd_step);
OracleReport extrinsic_oracle(const ProductJet& jet, const ProblemDims& dims, double fd_step);

// Comparison-lemma checker with g = f^{(m+n+2)/2}: under M(u), M(v) > 0,
// u, v <= r0 and G(u) <= G(v), one of
//   v - sup_boundary(v - u) <= u   or   v <= u
// must hold pointwise.
struct ComparisonVerdict {
    bool precondition_ok = false;
    std::string precondition_failure;
    double boundary_shift = 0.0;     // sup over boundary nodes of v - u
    double margin_shifted = 0.0;     // min over nodes of u - (v - boundary_shift)
    double margin_plain = 0.0;       // min over nodes of u - v
    bool branch_shifted = false;
    bool branch_plain = false;

    bool some_branch() const { return precondition_ok && (branch_shifted || branch_plain); }
};
ComparisonVerdict comparison_check(const RadialGrid& grid, const Vec& u_full, const Vec& v_full,
                                   const ProblemDims& dims, double r0, double tol = 1e-10);
ComparisonVerdict comparison_check(const PolarGrid2D& grid, const Vec& u_full, const Vec& v_full,
                                   const ProblemDims& dims, double r0, double tol = 1e-10);

// Global obstruction probe on a boundary-free S^2 x S^1 sample grid: at the
// discrete maximum of u the xx-block of M(u) must stay below -1 + O(h^2).
struct ObstructionReport {
    double max_value = 0.0;
    Vec argmax_gamma;  // in R^3
    double argmax_y = 0.0;
    double largest_xx_eigenvalue = 0.0;
    double gradient_norm = 0.0;
};
using GlobalField = std::function<double(const Vec&, double)>;  // (gamma, y) -> u
ObstructionReport global_obstruction_demo(const GlobalField& u, int n_theta, int n_phi,
                                          int n_y);

// Low-frequency random field on S^2 x S^1: spherical harmonics of degree <= 2
// times the first circle modes, scaled to the given amplitude.
GlobalField random_low_frequency_field(std::mt19937_64& rng, double amplitude);

// Tangential second-derivative identity at the Dirichlet ring,
//   u_;TT - psi_;TT = cot(theta_max) d_theta(u - psi),
// with the left side extrapolated from interior nodes and the right side from
// the one-sided boundary derivative.  h_sign_ratio reports the implied second
// fundamental form of the ring relative to +cot(theta_max) (empirically -1).
struct BoundaryIdentityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;
    double h_sign_ratio = 0.0;
};
BoundaryIdentityReport boundary_identity_check(const RadialGrid& grid, const Vec& u_full,
                                               const AbfParams& abf, const ProblemDims& dims);

// Manufactured problem: K := F(u*) nodewise and the boundary value of u*.
// Rejects fields that are not convex or exceed r0 on the validation grid.
struct ManufacturedProblem {
    Vec K;  // per unknown node
    double psi_boundary = 0.0;
};
ManufacturedProblem manufacture_problem(const RadialField& u_star, const ProblemDims& dims,
                                        const GeodesicCap& cap, int nr);

// Analytic jet of a radial field at one point.
ProductJet radial_field_jet(const RadialField& fld, double theta, const ProblemDims& dims);

}  // namespace gkps
