#pragma once

#include "gkps/types.hpp"

namespace gkps {

// Coefficient fields of the linearization DF(u)v: the second-order matrix
// multiplies v_AB, first_order the frame gradient (v_i, v_a), zeroth_order v.
struct LinearizationCoeffs {
    Mat second_order;
    Vec first_order;
    double zeroth_order = 0.0;
};

// Gradient-weight function f(r, p, q) = e^{tau r}(1 + p/(1+e^{2r}) + e^{2r} q/(1+e^{2r}))
// with p = |grad_x u|^2, q = |grad_y u|^2.  r is clamped to |r| <= 50 before
// exponentiation (e^{2r} overflows, and the theory keeps u far inside).
double f_eval(double r, double p, double q, const ProblemDims& dims);
double f_r_eval(double r, double p, double q, const ProblemDims& dims);
double f_p_eval(double r, const ProblemDims& dims);
double f_q_eval(double r, const ProblemDims& dims);

MuMatrix mu_matrix(const ProductJet& jet);

// Gauss-Kronecker curvature of the embedded hypersurface:
//   K = e^{(n-m)u} det M(u) / (1 + (p + e^{2u} q)/(1 + e^{2u}))^{(m+n+2)/2}.
double curvature_k(const ProductJet& jet, const ProblemDims& dims);

// The curvature operator F(u) = f(u,p,q)^{-(m+n+2)/2} det M(u).  Equal to
// curvature_k; evaluated through f on purpose so the two routes cross-check.
double f_operator(const ProductJet& jet, const ProblemDims& dims);

// Embedding of S^m x S^n into S^{m+n+1}.
Vec embed_point(const Vec& gamma, const Vec& rho, double u);

// Metric, normal and second fundamental form at the canonical base point
// (gamma, rho at the first-coordinate poles, frames along coordinate axes).
GeomSample second_fundamental(const ProductJet& jet, const ProblemDims& dims);

// det(g) in the special frame where the factor gradients align with the
// first frame vectors; a function of (u, p, q) only.
double det_g_formula(double u, double p, double q, const ProblemDims& dims);

// In-plane rotation taking grad_x to (|grad_x|, 0, ...) and grad_y to
// (|grad_y|, 0, ...), with the Hessian blocks conjugated accordingly.
ProductJet rotate_to_special_frame(const ProductJet& jet);

LinearizationCoeffs linearization_coeffs(const ProductJet& jet, const ProblemDims& dims);

// DF(u)v for a direction given as a jet at the same point.
double apply_linearization(const LinearizationCoeffs& lc, const ProductJet& v);

}  // namespace gkps
