#pragma once

#include "gkps/types.hpp"

namespace gkps {

// Chart partial derivatives of u(theta, phi) on S^2 in geodesic polar
// coordinates dtheta^2 + sin^2(theta) dphi^2.
struct Polar2Partials {
    double u_t = 0.0;
    double u_p = 0.0;
    double u_tt = 0.0;
    double u_tp = 0.0;
    double u_pp = 0.0;
};

// Jet of the ambient coordinate function x1 = cos(theta) in the geodesic
// polar orthonormal frame (e_1 radial).  Satisfies hess + value * I = 0.
FrameJet2 x1_jet(double theta, int m);

// Orthonormal-frame Hessian of a radial function on S^m:
// diag(ddu, du*cot(theta) x (m-1)).  At the pole du must vanish and the
// tangential entries take the limit value ddu.
FrameJet2 radial_hessian(double du, double ddu, double theta, int m);

// Orthonormal-frame gradient and Hessian on S^2 from chart partials.
FrameJet2 polar2d_hessian(const Polar2Partials& partials, double theta);

// Principal curvatures and Gauss-Kronecker curvature of the constant-u
// hypersurface: kappa = -e^{-c} (x m), e^{c} (x n), K = (-1)^m e^{(n-m)c}.
CliffordReference clifford_reference(int m, int n, double c);

// Point of S^m reached from the first-coordinate pole by the exponential map
// of the tangent vector with frame components z (|z| < pi).  Layout in
// R^{m+1}: pole = e_0, frame vector i maps to coordinate axis i+1.
Vec sphere_exp(const Vec& z);

}  // namespace gkps
