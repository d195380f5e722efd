#include "gkps/geometry.hpp"

#include <cmath>

namespace gkps {

FrameJet2 x1_jet(double theta, int m) {
    if (!(theta >= 0.0 && theta < 1.5707963267948966))
        throw std::invalid_argument("x1_jet: need 0 <= theta < pi/2");
    FrameJet2 j;
    j.value = std::cos(theta);
    j.grad = Vec::Zero(m);
    j.grad(0) = -std::sin(theta);
    j.hess = -std::cos(theta) * Mat::Identity(m, m);
    return j;
}

FrameJet2 radial_hessian(double du, double ddu, double theta, int m) {
    if (!(theta >= 0.0 && theta < 1.5707963267948966))
        throw std::invalid_argument("radial_hessian: need 0 <= theta < pi/2");
    FrameJet2 j;
    j.grad = Vec::Zero(m);
    j.hess = Mat::Zero(m, m);
    if (theta == 0.0) {
        if (du != 0.0)
            throw std::invalid_argument("radial_hessian: du must vanish at the pole");
        // limit du*cot(theta) -> ddu for a smooth radial function
        j.hess = ddu * Mat::Identity(m, m);
        return j;
    }
    j.grad(0) = du;
    j.hess(0, 0) = ddu;
    const double tangential = du / std::tan(theta);
    for (int i = 1; i < m; ++i) j.hess(i, i) = tangential;
    return j;
}

FrameJet2 polar2d_hessian(const Polar2Partials& d, double theta) {
    if (!(theta > 0.0 && theta < 3.141592653589793))
        throw std::invalid_argument("polar2d_hessian: need 0 < theta < pi");
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double cot = ct / st;
    FrameJet2 j;
    j.grad = Vec::Zero(2);
    j.grad(0) = d.u_t;
    j.grad(1) = d.u_p / st;
    j.hess = Mat::Zero(2, 2);
    j.hess(0, 0) = d.u_tt;
    j.hess(0, 1) = (d.u_tp - cot * d.u_p) / st;
    j.hess(1, 0) = j.hess(0, 1);
    j.hess(1, 1) = d.u_pp / (st * st) + cot * d.u_t;
    return j;
}

CliffordReference clifford_reference(int m, int n, double c) {
    if (m < 1 || n < 1) throw std::invalid_argument("clifford_reference: need m, n >= 1");
    CliffordReference r;
    r.m = m;
    r.n = n;
    r.c = c;
    r.kappa_x = -std::exp(-c);
    r.kappa_y = std::exp(c);
    r.K = (m % 2 == 0 ? 1.0 : -1.0) * std::exp((n - m) * c);
    return r;
}

Vec sphere_exp(const Vec& z) {
    const int m = static_cast<int>(z.size());
    const double r = z.norm();
    Vec p = Vec::Zero(m + 1);
    // sin(r)/r with a series fallback near the pole
    const double sinc = r > 1e-8 ? std::sin(r) / r : 1.0 - r * r / 6.0;
    p(0) = std::cos(r);
    for (int i = 0; i < m; ++i) p(i + 1) = sinc * z(i);
    return p;
}

}  // namespace gkps
