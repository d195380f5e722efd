#include "gkps/abf.hpp"

#include <cmath>

#include "gkps/geometry.hpp"

namespace gkps {

double r0_threshold(const ProblemDims& dims) {
    if (dims.m <= dims.n)
        throw std::invalid_argument("r0_threshold: requires m > n (tau > 0)");
    const double tau = dims.tau();
    return 0.5 * std::log((tau / 3.0) / (1.0 - tau / 2.0));
}

double abf_phi(double theta, const AbfParams& params) {
    const double d = std::cos(theta) - params.E;
    if (!(d > 0.0)) throw std::invalid_argument("abf_phi: cos(theta) <= E");
    return -std::log(params.scale_f * d);
}

double abf_phi_d1(double theta, const AbfParams& params) {
    const double d = std::cos(theta) - params.E;
    if (!(d > 0.0)) throw std::invalid_argument("abf_phi_d1: cos(theta) <= E");
    return std::sin(theta) / d;
}

double abf_phi_d2(double theta, const AbfParams& params) {
    const double d = std::cos(theta) - params.E;
    if (!(d > 0.0)) throw std::invalid_argument("abf_phi_d2: cos(theta) <= E");
    return (1.0 - params.E * std::cos(theta)) / (d * d);
}

FrameJet2 phi_jet(double theta, const AbfParams& params, int m) {
    const double d = std::cos(theta) - params.E;
    if (!(d > 0.0)) throw std::invalid_argument("phi_jet: cos(theta) <= E");
    // phi_i = -(x1)_i/(x1-E); phi_ij = x1 d_ij/(x1-E) + (x1)_i (x1)_j/(x1-E)^2,
    // assembled through the radial closed forms so that the parametric family
    // and a generic RadialField carrying the same derivatives agree bitwise
    FrameJet2 j = radial_hessian(abf_phi_d1(theta, params), abf_phi_d2(theta, params), theta, m);
    j.value = -std::log(params.scale_f * d);
    return j;
}

ProductJet psi_jet(double theta, const AbfParams& params, const ProblemDims& dims) {
    const FrameJet2 pj = phi_jet(theta, params, dims.m);
    ProductJet j = ProductJet::zero(dims.m, dims.n);
    j.u = pj.value - params.A;
    j.grad_x = pj.grad;
    j.hess_xx = pj.hess;
    return j;
}

double abf_f_operator(double theta, const AbfParams& params, const ProblemDims& dims) {
    return f_operator(psi_jet(theta, params, dims), dims);
}

RadialField abf_field(const AbfParams& params) {
    RadialField f;
    f.u = [params](double t) { return abf_phi(t, params) - params.A; };
    f.du = [params](double t) { return abf_phi_d1(t, params); };
    f.ddu = [params](double t) { return abf_phi_d2(t, params); };
    return f;
}

namespace {

// Validation nodes: the nr solver nodes plus the 4x refined audit grid.
std::vector<double> validation_nodes(const GeodesicCap& cap, int nr, bool nodes_only) {
    std::vector<double> nodes;
    for (int k = 0; k < nr; ++k) nodes.push_back(cap.theta_max * k / (nr - 1));
    if (nodes_only) return nodes;
    const int na = 4 * (nr - 1) + 1;
    for (int k = 0; k < na; ++k) nodes.push_back(cap.theta_max * k / (na - 1));
    return nodes;
}

AbfCertificate certify(const std::function<ProductJet(double)>& jet_at,
                       const std::function<double(double)>& K_at,
                       const ProblemDims& dims, const GeodesicCap& cap, int nr,
                       bool nodes_only) {
    AbfCertificate cert;
    cert.r0 = r0_threshold(dims);
    cert.sup_psi = -1e300;
    cert.margin_pd = 1e300;
    cert.margin_sub = 1e300;
    for (double theta : validation_nodes(cap, nr, nodes_only)) {
        const ProductJet j = jet_at(theta);
        cert.sup_psi = std::max(cert.sup_psi, j.u);
        cert.margin_pd = std::min(cert.margin_pd, mu_matrix(j).min_eigenvalue());
        cert.margin_sub = std::min(cert.margin_sub, f_operator(j, dims) - K_at(theta));
    }
    return cert;
}

}  // namespace

AbfCertificate validate_abf(const AbfParams& params, const RadialKData& K,
                            const ProblemDims& dims, const GeodesicCap& cap, int nr) {
    params.validate(cap);
    // evaluated through psi_jet so subsolution-derived data compares along the
    // identical code path
    return certify([&](double t) { return psi_jet(t, params, dims); }, K.continuum, dims,
                   cap, nr, K.nodes_only);
}

AbfCertificate validate_abf(const RadialField& psi, const RadialKData& K,
                            const ProblemDims& dims, const GeodesicCap& cap, int nr) {
    auto jet_at = [&](double theta) {
        const double du = psi.du(theta);
        if (theta == 0.0 && du != 0.0)
            throw std::invalid_argument("validate_abf: radial field needs du(0) = 0");
        ProductJet j = ProductJet::zero(dims.m, dims.n);
        j.u = psi.u(theta);
        const FrameJet2 h = radial_hessian(du, psi.ddu(theta), theta, dims.m);
        j.grad_x = h.grad;
        j.hess_xx = h.hess;
        return j;
    };
    return certify(jet_at, K.continuum, dims, cap, nr, K.nodes_only);
}

AbfParams find_shift(const GeodesicCap& cap, const ProblemDims& dims, const RadialKData& K,
                     AbfParams params, int nr, double headroom, double a_cap) {
    dims.validate_solver();
    cap.validate();
    params.validate(cap);
    const double r0 = r0_threshold(dims);
    const double step = 1e-3;

    // phi is increasing on the cap, so sup psi = phi(theta_max) - A; A_min
    // enforces the r0 bound, and F(psi) is pointwise increasing in A beyond it.
    const double a_min = abf_phi(cap.theta_max, params) - r0;

    auto K_target = [&](double theta) { return (1.0 + headroom) * K.continuum(theta); };
    auto admissible = [&](double A) {
        AbfParams p = params;
        p.A = A;
        for (double theta : validation_nodes(cap, nr, K.nodes_only))
            if (abf_f_operator(theta, p, dims) < K_target(theta)) return false;
        return true;
    };

    double lo = std::ceil(a_min / step) * step;
    if (admissible(lo)) {
        params.A = lo;
        return params;
    }
    // doubling until admissible, then bisection down to the grid step
    double inc = step;
    double hi = lo + inc;
    while (!admissible(hi)) {
        inc *= 2.0;
        hi = lo + inc;
        if (hi > a_cap)
            throw std::runtime_error(
                "find_shift: no admissible shift below the cap; K is too large for "
                "this (E, scale_f)");
    }
    double bad = std::max(lo, hi - inc / 2.0);
    while (hi - bad > step) {
        const double mid = 0.5 * (bad + hi);
        (admissible(mid) ? hi : bad) = mid;
    }
    params.A = std::ceil(hi / step) * step;
    while (!admissible(params.A)) {  // guard the grid rounding
        params.A += step;
        if (params.A > a_cap) throw std::runtime_error("find_shift: shift cap exceeded");
    }
    return params;
}

}  // namespace gkps
