#pragma once

#include <cmath>
#include <functional>

#include "gkps/kernel.hpp"
#include "gkps/types.hpp"

namespace gkps {

// Parameters of the explicit boundary-function family
//   psi = -ln(scale_f * (cos(theta) - E)) - A.
// E is the hemisphere margin (0 < E < cos theta_max), scale_f the positive
// multiplicative constant, A the downward shift.
struct AbfParams {
    double E = 0.25;
    double scale_f = 1.0;
    double A = 0.0;

    void validate(const GeodesicCap& cap) const {
        if (!(scale_f > 0.0)) throw std::invalid_argument("AbfParams: scale_f must be > 0");
        if (!(E > 0.0 && E < std::cos(cap.theta_max)))
            throw std::invalid_argument("AbfParams: need 0 < E < cos(theta_max)");
    }
};

// Validation record of an admissible boundary function: sup psi against the
// threshold r0, the positive-definiteness margin of M(psi), and the
// subsolution margin F(psi) - K, over the validation grid.
struct AbfCertificate {
    double r0 = 0.0;
    double sup_psi = 0.0;
    double margin_pd = 0.0;
    double margin_sub = 0.0;

    bool valid() const { return sup_psi <= r0 && margin_pd > 0.0 && margin_sub >= 0.0; }
};

// Curvature data restricted to a radial profile: samples at the solver nodes
// plus a continuum evaluator for the refined audit grid.  For data on the
// full cap the profile carries the azimuthal maximum per ring.
struct RadialKData {
    Vec grid_values;
    std::function<double(double)> continuum;
    // tabulated data carries no information between its nodes; skip the
    // refined audit for it
    bool nodes_only = false;
};

// r0 = (1/2) ln((tau/3)/(1 - tau/2)); the admissible upper bound on psi that
// keeps f_r buffered away from zero along the whole solve.
double r0_threshold(const ProblemDims& dims);

double abf_phi(double theta, const AbfParams& params);
double abf_phi_d1(double theta, const AbfParams& params);
double abf_phi_d2(double theta, const AbfParams& params);
inline double abf_psi(double theta, const AbfParams& params) {
    return abf_phi(theta, params) - params.A;
}

// Value and covariant derivatives of phi in the geodesic polar frame.
FrameJet2 phi_jet(double theta, const AbfParams& params, int m);

// Full product jet of psi = phi - A (flat in the y-factor).
ProductJet psi_jet(double theta, const AbfParams& params, const ProblemDims& dims);

// Closed-form F(psi) for the radial family.
double abf_f_operator(double theta, const AbfParams& params, const ProblemDims& dims);

// Radial field given by callables u, u', u''.
struct RadialField {
    std::function<double(double)> u;
    std::function<double(double)> du;
    std::function<double(double)> ddu;
};
RadialField abf_field(const AbfParams& params);

// Smallest shift A on a 1e-3 grid such that psi = phi - A satisfies
// sup psi <= r0 and F(psi) >= (1 + headroom) * K pointwise on the validation
// grid: the nr solver nodes plus a 4x refined audit grid.  Throws when no
// A <= a_cap works (K too large for this E and scale_f).
AbfParams find_shift(const GeodesicCap& cap, const ProblemDims& dims, const RadialKData& K,
                     AbfParams params, int nr, double headroom = 0.0, double a_cap = 1e3);

// Certificate for the parametric family over the same validation grid.
AbfCertificate validate_abf(const AbfParams& params, const RadialKData& K,
                            const ProblemDims& dims, const GeodesicCap& cap, int nr);

// Certificate for an arbitrary radial field.
AbfCertificate validate_abf(const RadialField& psi, const RadialKData& K,
                            const ProblemDims& dims, const GeodesicCap& cap, int nr);

}  // namespace gkps
