#include "gkps/kernel.hpp"

#include <cmath>

namespace gkps {

namespace {

double clamp_r(double r) { return std::min(50.0, std::max(-50.0, r)); }

void check_pq(double p, double q, const char* who) {
    if (p < 0.0 || q < 0.0)
        throw std::invalid_argument(std::string(who) + ": p and q are squared norms, need >= 0");
}

}  // namespace

double f_eval(double r, double p, double q, const ProblemDims& dims) {
    check_pq(p, q, "f_eval");
    r = clamp_r(r);
    const double e2r = std::exp(2.0 * r);
    return std::exp(dims.tau() * r) * (1.0 + p / (1.0 + e2r) + e2r * q / (1.0 + e2r));
}

double f_r_eval(double r, double p, double q, const ProblemDims& dims) {
    check_pq(p, q, "f_r_eval");
    r = clamp_r(r);
    const double tau = dims.tau();
    const double e2r = std::exp(2.0 * r);
    const double d = 1.0 + e2r;
    return std::exp(tau * r) *
           (tau + (tau * d - 2.0 * e2r) * p / (d * d) + tau * e2r * q / d +
            2.0 * e2r * q / (d * d));
}

double f_p_eval(double r, const ProblemDims& dims) {
    r = clamp_r(r);
    return std::exp(dims.tau() * r) / (1.0 + std::exp(2.0 * r));
}

double f_q_eval(double r, const ProblemDims& dims) {
    r = clamp_r(r);
    const double e2r = std::exp(2.0 * r);
    return std::exp(dims.tau() * r) * e2r / (1.0 + e2r);
}

MuMatrix mu_matrix(const ProductJet& jet) {
    jet.validate();
    const int m = jet.m, n = jet.n;
    MuMatrix M;
    M.m = m;
    M.n = n;
    M.full = Mat::Zero(m + n, m + n);
    M.full.block(0, 0, m, m) =
        jet.hess_xx - jet.grad_x * jet.grad_x.transpose() - Mat::Identity(m, m);
    M.full.block(0, m, m, n) = jet.hess_xy;
    M.full.block(m, 0, n, m) = jet.hess_xy.transpose();
    M.full.block(m, m, n, n) =
        jet.hess_yy + jet.grad_y * jet.grad_y.transpose() + Mat::Identity(n, n);
    return M;
}

double curvature_k(const ProductJet& jet, const ProblemDims& dims) {
    const double u = clamp_r(jet.u);
    const double e2u = std::exp(2.0 * u);
    const double w = 1.0 + (jet.p() + e2u * jet.q()) / (1.0 + e2u);
    return std::exp((dims.n - dims.m) * u) * mu_matrix(jet).det() /
           std::pow(w, dims.s_exp());
}

double f_operator(const ProductJet& jet, const ProblemDims& dims) {
    const double f = f_eval(jet.u, jet.p(), jet.q(), dims);
    return std::pow(f, -dims.s_exp()) * mu_matrix(jet).det();
}

Vec embed_point(const Vec& gamma, const Vec& rho, double u) {
    if (std::abs(gamma.norm() - 1.0) > 1e-12 || std::abs(rho.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("embed_point: gamma and rho must be unit vectors");
    u = clamp_r(u);
    const double cx = 1.0 / std::sqrt(1.0 + std::exp(-2.0 * u));
    const double cy = 1.0 / std::sqrt(1.0 + std::exp(2.0 * u));
    Vec X(gamma.size() + rho.size());
    X.head(gamma.size()) = cx * gamma;
    X.tail(rho.size()) = cy * rho;
    return X;
}

GeomSample second_fundamental(const ProductJet& jet, const ProblemDims& dims) {
    jet.validate();
    const int m = dims.m, n = dims.n, d = m + n;
    const double u = clamp_r(jet.u);
    const double eu = std::exp(u);
    const double e2u = eu * eu;
    const double p = jet.p(), q = jet.q();

    // canonical base point: gamma, rho at the first-coordinate poles; the
    // frame vector e_A spans ambient axis A+1 of its factor
    Vec gamma = Vec::Zero(m + 1);
    gamma(0) = 1.0;
    Vec rho = Vec::Zero(n + 1);
    rho(0) = 1.0;
    auto frame_x = [&](int i) {
        Vec v = Vec::Zero(m + n + 2);
        v(i + 1) = 1.0;
        return v;
    };
    auto frame_y = [&](int a) {
        Vec v = Vec::Zero(m + n + 2);
        v(m + 1 + a + 1) = 1.0;
        return v;
    };
    Vec gamma_amb = Vec::Zero(m + n + 2);
    gamma_amb(0) = 1.0;
    Vec rho_amb = Vec::Zero(m + n + 2);
    rho_amb(m + 1) = 1.0;

    GeomSample gs;
    gs.X = embed_point(gamma, rho, u);

    // tangent vectors X_A
    gs.tangents = Mat::Zero(d + 2, d);
    const double c32 = std::pow(1.0 + e2u, -1.5);
    for (int i = 0; i < m; ++i)
        gs.tangents.col(i) = c32 * (eu * jet.grad_x(i) * gamma_amb +
                                    eu * (1.0 + e2u) * frame_x(i) -
                                    e2u * jet.grad_x(i) * rho_amb);
    for (int a = 0; a < n; ++a)
        gs.tangents.col(m + a) = c32 * (eu * jet.grad_y(a) * gamma_amb +
                                        (1.0 + e2u) * frame_y(a) -
                                        e2u * jet.grad_y(a) * rho_amb);

    // induced metric
    gs.g = Mat::Zero(d, d);
    const double cg = e2u / ((1.0 + e2u) * (1.0 + e2u));
    Vec grad(d);
    grad.head(m) = jet.grad_x;
    grad.tail(n) = jet.grad_y;
    gs.g = cg * (grad * grad.transpose());
    gs.g.block(0, 0, m, m) += cg * (1.0 + e2u) * Mat::Identity(m, m);
    gs.g.block(m, m, n, n) += cg * (1.0 + std::exp(-2.0 * u)) * Mat::Identity(n, n);

    // unit normal
    const double wn = 1.0 + e2u + p + e2u * q;
    Vec num = -gamma_amb + eu * rho_amb;
    for (int i = 0; i < m; ++i) num += jet.grad_x(i) * frame_x(i);
    for (int a = 0; a < n; ++a) num += eu * jet.grad_y(a) * frame_y(a);
    gs.normal = -num / std::sqrt(wn);

    // second fundamental form and curvature
    const MuMatrix M = mu_matrix(jet);
    gs.h = eu / std::sqrt((1.0 + e2u) * wn) * M.full;
    gs.K = Eigen::PartialPivLU<Mat>(gs.h).determinant() /
           Eigen::PartialPivLU<Mat>(gs.g).determinant();
    return gs;
}

double det_g_formula(double u, double p, double q, const ProblemDims& dims) {
    u = clamp_r(u);
    const double e2u = std::exp(2.0 * u);
    return std::exp(2.0 * dims.m * u) / std::pow(1.0 + e2u, dims.m + dims.n) *
           (1.0 + (p + e2u * q) / (1.0 + e2u));
}

namespace {

// Householder-style rotation mapping v to (|v|, 0, ..., 0).
Mat align_first_axis(const Vec& v) {
    const int k = static_cast<int>(v.size());
    Mat R = Mat::Identity(k, k);
    const double nv = v.norm();
    if (nv < 1e-300) return R;
    Vec w = v / nv;
    Vec e1 = Vec::Zero(k);
    e1(0) = 1.0;
    Vec d = w - e1;
    const double dn = d.squaredNorm();
    if (dn < 1e-30) return R;
    R -= 2.0 / dn * (d * d.transpose());
    return R;  // reflection; orthogonal, R*w = e1
}

}  // namespace

ProductJet rotate_to_special_frame(const ProductJet& jet) {
    const Mat Rx = align_first_axis(jet.grad_x);
    const Mat Ry = align_first_axis(jet.grad_y);
    ProductJet r = jet;
    r.grad_x = Rx * jet.grad_x;
    r.grad_y = Ry * jet.grad_y;
    r.hess_xx = Rx * jet.hess_xx * Rx.transpose();
    r.hess_xy = Rx * jet.hess_xy * Ry.transpose();
    r.hess_yy = Ry * jet.hess_yy * Ry.transpose();
    return r;
}

LinearizationCoeffs linearization_coeffs(const ProductJet& jet, const ProblemDims& dims) {
    const int m = dims.m, n = dims.n;
    const MuMatrix M = mu_matrix(jet);
    const Mat Minv = M.inverse();
    const double detM = M.det();
    const double s = dims.s_exp();
    const double f = f_eval(jet.u, jet.p(), jet.q(), dims);
    const double fm = std::pow(f, -s) * detM;        // F(u)
    const double fm1 = std::pow(f, -s - 1.0) * detM;

    LinearizationCoeffs lc;
    lc.second_order = fm * Minv;
    lc.first_order = Vec::Zero(m + n);
    lc.first_order.head(m) = -2.0 * fm * (Minv.block(0, 0, m, m) * jet.grad_x) -
                             s * fm1 * 2.0 * f_p_eval(jet.u, dims) * jet.grad_x;
    lc.first_order.tail(n) = 2.0 * fm * (Minv.block(m, m, n, n) * jet.grad_y) -
                             s * fm1 * 2.0 * f_q_eval(jet.u, dims) * jet.grad_y;
    lc.zeroth_order = -s * fm1 * f_r_eval(jet.u, jet.p(), jet.q(), dims);
    return lc;
}

double apply_linearization(const LinearizationCoeffs& lc, const ProductJet& v) {
    const int m = v.m, n = v.n;
    Mat vh(m + n, m + n);
    vh.block(0, 0, m, m) = v.hess_xx;
    vh.block(0, m, m, n) = v.hess_xy;
    vh.block(m, 0, n, m) = v.hess_xy.transpose();
    vh.block(m, m, n, n) = v.hess_yy;
    Vec vg(m + n);
    vg.head(m) = v.grad_x;
    vg.tail(n) = v.grad_y;
    return (lc.second_order.array() * vh.array()).sum() + lc.first_order.dot(vg) +
           lc.zeroth_order * v.u;
}

}  // namespace gkps
