#include "gkps/grid.hpp"

#include <cmath>

#include "gkps/kernel.hpp"
#include "gkps/parallel.hpp"

namespace gkps {

RadialDeriv radial_node_deriv(const RadialGrid& grid, const Vec& values, int k) {
    if (values.size() != grid.nodes())
        throw std::invalid_argument("radial_node_deriv: field/grid size mismatch");
    const double h = grid.h();
    const Vec& v = values;
    RadialDeriv d;
    d.u = v(k);
    if (k == 0) {
        // ghost-node symmetry u(-h) = u(h)
        d.du = 0.0;
        d.ddu = 2.0 * (v(1) - v(0)) / (h * h);
    } else if (k == grid.nr - 1) {
        d.du = (3.0 * v(k) - 4.0 * v(k - 1) + v(k - 2)) / (2.0 * h);
        d.ddu = (2.0 * v(k) - 5.0 * v(k - 1) + 4.0 * v(k - 2) - v(k - 3)) / (h * h);
    } else {
        d.du = (v(k + 1) - v(k - 1)) / (2.0 * h);
        d.ddu = (v(k + 1) - 2.0 * v(k) + v(k - 1)) / (h * h);
    }
    return d;
}

ProductJet radial_node_jet(const RadialGrid& grid, const Vec& values, int k,
                           const ProblemDims& dims) {
    const RadialDeriv d = radial_node_deriv(grid, values, k);
    ProductJet j = ProductJet::zero(dims.m, dims.n);
    j.u = d.u;
    const FrameJet2 fj = radial_hessian(d.du, d.ddu, grid.theta(k), dims.m);
    j.grad_x = fj.grad;
    j.hess_xx = fj.hess;
    return j;
}

Polar2Partials polar_node_partials(const PolarGrid2D& grid, const Vec& values, int j, int i) {
    if (values.size() != grid.nodes())
        throw std::invalid_argument("polar_node_partials: field/grid size mismatch");
    if (j < 1 || j > grid.nr - 1)
        throw std::invalid_argument("polar_node_partials: ring index out of range");
    const double h = grid.h();
    const double hp = grid.hphi();
    // the pole value is phi-independent
    auto val = [&](int jj, int ii) {
        return jj == 0 ? values(0) : values(grid.node_id(jj, ii));
    };
    Polar2Partials d;
    const double up_c = (val(j, i + 1) - val(j, i - 1)) / (2.0 * hp);
    d.u_p = up_c;
    d.u_pp = (val(j, i + 1) - 2.0 * val(j, i) + val(j, i - 1)) / (hp * hp);
    if (j == grid.nr - 1) {
        d.u_t = (3.0 * val(j, i) - 4.0 * val(j - 1, i) + val(j - 2, i)) / (2.0 * h);
        d.u_tt = (2.0 * val(j, i) - 5.0 * val(j - 1, i) + 4.0 * val(j - 2, i) -
                  val(j - 3, i)) /
                 (h * h);
        auto up_at = [&](int jj) {
            return (val(jj, i + 1) - val(jj, i - 1)) / (2.0 * hp);
        };
        d.u_tp = (3.0 * up_at(j) - 4.0 * up_at(j - 1) + up_at(j - 2)) / (2.0 * h);
    } else {
        d.u_t = (val(j + 1, i) - val(j - 1, i)) / (2.0 * h);
        d.u_tt = (val(j + 1, i) - 2.0 * val(j, i) + val(j - 1, i)) / (h * h);
        d.u_tp = (val(j + 1, i + 1) - val(j + 1, i - 1) - val(j - 1, i + 1) +
                  val(j - 1, i - 1)) /
                 (4.0 * h * hp);
    }
    return d;
}

PoleJet polar_pole_jet(const PolarGrid2D& grid, const Vec& values) {
    if (values.size() != grid.nodes())
        throw std::invalid_argument("polar_pole_jet: field/grid size mismatch");
    const int N = grid.nphi;
    const double h = grid.h();
    PoleJet p;
    p.u = values(0);
    // second differences along antipodal ray pairs give the directional second
    // derivatives D(phi_i); first angular modes give the gradient, the 2phi
    // modes the Hessian
    double c0 = 0.0, c2 = 0.0, s2 = 0.0, gx = 0.0, gy = 0.0;
    for (int i = 0; i < N; ++i) {
        const double vi = values(grid.node_id(1, i));
        const double vo = values(grid.node_id(1, i + N / 2));
        const double D = (vi + vo - 2.0 * values(0)) / (h * h);
        const double D1 = (vi - vo) / (2.0 * h);
        const double ph = grid.phi(i);
        c0 += D;
        c2 += D * std::cos(2.0 * ph);
        s2 += D * std::sin(2.0 * ph);
        gx += D1 * std::cos(ph);
        gy += D1 * std::sin(ph);
    }
    c0 /= N;
    c2 *= 2.0 / N;
    s2 *= 2.0 / N;
    p.gx = 2.0 * gx / N;
    p.gy = 2.0 * gy / N;
    p.h11 = c0 + c2;
    p.h22 = c0 - c2;
    p.h12 = s2;
    return p;
}

ProductJet polar_node_jet(const PolarGrid2D& grid, const Vec& values, int node,
                          const ProblemDims& dims) {
    ProductJet j = ProductJet::zero(2, dims.n);
    if (node == 0) {
        const PoleJet p = polar_pole_jet(grid, values);
        j.u = p.u;
        j.grad_x << p.gx, p.gy;
        j.hess_xx << p.h11, p.h12, p.h12, p.h22;
        return j;
    }
    const int jj = 1 + (node - 1) / grid.nphi;
    const int ii = (node - 1) % grid.nphi;
    const Polar2Partials d = polar_node_partials(grid, values, jj, ii);
    const FrameJet2 fj = polar2d_hessian(d, grid.theta(jj));
    j.u = values(node);
    j.grad_x = fj.grad;
    j.hess_xx = fj.hess;
    return j;
}

namespace {

template <class JetAt>
PdScan scan_nodes(int nodes, const JetAt& jet_at, double tol) {
    PdScan s;
    s.node_min_eig = Vec::Zero(nodes);
    s.convex.assign(nodes, false);
    parallel_for(nodes, [&](int k) { s.node_min_eig(k) = mu_matrix(jet_at(k)).min_eigenvalue(); });
    for (int k = 0; k < nodes; ++k) s.convex[k] = s.node_min_eig(k) > tol;
    s.min_eig_M = s.node_min_eig.minCoeff();
    return s;
}

template <class JetAt>
Vec f_op_nodes(int nodes, const JetAt& jet_at, const ProblemDims& dims) {
    Vec out = Vec::Zero(nodes);
    parallel_for(nodes, [&](int k) { out(k) = f_operator(jet_at(k), dims); });
    return out;
}

}  // namespace

PdScan pd_scan(const RadialGrid& grid, const Vec& values, const ProblemDims& dims,
               double tol) {
    return scan_nodes(
        grid.nodes(), [&](int k) { return radial_node_jet(grid, values, k, dims); }, tol);
}

PdScan pd_scan(const PolarGrid2D& grid, const Vec& values, const ProblemDims& dims,
               double tol) {
    return scan_nodes(
        grid.nodes(), [&](int k) { return polar_node_jet(grid, values, k, dims); }, tol);
}

Vec discrete_f_operator(const RadialGrid& grid, const Vec& values, const ProblemDims& dims) {
    return f_op_nodes(
        grid.nodes(), [&](int k) { return radial_node_jet(grid, values, k, dims); }, dims);
}

Vec discrete_f_operator(const PolarGrid2D& grid, const Vec& values, const ProblemDims& dims) {
    return f_op_nodes(
        grid.nodes(), [&](int k) { return polar_node_jet(grid, values, k, dims); }, dims);
}

}  // namespace gkps
