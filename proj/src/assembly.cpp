#include "gkps/assembly.hpp"

#include <cmath>

#include "gkps/kernel.hpp"
#include "gkps/parallel.hpp"

namespace gkps {

Vec with_boundary(const RadialGrid& grid, const Vec& unknowns, double boundary_value) {
    if (unknowns.size() != grid.unknowns())
        throw std::invalid_argument("with_boundary: unknown vector size mismatch");
    Vec v(grid.nodes());
    v.head(grid.unknowns()) = unknowns;
    v(grid.nr - 1) = boundary_value;
    return v;
}

Vec with_boundary(const PolarGrid2D& grid, const Vec& unknowns, double boundary_value) {
    if (unknowns.size() != grid.unknowns())
        throw std::invalid_argument("with_boundary: unknown vector size mismatch");
    Vec v(grid.nodes());
    v.head(grid.unknowns()) = unknowns;
    v.tail(grid.nodes() - grid.unknowns()).setConstant(boundary_value);
    return v;
}

namespace {

struct RadialRow {
    double residual = 0.0;
    // d residual / d u_{k-1}, u_k, u_{k+1}
    double jac[3] = {0.0, 0.0, 0.0};
};

RadialRow radial_row(const RadialGrid& grid, const Vec& v, const Vec& K,
                     const ProblemDims& dims, int k, bool want_jac) {
    const double h = grid.h();
    const double s = dims.s_exp();
    RadialRow row;
    if (k == 0) {
        // pole: u'(0) = 0 by symmetry, every M-factor equals u''(0) - 1
        const double ddu = 2.0 * (v(1) - v(0)) / (h * h);
        const double a = ddu - 1.0;
        const double f = f_eval(v(0), 0.0, 0.0, dims);
        const double fs = std::pow(f, s);
        row.residual = std::pow(a, dims.m) - K(0) * fs;
        if (want_jac) {
            const double dam = dims.m * std::pow(a, dims.m - 1);
            const double fr = f_r_eval(v(0), 0.0, 0.0, dims);
            row.jac[1] = dam * (-2.0 / (h * h)) - K(0) * s * std::pow(f, s - 1.0) * fr;
            row.jac[2] = dam * (2.0 / (h * h));
        }
        return row;
    }
    const double theta = grid.theta(k);
    const double cot = std::cos(theta) / std::sin(theta);
    const double du = (v(k + 1) - v(k - 1)) / (2.0 * h);
    const double ddu = (v(k + 1) - 2.0 * v(k) + v(k - 1)) / (h * h);
    const double a = ddu - du * du - 1.0;
    const double b = du * cot - 1.0;
    const double bm = std::pow(b, dims.m - 1);
    const double p = du * du;
    const double f = f_eval(v(k), p, 0.0, dims);
    const double fs = std::pow(f, s);
    row.residual = a * bm - K(k) * fs;
    if (want_jac) {
        const double bm1 = (dims.m - 1) * std::pow(b, dims.m - 2);
        const double fs1 = s * std::pow(f, s - 1.0);
        const double fr = f_r_eval(v(k), p, 0.0, dims);
        const double fp = f_p_eval(v(k), dims);
        const double ddu_w[3] = {1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)};
        const double du_w[3] = {-1.0 / (2.0 * h), 0.0, 1.0 / (2.0 * h)};
        for (int t = 0; t < 3; ++t) {
            const double da = ddu_w[t] - 2.0 * du * du_w[t];
            const double db = du_w[t] * cot;
            const double df = (t == 1 ? fr : 0.0) + fp * 2.0 * du * du_w[t];
            row.jac[t] = da * bm + a * bm1 * db - K(k) * fs1 * df;
        }
    }
    return row;
}

AssemblyOutput assemble_radial(const RadialGrid& grid, const Vec& v, const Vec& K,
                               const ProblemDims& dims, bool want_jac) {
    grid.validate();
    dims.validate_solver();
    if (v.size() != grid.nodes())
        throw std::invalid_argument("assemble_radial: field/grid size mismatch");
    if (K.size() != grid.unknowns())
        throw std::invalid_argument("assemble_radial: K must cover the unknown nodes");
    const int nu = grid.unknowns();
    AssemblyOutput out;
    out.residual = Vec::Zero(nu);
    std::vector<RadialRow> rows(nu);
    parallel_for(nu, [&](int k) { rows[k] = radial_row(grid, v, K, dims, k, want_jac); });
    for (int k = 0; k < nu; ++k) out.residual(k) = rows[k].residual;
    if (want_jac) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(3 * nu);
        for (int k = 0; k < nu; ++k) {
            if (k == 0) {
                trips.emplace_back(0, 0, rows[k].jac[1]);
                trips.emplace_back(0, 1, rows[k].jac[2]);
                continue;
            }
            trips.emplace_back(k, k - 1, rows[k].jac[0]);
            trips.emplace_back(k, k, rows[k].jac[1]);
            if (k + 1 < nu) trips.emplace_back(k, k + 1, rows[k].jac[2]);
        }
        out.jacobian.resize(nu, nu);
        out.jacobian.setFromTriplets(trips.begin(), trips.end());
    }
    out.min_eig_M = pd_scan(grid, v, dims).min_eig_M;
    return out;
}

}  // namespace

AssemblyOutput radial_residual(const RadialGrid& grid, const Vec& values, const Vec& K,
                               const ProblemDims& dims) {
    return assemble_radial(grid, values, K, dims, false);
}

AssemblyOutput radial_jacobian(const RadialGrid& grid, const Vec& values, const Vec& K,
                               const ProblemDims& dims) {
    return assemble_radial(grid, values, K, dims, true);
}

namespace {

// One stencil contribution: partial-derivative weights of the chart partials
// with respect to a single neighboring nodal value.
struct StencilW {
    int col = -1;  // unknown column, or -1 when the neighbor is Dirichlet data
    double dt = 0.0, dtt = 0.0, dp = 0.0, dpp = 0.0, dtp = 0.0;
};

struct Row2D {
    double residual = 0.0;
    std::vector<std::pair<int, double>> jac;
};

Row2D ring_row(const PolarGrid2D& grid, const Vec& v, double Kk, const ProblemDims& dims,
               int j, int i, bool want_jac) {
    const double h = grid.h();
    const double hp = grid.hphi();
    const double theta = grid.theta(j);
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double cot = ct / st;
    const double s = dims.s_exp();

    const Polar2Partials d = polar_node_partials(grid, v, j, i);
    const double g1 = d.u_t;
    const double g2 = d.u_p / st;
    const double a11 = d.u_tt - g1 * g1 - 1.0;
    const double a12 = (d.u_tp - cot * d.u_p) / st - g1 * g2;
    const double a22 = d.u_pp / (st * st) + cot * d.u_t - g2 * g2 - 1.0;
    const double u = v(grid.node_id(j, i));
    const double p2 = g1 * g1 + g2 * g2;
    const double f = f_eval(u, p2, 0.0, dims);
    const double fs = std::pow(f, s);

    Row2D row;
    row.residual = a11 * a22 - a12 * a12 - Kk * fs;
    if (!want_jac) return row;

    const double fs1 = s * std::pow(f, s - 1.0);
    const double fr = f_r_eval(u, p2, 0.0, dims);
    const double fp = f_p_eval(u, dims);

    auto col_of = [&](int jj, int ii) {
        if (jj == 0) return 0;                       // pole unknown
        if (jj == grid.nr - 1) return -1;            // Dirichlet ring
        return grid.node_id(jj, ii);
    };

    std::vector<StencilW> ws;
    auto add = [&](int jj, int ii, double dt, double dtt, double dp, double dpp,
                   double dtp) {
        StencilW w;
        w.col = col_of(jj, ii);
        w.dt = dt;
        w.dtt = dtt;
        w.dp = dp;
        w.dpp = dpp;
        w.dtp = dtp;
        ws.push_back(w);
    };

    const double ih2 = 1.0 / (h * h);
    const double i2h = 1.0 / (2.0 * h);
    const double ip2 = 1.0 / (hp * hp);
    const double i2p = 1.0 / (2.0 * hp);
    const double ixy = 1.0 / (4.0 * h * hp);

    add(j, i, 0.0, -2.0 * ih2, 0.0, -2.0 * ip2, 0.0);
    add(j + 1, i, i2h, ih2, 0.0, 0.0, 0.0);
    add(j - 1, i, -i2h, ih2, 0.0, 0.0, 0.0);
    add(j, i + 1, 0.0, 0.0, i2p, ip2, 0.0);
    add(j, i - 1, 0.0, 0.0, -i2p, ip2, 0.0);
    add(j + 1, i + 1, 0.0, 0.0, 0.0, 0.0, ixy);
    add(j + 1, i - 1, 0.0, 0.0, 0.0, 0.0, -ixy);
    add(j - 1, i + 1, 0.0, 0.0, 0.0, 0.0, -ixy);
    add(j - 1, i - 1, 0.0, 0.0, 0.0, 0.0, ixy);

    const int center = grid.node_id(j, i);
    for (const StencilW& w : ws) {
        if (w.col < 0) continue;
        const double dg1 = w.dt;
        const double dg2 = w.dp / st;
        const double da11 = w.dtt - 2.0 * g1 * dg1;
        const double da12 = (w.dtp - cot * w.dp) / st - g1 * dg2 - g2 * dg1;
        const double da22 = w.dpp / (st * st) + cot * w.dt - 2.0 * g2 * dg2;
        const double dp2 = 2.0 * g1 * dg1 + 2.0 * g2 * dg2;
        const double df = (w.col == center ? fr : 0.0) + fp * dp2;
        row.jac.emplace_back(w.col,
                             a22 * da11 + a11 * da22 - 2.0 * a12 * da12 - Kk * fs1 * df);
    }
    return row;
}

Row2D pole_row(const PolarGrid2D& grid, const Vec& v, double K0, const ProblemDims& dims,
               bool want_jac) {
    const int N = grid.nphi;
    const double h = grid.h();
    const double s = dims.s_exp();
    const PoleJet p = polar_pole_jet(grid, v);
    const double a11 = p.h11 - p.gx * p.gx - 1.0;
    const double a12 = p.h12 - p.gx * p.gy;
    const double a22 = p.h22 - p.gy * p.gy - 1.0;
    const double p2 = p.gx * p.gx + p.gy * p.gy;
    const double f = f_eval(p.u, p2, 0.0, dims);
    const double fs = std::pow(f, s);

    Row2D row;
    row.residual = a11 * a22 - a12 * a12 - K0 * fs;
    if (!want_jac) return row;

    const double fs1 = s * std::pow(f, s - 1.0);
    const double fr = f_r_eval(p.u, p2, 0.0, dims);
    const double fp = f_p_eval(p.u, dims);

    auto push = [&](int col, double dh11, double dh12, double dh22, double dgx,
                    double dgy, double df_extra) {
        const double da11 = dh11 - 2.0 * p.gx * dgx;
        const double da12 = dh12 - p.gx * dgy - p.gy * dgx;
        const double da22 = dh22 - 2.0 * p.gy * dgy;
        const double dp2 = 2.0 * p.gx * dgx + 2.0 * p.gy * dgy;
        row.jac.emplace_back(col, a22 * da11 + a11 * da22 - 2.0 * a12 * da12 -
                                      K0 * fs1 * (fp * dp2 + df_extra));
    };

    // center: every directional second difference loses 2 u0 / h^2
    push(0, -2.0 / (h * h), 0.0, -2.0 / (h * h), 0.0, 0.0, fr);
    for (int k = 0; k < N; ++k) {
        const double ph = grid.phi(k);
        const double dc0 = 2.0 / (N * h * h);
        const double dc2 = 4.0 * std::cos(2.0 * ph) / (N * h * h);
        const double ds2 = 4.0 * std::sin(2.0 * ph) / (N * h * h);
        const double dgx = 2.0 * std::cos(ph) / (N * h);
        const double dgy = 2.0 * std::sin(ph) / (N * h);
        push(grid.node_id(1, k), dc0 + dc2, ds2, dc0 - dc2, dgx, dgy, 0.0);
    }
    return row;
}

}  // namespace

AssemblyOutput grid2d_assemble(const PolarGrid2D& grid, const Vec& values, const Vec& K,
                               const ProblemDims& dims, bool want_jacobian) {
    grid.validate();
    dims.validate_solver();
    if (dims.m != 2) throw std::invalid_argument("grid2d_assemble: backend requires m = 2");
    if (values.size() != grid.nodes())
        throw std::invalid_argument("grid2d_assemble: field/grid size mismatch");
    if (K.size() != grid.unknowns())
        throw std::invalid_argument("grid2d_assemble: K must cover the unknown nodes");

    const int nu = grid.unknowns();
    AssemblyOutput out;
    out.residual = Vec::Zero(nu);
    std::vector<Row2D> rows(nu);
    parallel_for(nu, [&](int k) {
        if (k == 0) {
            rows[k] = pole_row(grid, values, K(0), dims, want_jacobian);
        } else {
            const int j = 1 + (k - 1) / grid.nphi;
            const int i = (k - 1) % grid.nphi;
            rows[k] = ring_row(grid, values, K(k), dims, j, i, want_jacobian);
        }
    });
    for (int k = 0; k < nu; ++k) out.residual(k) = rows[k].residual;
    if (want_jacobian) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(10 * static_cast<size_t>(nu));
        for (int k = 0; k < nu; ++k)
            for (const auto& [col, val] : rows[k].jac) trips.emplace_back(k, col, val);
        out.jacobian.resize(nu, nu);
        out.jacobian.setFromTriplets(trips.begin(), trips.end());
    }
    out.min_eig_M = pd_scan(grid, values, dims).min_eig_M;
    return out;
}

}  // namespace gkps
