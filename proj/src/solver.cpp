#include "gkps/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace gkps {

Vec solve_tridiagonal(const SparseMat& J, const Vec& rhs) {
    const int n = static_cast<int>(rhs.size());
    Vec sub = Vec::Zero(n), dia = Vec::Zero(n), sup = Vec::Zero(n), sup2 = Vec::Zero(n);
    for (int k = 0; k < J.outerSize(); ++k)
        for (SparseMat::InnerIterator it(J, k); it; ++it) {
            const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            if (c == r - 1) sub(r) = it.value();
            else if (c == r) dia(r) = it.value();
            else if (c == r + 1) sup(r) = it.value();
            else throw std::invalid_argument("solve_tridiagonal: matrix is not tridiagonal");
        }
    Vec b = rhs;
    // forward elimination with row pivoting; pivoting fills a second
    // super-diagonal
    for (int k = 0; k + 1 < n; ++k) {
        if (std::abs(sub(k + 1)) > std::abs(dia(k))) {
            std::swap(dia(k), sub(k + 1));
            std::swap(sup(k), dia(k + 1));
            std::swap(sup2(k), sup(k + 1));
            std::swap(b(k), b(k + 1));
        }
        if (dia(k) == 0.0) throw std::runtime_error("solve_tridiagonal: singular pivot");
        const double m = sub(k + 1) / dia(k);
        dia(k + 1) -= m * sup(k);
        sup(k + 1) -= m * sup2(k);
        b(k + 1) -= m * b(k);
        sub(k + 1) = 0.0;
    }
    Vec x = Vec::Zero(n);
    for (int k = n - 1; k >= 0; --k) {
        double acc = b(k);
        if (k + 1 < n) acc -= sup(k) * x(k + 1);
        if (k + 2 < n) acc -= sup2(k) * x(k + 2);
        if (dia(k) == 0.0) throw std::runtime_error("solve_tridiagonal: singular pivot");
        x(k) = acc / dia(k);
    }
    return x;
}

namespace {

constexpr double kPdTol = 1e-10;

// Backend adapters so Newton and the continuity march are written once.
struct RadialBackend {
    const RadialProblem& p;
    double boundary_value() const { return abf_psi(p.grid.cap.theta_max, p.abf); }
    int unknowns() const { return p.grid.unknowns(); }
    Vec full(const Vec& u) const { return with_boundary(p.grid, u, boundary_value()); }
    AssemblyOutput assemble(const Vec& u, const Vec& K, bool jac) const {
        return jac ? radial_jacobian(p.grid, full(u), K, p.dims)
                   : radial_residual(p.grid, full(u), K, p.dims);
    }
    double pd_min(const Vec& u) const { return pd_scan(p.grid, full(u), p.dims).min_eig_M; }
    Vec psi_unknowns() const {
        Vec u(unknowns());
        for (int k = 0; k < unknowns(); ++k) u(k) = abf_psi(p.grid.theta(k), p.abf);
        return u;
    }
    Vec f_psi() const {
        return discrete_f_operator(p.grid, full(psi_unknowns()), p.dims).head(unknowns());
    }
    Vec solve_linear(const SparseMat& J, const Vec& rhs, double /*linear_tol*/) const {
        return solve_tridiagonal(J, rhs);
    }
};

struct Polar2DBackend {
    const Polar2DProblem& p;
    mutable Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
    double boundary_value() const { return abf_psi(p.grid.cap.theta_max, p.abf); }
    int unknowns() const { return p.grid.unknowns(); }
    Vec full(const Vec& u) const { return with_boundary(p.grid, u, boundary_value()); }
    AssemblyOutput assemble(const Vec& u, const Vec& K, bool jac) const {
        return grid2d_assemble(p.grid, full(u), K, p.dims, jac);
    }
    double pd_min(const Vec& u) const { return pd_scan(p.grid, full(u), p.dims).min_eig_M; }
    Vec psi_unknowns() const {
        Vec u(unknowns());
        u(0) = abf_psi(0.0, p.abf);
        for (int k = 1; k < unknowns(); ++k) {
            const int j = 1 + (k - 1) / p.grid.nphi;
            u(k) = abf_psi(p.grid.theta(j), p.abf);
        }
        return u;
    }
    Vec f_psi() const {
        return discrete_f_operator(p.grid, full(psi_unknowns()), p.dims).head(unknowns());
    }
    Vec solve_linear(const SparseMat& J, const Vec& rhs, double /*linear_tol*/) const {
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("sparse LU factorization failed");
        return lu.solve(rhs);
    }
};

template <class Backend>
NewtonResult newton_impl(const Backend& be, const Vec& u_init, const Vec& K,
                         const ContinuityConfig& cfg) {
    cfg.validate();
    NewtonResult res;
    res.u = u_init;
    for (int iter = 0; iter <= cfg.max_newton; ++iter) {
        AssemblyOutput A = be.assemble(res.u, K, true);
        const double rn = A.residual.lpNorm<Eigen::Infinity>();
        if (rn <= cfg.newton_tol) {
            res.converged = true;
            res.final_residual = rn;
            res.iterations = iter;
            return res;
        }
        if (iter == cfg.max_newton) break;
        Vec d = be.solve_linear(A.jacobian, Vec(-A.residual), cfg.linear_tol);
        const double lin_res = (A.jacobian * d + A.residual).lpNorm<Eigen::Infinity>();
        if (lin_res > cfg.linear_tol * std::max(1.0, A.residual.lpNorm<Eigen::Infinity>()))
            throw std::runtime_error("inner linear solve missed its tolerance");

        NewtonIter rec;
        rec.residual_norm = rn;
        double lambda = 1.0;
        bool accepted = false;
        for (int hv = 0; hv <= cfg.max_halvings; ++hv) {
            Vec trial = res.u + lambda * d;
            if (be.pd_min(trial) <= kPdTol) {
                rec.pd_rejections = true;
            } else {
                const Vec rtrial = be.assemble(trial, K, false).residual;
                const double rt = rtrial.lpNorm<Eigen::Infinity>();
                if (rt <= (1.0 - 1e-4 * lambda) * rn) {
                    res.u = trial;
                    rec.halvings = hv;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        res.history.push_back(rec);
        if (!accepted) {
            res.failure = "line_search_failed";
            res.final_residual = rn;
            res.iterations = iter + 1;
            return res;
        }
    }
    res.failure = "max_iterations";
    const Vec rfinal = be.assemble(res.u, K, false).residual;
    res.final_residual = rfinal.lpNorm<Eigen::Infinity>();
    res.iterations = cfg.max_newton;
    return res;
}

template <class Backend>
SolveReport continuity_impl(const Backend& be, const AbfCertificate& cert, const Vec& K,
                            const ContinuityConfig& cfg) {
    cfg.validate();
    if (!cert.valid())
        throw CertificateInvalid(
            "boundary function fails the admissibility certificate (sup psi <= r0, "
            "M(psi) > 0, F(psi) >= K)");
    if (K.size() != be.unknowns())
        throw std::invalid_argument("continuity_solve: K must cover the unknown nodes");

    const Vec f_psi = be.f_psi();
    SolveReport rep;
    rep.data_ordering_margin = 1e300;

    Vec u = be.psi_unknowns();
    auto k_at = [&](double t) -> Vec {
        Vec kt = (1.0 - t) * f_psi + t * K;
        // pin the convex combination inside its bracket against roundoff
        for (int i = 0; i < kt.size(); ++i) {
            const double lo = std::min(f_psi(i), K(i));
            const double hi = std::max(f_psi(i), K(i));
            kt(i) = std::min(hi, std::max(lo, kt(i)));
        }
        return kt;
    };

    auto accept = [&](double t, const NewtonResult& nr) {
        PathPoint pp;
        pp.t = t;
        pp.u = nr.u;
        pp.residual_norm = nr.final_residual;
        pp.newton_iters = nr.iterations;
        pp.min_eig_M = be.pd_min(nr.u);
        if (pp.min_eig_M <= kPdTol)
            throw std::logic_error("accepted iterate lost positive definiteness");
        // path data stays between K and F(psi) wherever those are ordered
        const Vec kt = k_at(t);
        for (int i = 0; i < kt.size(); ++i) {
            if (f_psi(i) < K(i)) continue;
            const double scale = 1.0 + std::abs(f_psi(i)) + std::abs(K(i));
            const double slack = std::min(kt(i) - K(i), f_psi(i) - kt(i)) / scale;
            rep.data_ordering_margin = std::min(rep.data_ordering_margin, slack);
            if (slack < -1e-12)
                throw std::logic_error("path data left the [K, F(psi)] bracket");
        }
        rep.path.push_back(std::move(pp));
    };

    // t = 0: psi solves the discrete system by construction
    NewtonResult nr0 = newton_impl(be, u, k_at(0.0), cfg);
    if (!nr0.converged)
        throw NewtonDiverged(
            "Newton failed at t = 0 where u = psi is the exact solution; this signals "
            "an assembly bug (" +
            nr0.failure + ")");
    u = nr0.u;
    accept(0.0, nr0);

    double t = 0.0;
    double dt = cfg.dt0;
    while (t < 1.0) {
        dt = std::min(dt, 1.0 - t);
        const double t_trial = t + dt;
        NewtonResult nr = newton_impl(be, u, k_at(t_trial), cfg);
        bool ok = nr.converged && be.pd_min(nr.u) > kPdTol;
        if (ok) {
            t = t_trial;
            u = nr.u;
            accept(t, nr);
            dt = std::min(2.0 * dt, cfg.dt0);
        } else {
            dt *= 0.5;
            if (dt < cfg.dt_min) throw PathStalled(t);
        }
    }

    rep.status = "converged";
    rep.last_accepted_t = 1.0;
    rep.u_full = be.full(u);
    rep.final_residual = rep.path.back().residual_norm;
    return rep;
}

template <class Grid>
Diagnostics diagnostics_impl(const Grid& grid, const Vec& u_full, const AbfParams& abf,
                             const ProblemDims& dims,
                             const std::function<ProductJet(int)>& jet_at, int first_boundary) {
    if (u_full.size() != grid.nodes())
        throw std::invalid_argument("solve_diagnostics: field/grid size mismatch");
    Diagnostics d;
    d.r0 = r0_threshold(dims);
    d.sup_u = u_full.cwiseAbs().maxCoeff();
    d.sup_grad_u = 0.0;
    d.sup_hess_u = 0.0;
    d.fr_over_f_min = 1e300;
    d.u_minus_psi_min = 1e300;
    for (int k = 0; k < grid.nodes(); ++k) {
        const ProductJet j = jet_at(k);
        d.sup_grad_u = std::max(d.sup_grad_u, std::sqrt(j.p() + j.q()));
        d.sup_hess_u = std::max(d.sup_hess_u, j.hess_xx.cwiseAbs().maxCoeff());
        const double f = f_eval(j.u, j.p(), j.q(), dims);
        const double fr = f_r_eval(j.u, j.p(), j.q(), dims);
        d.fr_over_f_min = std::min(d.fr_over_f_min, fr / f);
    }
    d.min_eig_M = pd_scan(grid, u_full, dims).min_eig_M;

    const double max_all = u_full.maxCoeff();
    const double max_boundary = u_full.tail(grid.nodes() - first_boundary).maxCoeff();
    d.boundary_max_gap = max_all - max_boundary;

    d.psi_below_ok = true;
    d.boundary_max_ok = d.boundary_max_gap <= 1e-8;
    d.below_r0_ok = u_full.maxCoeff() <= d.r0 + 1e-12;
    const double e2r0 = std::exp(2.0 * d.r0);
    d.fr_ratio_ok = d.fr_over_f_min >= dims.tau() / 3.0 / (1.0 + e2r0) - 1e-12;
    return d;
}

}  // namespace

NewtonResult newton_solve(const RadialProblem& problem, const Vec& u_init, const Vec& K_target,
                          const ContinuityConfig& config) {
    return newton_impl(RadialBackend{problem}, u_init, K_target, config);
}

NewtonResult newton_solve(const Polar2DProblem& problem, const Vec& u_init, const Vec& K_target,
                          const ContinuityConfig& config) {
    return newton_impl(Polar2DBackend{problem}, u_init, K_target, config);
}

SolveReport continuity_solve(const RadialProblem& problem, const ContinuityConfig& config) {
    problem.dims.validate_solver();
    problem.grid.validate();
    SolveReport rep = continuity_impl(RadialBackend{problem}, problem.certificate, problem.K, config);
    rep.diagnostics = solve_diagnostics(problem.grid, rep.u_full, problem.abf, problem.dims);
    return rep;
}

SolveReport continuity_solve(const Polar2DProblem& problem, const ContinuityConfig& config) {
    problem.dims.validate_solver();
    problem.grid.validate();
    SolveReport rep = continuity_impl(Polar2DBackend{problem}, problem.certificate, problem.K, config);
    rep.diagnostics = solve_diagnostics(problem.grid, rep.u_full, problem.abf, problem.dims);
    return rep;
}

Diagnostics solve_diagnostics(const RadialGrid& grid, const Vec& u_full, const AbfParams& abf,
                              const ProblemDims& dims) {
    Diagnostics d = diagnostics_impl(
        grid, u_full, abf, dims,
        [&](int k) { return radial_node_jet(grid, u_full, k, dims); }, grid.nr - 1);
    for (int k = 0; k < grid.nodes(); ++k)
        d.u_minus_psi_min = std::min(d.u_minus_psi_min, u_full(k) - abf_psi(grid.theta(k), abf));
    d.psi_below_ok = d.u_minus_psi_min >= -1e-8;
    return d;
}

Diagnostics solve_diagnostics(const PolarGrid2D& grid, const Vec& u_full, const AbfParams& abf,
                              const ProblemDims& dims) {
    Diagnostics d = diagnostics_impl(
        grid, u_full, abf, dims,
        [&](int k) { return polar_node_jet(grid, u_full, k, dims); }, grid.unknowns());
    for (int k = 0; k < grid.nodes(); ++k) {
        const int j = k == 0 ? 0 : 1 + (k - 1) / grid.nphi;
        d.u_minus_psi_min =
            std::min(d.u_minus_psi_min, u_full(k) - abf_psi(grid.theta(j), abf));
    }
    d.psi_below_ok = d.u_minus_psi_min >= -1e-8;
    return d;
}

}  // namespace gkps
