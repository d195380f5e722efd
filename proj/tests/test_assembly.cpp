#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "gkps/assembly.hpp"
#include "gkps/abf.hpp"

using namespace gkps;

namespace {

const ProblemDims kDims{2, 1};
const GeodesicCap kCap{2, M_PI / 3.0};

AbfParams reference_abf() {
    AbfParams p;
    p.E = 0.25;
    p.A = std::ceil((abf_phi(kCap.theta_max, p) - r0_threshold(kDims)) / 1e-3) * 1e-3;
    return p;
}

Vec psi_field(const RadialGrid& grid, const AbfParams& abf) {
    Vec u(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) u(k) = abf_psi(grid.theta(k), abf);
    return u;
}

Vec psi_field(const PolarGrid2D& grid, const AbfParams& abf) {
    Vec u(grid.nodes());
    u(0) = abf_psi(0.0, abf);
    for (int j = 1; j < grid.nr; ++j)
        for (int i = 0; i < grid.nphi; ++i)
            u(grid.node_id(j, i)) = abf_psi(grid.theta(j), abf);
    return u;
}

Vec exact_k(const RadialGrid& grid, const AbfParams& abf, const ProblemDims& dims) {
    Vec K(grid.unknowns());
    for (int k = 0; k < grid.unknowns(); ++k)
        K(k) = abf_f_operator(grid.theta(k), abf, dims);
    return K;
}

}  // namespace

TEST_CASE("radial residual is second-order consistent on the subsolution") {
    // the truncation error at every shared node must fall by ~4x per doubling
    const AbfParams abf = reference_abf();
    std::vector<Vec> residuals;
    for (int nr : {33, 65, 129}) {
        RadialGrid grid{kCap, nr};
        const Vec u = psi_field(grid, abf);
        const Vec K = exact_k(grid, abf, kDims);
        residuals.push_back(radial_residual(grid, u, K, kDims).residual);
    }
    for (int lvl = 0; lvl + 1 < 3; ++lvl) {
        double coarse = 0.0, fine = 0.0;
        for (int k = 0; k < residuals[lvl].size(); ++k) {
            coarse = std::max(coarse, std::abs(residuals[lvl](k)));
            fine = std::max(fine, std::abs(residuals[lvl + 1](2 * k)));
        }
        const double ratio = coarse / fine;
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }
}

TEST_CASE("radial residual on constant fields") {
    RadialGrid grid{kCap, 33};
    for (double c : {-0.5, 0.0, 0.7}) {
        const Vec u = Vec::Constant(grid.nodes(), c);
        SUBCASE("m = 2") {
            const Vec K = Vec::Constant(grid.unknowns(), 0.8);
            const AssemblyOutput out = radial_residual(grid, u, K, kDims);
            // det M = (-1)^m = +1; the radial M-factor u'' - (u')^2 - 1 = -1 < 0
            // already rules out convexity
            for (int k = 0; k < grid.unknowns(); ++k)
                CHECK(out.residual(k) ==
                      doctest::Approx(1.0 - 0.8 * std::exp(c)).epsilon(1e-12));
            CHECK(out.min_eig_M == doctest::Approx(-1.0).epsilon(1e-12));
        }
        SUBCASE("m = 3 keeps det M negative") {
            ProblemDims d31{3, 1};
            GeodesicCap cap3{3, kCap.theta_max};
            RadialGrid grid3{cap3, 33};
            const Vec u3 = Vec::Constant(grid3.nodes(), c);
            const Vec K = Vec::Constant(grid3.unknowns(), 0.8);
            const AssemblyOutput out = radial_residual(grid3, u3, K, d31);
            for (int k = 0; k < grid3.unknowns(); ++k)
                CHECK(out.residual(k) ==
                      doctest::Approx(-1.0 - 0.8 * std::exp(2.0 * c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("radial residual covers exactly the unknown nodes") {
    RadialGrid grid{kCap, 17};
    const AbfParams abf = reference_abf();
    const Vec u = psi_field(grid, abf);
    const Vec K = exact_k(grid, abf, kDims);
    const AssemblyOutput out = radial_residual(grid, u, K, kDims);
    CHECK(out.residual.size() == grid.unknowns());
    CHECK(out.residual.size() == grid.nodes() - 1);
}

TEST_CASE("radial jacobian equals finite differences of the residual") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const AbfParams abf = reference_abf();
    RadialGrid grid{kCap, 33};
    const Vec K = Vec::Constant(grid.unknowns(), 0.5);
    const double fd = 1e-6;
    for (int it = 0; it < 20; ++it) {
        Vec u = psi_field(grid, abf);
        for (int attempt = 0;; ++attempt) {
            REQUIRE(attempt < 50);
            Vec pert(grid.nodes());
            const double a1 = 0.02 * unif(rng), a2 = 0.02 * unif(rng), a3 = 0.02 * unif(rng);
            for (int k = 0; k < grid.nodes(); ++k) {
                const double t = grid.theta(k) / kCap.theta_max;
                pert(k) = a1 * std::cos(M_PI * t) + a2 * t * t + a3 * std::cos(2 * M_PI * t);
            }
            if (pd_scan(grid, u + pert, kDims).min_eig_M > 1e-6) {
                u += pert;
                break;
            }
        }
        const Mat J = Mat(radial_jacobian(grid, u, K, kDims).jacobian);
        double worst = 0.0;
        for (int col = 0; col < grid.unknowns(); ++col) {
            Vec up = u, um = u;
            up(col) += fd;
            um(col) -= fd;
            const Vec dr = (radial_residual(grid, up, K, kDims).residual -
                            radial_residual(grid, um, K, kDims).residual) /
                           (2 * fd);
            for (int row = 0; row < grid.unknowns(); ++row)
                worst = std::max(
                    worst, std::abs(J(row, col) - dr(row)) / std::max(1.0, std::abs(dr(row))));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("jacobian is linear: zero direction maps to zero") {
    const AbfParams abf = reference_abf();
    RadialGrid grid{kCap, 17};
    const Vec u = psi_field(grid, abf);
    const Vec K = exact_k(grid, abf, kDims);
    const AssemblyOutput out = radial_jacobian(grid, u, K, kDims);
    CHECK((out.jacobian * Vec::Zero(grid.unknowns())).norm() == 0.0);
}

TEST_CASE("f_r stays nonnegative along admissible iterates") {
    // the f_r-weighted diagonal term of the linearization keeps the sign that
    // makes the linearized problem uniquely solvable
    const AbfParams abf = reference_abf();
    RadialGrid grid{kCap, 33};
    const Vec u = psi_field(grid, abf);
    CHECK(u.maxCoeff() <= r0_threshold(kDims) + 1e-12);
    for (int k = 0; k < grid.nodes(); ++k) {
        const RadialDeriv d = radial_node_deriv(grid, u, k);
        CHECK(f_r_eval(d.u, d.du * d.du, 0.0, kDims) >= 0.0);
    }
}

TEST_CASE("polar backend reproduces the radial residual on symmetric data") {
    const AbfParams abf = reference_abf();
    PolarGrid2D pgrid{kCap, 17, 16};
    RadialGrid rgrid{kCap, 17};
    const Vec up = psi_field(pgrid, abf);
    const Vec ur = psi_field(rgrid, abf);
    Vec Kp(pgrid.unknowns());
    Kp(0) = abf_f_operator(0.0, abf, kDims);
    for (int k = 1; k < pgrid.unknowns(); ++k) {
        const int j = 1 + (k - 1) / pgrid.nphi;
        Kp(k) = abf_f_operator(pgrid.theta(j), abf, kDims);
    }
    const Vec Kr = exact_k(rgrid, abf, kDims);
    const Vec rp = grid2d_assemble(pgrid, up, Kp, kDims, false).residual;
    const Vec rr = radial_residual(rgrid, ur, Kr, kDims).residual;
    CHECK(std::abs(rp(0) - rr(0)) <= 1e-12);
    for (int j = 1; j < pgrid.nr - 1; ++j)
        for (int i = 0; i < pgrid.nphi; ++i)
            CHECK(std::abs(rp(pgrid.node_id(j, i)) - rr(j)) <= 1e-12);
}

TEST_CASE("polar residual is second-order consistent on the subsolution") {
    // ring-resolved comparison: nphi fixed, theta spacing halved
    const AbfParams abf = reference_abf();
    std::vector<Vec> ring_max;
    std::vector<int> sizes{9, 17, 33};
    for (int nr : sizes) {
        PolarGrid2D grid{kCap, nr, 32};
        const Vec u = psi_field(grid, abf);
        Vec K(grid.unknowns());
        K(0) = abf_f_operator(0.0, abf, kDims);
        for (int k = 1; k < grid.unknowns(); ++k) {
            const int j = 1 + (k - 1) / grid.nphi;
            K(k) = abf_f_operator(grid.theta(j), abf, kDims);
        }
        const Vec r = grid2d_assemble(grid, u, K, kDims, false).residual;
        Vec rm = Vec::Zero(nr - 1);
        rm(0) = std::abs(r(0));
        for (int j = 1; j < nr - 1; ++j)
            for (int i = 0; i < grid.nphi; ++i)
                rm(j) = std::max(rm(j), std::abs(r(grid.node_id(j, i))));
        ring_max.push_back(rm);
    }
    for (int lvl = 0; lvl + 1 < 3; ++lvl) {
        double coarse = 0.0, fine = 0.0;
        for (int j = 0; j + 1 < sizes[lvl]; ++j) {
            coarse = std::max(coarse, ring_max[lvl](j));
            fine = std::max(fine, ring_max[lvl + 1](2 * j));
        }
        const double ratio = coarse / fine;
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }
}

TEST_CASE("polar jacobian equals finite differences of the residual") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const AbfParams abf = reference_abf();
    // nr large enough that the one-sided boundary stencil resolves psi
    PolarGrid2D grid{kCap, 33, 12};
    const Vec K = Vec::Constant(grid.unknowns(), 0.5);
    const double fd = 1e-6;
    for (int it = 0; it < 5; ++it) {
        Vec u = psi_field(grid, abf);
        for (int attempt = 0;; ++attempt) {
            REQUIRE(attempt < 50);
            Vec pert = Vec::Zero(grid.nodes());
            const double a1 = 0.01 * unif(rng), a2 = 0.01 * unif(rng);
            // smooth at the pole: x and 2xy in ambient coordinates
            for (int j = 1; j < grid.nr; ++j)
                for (int i = 0; i < grid.nphi; ++i) {
                    const double t = grid.theta(j), f = grid.phi(i);
                    pert(grid.node_id(j, i)) = a1 * std::sin(t) * std::cos(f) +
                                               a2 * std::sin(t) * std::sin(t) * std::sin(2 * f);
                }
            if (pd_scan(grid, u + pert, kDims).min_eig_M > 1e-6) {
                u += pert;
                break;
            }
        }
        const Mat J = Mat(grid2d_assemble(grid, u, K, kDims, true).jacobian);
        double worst = 0.0;
        for (int col = 0; col < grid.unknowns(); ++col) {
            Vec up = u, um = u;
            up(col) += fd;
            um(col) -= fd;
            const Vec dr = (grid2d_assemble(grid, up, K, kDims, false).residual -
                            grid2d_assemble(grid, um, K, kDims, false).residual) /
                           (2 * fd);
            for (int row = 0; row < grid.unknowns(); ++row)
                worst = std::max(
                    worst, std::abs(J(row, col) - dr(row)) / std::max(1.0, std::abs(dr(row))));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("pd_scan") {
    SUBCASE("subsolution field attains the closed-form minimum at the pole") {
        const AbfParams abf = reference_abf();
        RadialGrid grid{kCap, 257};
        const PdScan scan = pd_scan(grid, psi_field(grid, abf), kDims);
        // min over nodes of min(E/(cos t - E), 1) = 1/3 at the pole
        CHECK(scan.min_eig_M == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
        for (bool c : scan.convex) CHECK(c);
    }
    SUBCASE("zero field") {
        RadialGrid grid{kCap, 17};
        const PdScan scan = pd_scan(grid, Vec::Zero(grid.nodes()), kDims);
        CHECK(scan.min_eig_M == doctest::Approx(-1.0));
        for (bool c : scan.convex) CHECK(!c);
    }
    SUBCASE("all-convex flags imply positive determinant at every node") {
        const AbfParams abf = reference_abf();
        RadialGrid grid{kCap, 65};
        const Vec u = psi_field(grid, abf);
        const PdScan scan = pd_scan(grid, u, kDims);
        for (int k = 0; k < grid.nodes(); ++k) {
            REQUIRE(scan.convex[k]);
            CHECK(mu_matrix(radial_node_jet(grid, u, k, kDims)).det() > 0.0);
        }
    }
}

TEST_CASE("discrete operator tracks the closed form") {
    const AbfParams abf = reference_abf();
    RadialGrid grid{kCap, 129};
    const Vec Fh = discrete_f_operator(grid, psi_field(grid, abf), kDims);
    for (int k = 0; k < grid.nodes(); ++k) {
        const double exact = abf_f_operator(grid.theta(k), abf, kDims);
        CHECK(Fh(k) == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("assembly is bitwise deterministic under GK_THREADS") {
    const AbfParams abf = reference_abf();
    PolarGrid2D grid{kCap, 17, 16};
    const Vec u = psi_field(grid, abf);
    const Vec K = Vec::Constant(grid.unknowns(), 0.5);
    const AssemblyOutput serial = grid2d_assemble(grid, u, K, kDims, true);
    setenv("GK_THREADS", "4", 1);
    const AssemblyOutput threaded = grid2d_assemble(grid, u, K, kDims, true);
    unsetenv("GK_THREADS");
    CHECK((serial.residual - threaded.residual).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((Mat(serial.jacobian) - Mat(threaded.jacobian)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(serial.min_eig_M == threaded.min_eig_M);
}
