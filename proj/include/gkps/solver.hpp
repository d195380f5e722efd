#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkps/abf.hpp"
#include "gkps/assembly.hpp"

namespace gkps {

struct ContinuityConfig {
    double dt0 = 0.1;
    double dt_min = 1e-4;
    double newton_tol = 1e-10;
    int max_newton = 50;
    int max_halvings = 30;
    double linear_tol = 1e-10;

    void validate() const {
        if (!(dt_min > 0.0 && dt_min <= dt0 && dt0 <= 1.0))
            throw std::invalid_argument("ContinuityConfig: need 0 < dt_min <= dt0 <= 1");
        if (max_newton < 1 || max_halvings < 0)
            throw std::invalid_argument("ContinuityConfig: bad iteration limits");
    }
};

struct CertificateInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PathStalled : std::runtime_error {
    double last_t;
    explicit PathStalled(double t)
        : std::runtime_error("continuity path stalled at t = " + std::to_string(t)),
          last_t(t) {}
};
struct NewtonDiverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewtonIter {
    double residual_norm = 0.0;
    int halvings = 0;
    bool pd_rejections = false;
};

struct NewtonResult {
    Vec u;  // unknown nodes
    std::vector<NewtonIter> history;
    bool converged = false;
    std::string failure;  // "max_iterations" | "line_search_failed"
    double final_residual = 0.0;
    int iterations = 0;
};

struct PathPoint {
    double t = 0.0;
    Vec u;  // unknown nodes
    double residual_norm = 0.0;
    int newton_iters = 0;
    double min_eig_M = 0.0;
};

struct Diagnostics {
    double sup_u = 0.0;
    double sup_grad_u = 0.0;
    double sup_hess_u = 0.0;
    double min_eig_M = 0.0;
    double u_minus_psi_min = 0.0;
    double boundary_max_gap = 0.0;
    double fr_over_f_min = 0.0;
    double r0 = 0.0;
    bool psi_below_ok = false;
    bool boundary_max_ok = false;
    bool below_r0_ok = false;
    bool fr_ratio_ok = false;

    bool all_ok() const { return psi_below_ok && boundary_max_ok && below_r0_ok && fr_ratio_ok; }
};

struct SolveReport {
    std::string status;  // "converged" | "path_stalled" | ...
    std::vector<PathPoint> path;
    Vec u_full;  // all nodes, boundary included
    double final_residual = 0.0;
    double last_accepted_t = 0.0;
    // smallest slack of K <= K_t <= F(psi) over accepted points, at nodes
    // where the path data is ordered
    double data_ordering_margin = 0.0;
    Diagnostics diagnostics;
};

struct RadialProblem {
    ProblemDims dims;
    RadialGrid grid;
    AbfParams abf;
    AbfCertificate certificate;
    Vec K;  // one value per unknown node
};

struct Polar2DProblem {
    ProblemDims dims;
    PolarGrid2D grid;
    AbfParams abf;
    AbfCertificate certificate;
    Vec K;
};

// Damped Newton on the discrete residual with backtracking on the sup norm;
// every trial iterate must keep M(u) positive definite.
NewtonResult newton_solve(const RadialProblem& problem, const Vec& u_init, const Vec& K_target,
                          const ContinuityConfig& config);
NewtonResult newton_solve(const Polar2DProblem& problem, const Vec& u_init, const Vec& K_target,
                          const ContinuityConfig& config);

// March K_t = (1-t) F(psi) + t K from the exact start u_0 = psi, halving the
// step on Newton failure or loss of positive definiteness.
SolveReport continuity_solve(const RadialProblem& problem, const ContinuityConfig& config);
SolveReport continuity_solve(const Polar2DProblem& problem, const ContinuityConfig& config);

// Diagnostic suite over a full nodal field against the boundary function.
Diagnostics solve_diagnostics(const RadialGrid& grid, const Vec& u_full,
                              const AbfParams& abf, const ProblemDims& dims);
Diagnostics solve_diagnostics(const PolarGrid2D& grid, const Vec& u_full,
                              const AbfParams& abf, const ProblemDims& dims);

// Direct banded elimination with partial pivoting for tridiagonal systems.
Vec solve_tridiagonal(const SparseMat& J, const Vec& rhs);

}  // namespace gkps
