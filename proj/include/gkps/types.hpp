#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace gkps {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dimensions of the factor spheres S^m x S^n.  The solver requires m > n >= 1;
// the forward kernel accepts any m, n >= 1.
struct ProblemDims {
    int m = 2;
    int n = 1;

    double tau() const { return 2.0 * (m - n) / (m + n + 2); }
    // exponent (m+n+2)/2 applied to f in the curvature equation
    double s_exp() const { return 0.5 * (m + n + 2); }
    int dim() const { return m + n; }

    void validate_forward() const {
        if (m < 1 || n < 1) throw std::invalid_argument("ProblemDims: need m, n >= 1");
    }
    void validate_solver() const {
        validate_forward();
        if (m <= n)
            throw std::invalid_argument(
                "ProblemDims: solver requires m > n; for m < n substitute v = -u and "
                "swap the factor spheres (the embedding is unchanged)");
    }
};

// Geodesic cap of radius theta_max about a pole of S^m; the x-factor domain.
// theta_max < pi/2 keeps the cap inside an open hemisphere, and a cap is
// strictly infinitesimally convex, so the product cap x S^n is admissible.
struct GeodesicCap {
    int m = 2;
    double theta_max = 1.0;

    void validate() const {
        if (m < 2) throw std::invalid_argument("GeodesicCap: need m >= 2");
        if (!(theta_max > 0.0 && theta_max < 1.5707963267948966))
            throw std::invalid_argument("GeodesicCap: need 0 < theta_max < pi/2");
    }
};

// Pointwise 2-jet of a function on one factor sphere, in an orthonormal frame:
// value, first covariant derivatives, symmetric second covariant derivatives.
struct FrameJet2 {
    double value = 0.0;
    Vec grad;
    Mat hess;
};

// Full 2-jet of u on S^m x S^n in product orthonormal frames.
struct ProductJet {
    int m = 0;
    int n = 0;
    double u = 0.0;
    Vec grad_x;   // length m
    Vec grad_y;   // length n
    Mat hess_xx;  // m x m, symmetric
    Mat hess_xy;  // m x n
    Mat hess_yy;  // n x n, symmetric

    static ProductJet zero(int m, int n) {
        ProductJet j;
        j.m = m;
        j.n = n;
        j.grad_x = Vec::Zero(m);
        j.grad_y = Vec::Zero(n);
        j.hess_xx = Mat::Zero(m, m);
        j.hess_xy = Mat::Zero(m, n);
        j.hess_yy = Mat::Zero(n, n);
        return j;
    }

    double p() const { return grad_x.squaredNorm(); }
    double q() const { return grad_y.squaredNorm(); }

    void validate() const {
        if (grad_x.size() != m || grad_y.size() != n || hess_xx.rows() != m ||
            hess_xx.cols() != m || hess_xy.rows() != m || hess_xy.cols() != n ||
            hess_yy.rows() != n || hess_yy.cols() != n)
            throw std::invalid_argument("ProductJet: inconsistent block sizes");
        if (!hess_xx.isApprox(hess_xx.transpose(), 1e-12) ||
            !hess_yy.isApprox(hess_yy.transpose(), 1e-12))
            throw std::invalid_argument("ProductJet: Hessian blocks must be symmetric");
    }
};

// The symmetric (m+n) x (m+n) matrix whose positive definiteness is the
// convexity of the hypersurface.  Blocks:
//   xx: u_ij - u_i u_j - d_ij,  xy: u_ia,  yy: u_ab + u_a u_b + d_ab.
struct MuMatrix {
    int m = 0;
    int n = 0;
    Mat full;

    Eigen::Block<const Mat> xx() const { return full.block(0, 0, m, m); }
    Eigen::Block<const Mat> xy() const { return full.block(0, m, m, n); }
    Eigen::Block<const Mat> yy() const { return full.block(m, m, n, n); }

    double det() const { return Eigen::PartialPivLU<Mat>(full).determinant(); }
    Mat inverse() const {
        Eigen::PartialPivLU<Mat> lu(full);
        if (std::abs(lu.determinant()) < 1e-300)
            throw std::runtime_error("MuMatrix: singular");
        return lu.inverse();
    }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(full, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
    // PD test by the eigenvalue minimum; the minimum itself is a reported
    // diagnostic, so Cholesky success is not used here.
    bool positive_definite(double tol = 1e-10) const { return min_eigenvalue() > tol; }
};

// Product torus S^m(cos a) x S^n(sin a) obtained from constant u = c;
// the closed-form curvature reference.
struct CliffordReference {
    int m = 0;
    int n = 0;
    double c = 0.0;
    double kappa_x = 0.0;  // principal curvature with multiplicity m
    double kappa_y = 0.0;  // principal curvature with multiplicity n
    double K = 0.0;

    std::vector<double> principal_curvatures() const {
        std::vector<double> k;
        for (int i = 0; i < m; ++i) k.push_back(kappa_x);
        for (int i = 0; i < n; ++i) k.push_back(kappa_y);
        return k;
    }
};

// Extrinsic data of the embedded hypersurface at one point, with the factor
// base points fixed at the first coordinate poles.
struct GeomSample {
    Vec X;         // point on S^{m+n+1} in R^{m+n+2}
    Mat tangents;  // (m+n+2) x (m+n) columns X_A
    Mat g;         // induced metric
    Vec normal;    // unit normal in T S^{m+n+1}
    Mat h;         // second fundamental form along normal
    double K = 0.0;
};

}  // namespace gkps
