#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gkps/io.hpp"

namespace py = pybind11;
using namespace gkps;

namespace {

ProductJet make_jet(double u, const Vec& grad_x, const Vec& grad_y, const Mat& hess_xx,
                    const Mat& hess_xy, const Mat& hess_yy) {
    ProductJet j;
    j.m = static_cast<int>(grad_x.size());
    j.n = static_cast<int>(grad_y.size());
    j.u = u;
    j.grad_x = grad_x;
    j.grad_y = grad_y;
    j.hess_xx = hess_xx;
    j.hess_xy = hess_xy;
    j.hess_yy = hess_yy;
    j.validate();
    return j;
}

// full solve pipeline on a JSON config string; returns the report JSON
std::string solve_json(const std::string& config_json) {
    const RunConfig cfg = parse_config(Json::parse(config_json));
    if (cfg.dims.m <= cfg.dims.n)
        throw std::invalid_argument(
            "solve requires m > n; substitute v = -u and swap the factor spheres");
    PreparedProblem prep;
    try {
        prep = prepare_problem(cfg);
    } catch (const CertificateInvalid&) {
        return failure_report("certificate_invalid", cfg, 0.0).dump();
    }
    if (!prep.certificate.valid()) {
        Json j = failure_report("certificate_invalid", cfg, 0.0);
        j["certificate"] = serialize_certificate(prep.certificate);
        return j.dump();
    }
    try {
        const SolveReport rep = prep.radial
                                    ? continuity_solve(prep.radial_problem, cfg.solver)
                                    : continuity_solve(prep.polar_problem, cfg.solver);
        Json j = serialize_report(rep, cfg, prep.certificate, prep.abf);
        j["u"] = std::vector<double>(rep.u_full.data(), rep.u_full.data() + rep.u_full.size());
        return j.dump();
    } catch (const PathStalled& e) {
        return failure_report("path_stalled", cfg, e.last_t).dump();
    }
}

std::string abf_json(int m, int n, double theta_max, const std::string& k_kind,
                     double k_value, double E, double scale_f, double headroom, int nr) {
    RunConfig cfg;
    cfg.dims = ProblemDims{m, n};
    cfg.theta_max = theta_max;
    cfg.K.kind = k_kind;
    cfg.K.value = k_value;
    if (k_kind == "radial_bump") {
        cfg.K.c1 = k_value;
        cfg.K.c2 = 0.0;
    }
    cfg.boundary.kind = "abf_auto";
    cfg.boundary.E = E;
    cfg.boundary.scale_f = scale_f;
    cfg.boundary.headroom = headroom;
    cfg.grid.backend = "radial";
    cfg.grid.nr = nr;
    const PreparedProblem prep = prepare_problem(cfg);
    Json j;
    j["abf"] = Json{{"E", prep.abf.E}, {"scale_f", prep.abf.scale_f}, {"A", prep.abf.A}};
    j["certificate"] = serialize_certificate(prep.certificate);
    return j.dump();
}

py::dict oracle_dict(const OracleReport& r) {
    py::dict d;
    d["K_analytic"] = r.K_analytic;
    d["K_extrinsic"] = r.K_extrinsic;
    d["rel_error"] = r.rel_error;
    d["fd_step"] = r.fd_step;
    d["convergence_ratio"] = r.convergence_ratio;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "prescribed Gauss-Kronecker curvature on products of unit spheres";
    m.attr("__version__") = kVersion;

    m.def(
        "tau", [](int mm, int nn) { return ProblemDims{mm, nn}.tau(); }, py::arg("m"),
        py::arg("n"));
    m.def(
        "r0_threshold", [](int mm, int nn) { return r0_threshold(ProblemDims{mm, nn}); },
        py::arg("m"), py::arg("n"));
    m.def(
        "f_eval",
        [](double r, double p, double q, int mm, int nn) {
            return f_eval(r, p, q, ProblemDims{mm, nn});
        },
        py::arg("r"), py::arg("p"), py::arg("q"), py::arg("m"), py::arg("n"));
    m.def(
        "f_r_eval",
        [](double r, double p, double q, int mm, int nn) {
            return f_r_eval(r, p, q, ProblemDims{mm, nn});
        },
        py::arg("r"), py::arg("p"), py::arg("q"), py::arg("m"), py::arg("n"));

    m.def(
        "clifford_reference",
        [](int mm, int nn, double c) {
            const CliffordReference r = clifford_reference(mm, nn, c);
            py::dict d;
            d["K"] = r.K;
            d["kappa_x"] = r.kappa_x;
            d["kappa_y"] = r.kappa_y;
            d["principal_curvatures"] = r.principal_curvatures();
            return d;
        },
        py::arg("m"), py::arg("n"), py::arg("c"));

    m.def(
        "curvature_k",
        [](double u, const Vec& gx, const Vec& gy, const Mat& hxx, const Mat& hxy,
           const Mat& hyy) {
            const ProductJet j = make_jet(u, gx, gy, hxx, hxy, hyy);
            return curvature_k(j, ProblemDims{j.m, j.n});
        },
        py::arg("u"), py::arg("grad_x"), py::arg("grad_y"), py::arg("hess_xx"),
        py::arg("hess_xy"), py::arg("hess_yy"));
    m.def(
        "f_operator",
        [](double u, const Vec& gx, const Vec& gy, const Mat& hxx, const Mat& hxy,
           const Mat& hyy) {
            const ProductJet j = make_jet(u, gx, gy, hxx, hxy, hyy);
            return f_operator(j, ProblemDims{j.m, j.n});
        },
        py::arg("u"), py::arg("grad_x"), py::arg("grad_y"), py::arg("hess_xx"),
        py::arg("hess_xy"), py::arg("hess_yy"));
    m.def(
        "mu_matrix",
        [](double u, const Vec& gx, const Vec& gy, const Mat& hxx, const Mat& hxy,
           const Mat& hyy) {
            return mu_matrix(make_jet(u, gx, gy, hxx, hxy, hyy)).full;
        },
        py::arg("u"), py::arg("grad_x"), py::arg("grad_y"), py::arg("hess_xx"),
        py::arg("hess_xy"), py::arg("hess_yy"));
    m.def("embed_point", &embed_point, py::arg("gamma"), py::arg("rho"), py::arg("u"));
    m.def(
        "second_fundamental",
        [](double u, const Vec& gx, const Vec& gy, const Mat& hxx, const Mat& hxy,
           const Mat& hyy) {
            const ProductJet j = make_jet(u, gx, gy, hxx, hxy, hyy);
            const GeomSample gs = second_fundamental(j, ProblemDims{j.m, j.n});
            py::dict d;
            d["X"] = gs.X;
            d["g"] = gs.g;
            d["h"] = gs.h;
            d["normal"] = gs.normal;
            d["K"] = gs.K;
            return d;
        },
        py::arg("u"), py::arg("grad_x"), py::arg("grad_y"), py::arg("hess_xx"),
        py::arg("hess_xy"), py::arg("hess_yy"));

    m.def(
        "extrinsic_oracle",
        [](double u, const Vec& gx, const Vec& gy, const Mat& hxx, const Mat& hxy,
           const Mat& hyy, double fd_step) {
            const ProductJet j = make_jet(u, gx, gy, hxx, hxy, hyy);
            return oracle_dict(extrinsic_oracle(j, ProblemDims{j.m, j.n}, fd_step));
        },
        py::arg("u"), py::arg("grad_x"), py::arg("grad_y"), py::arg("hess_xx"),
        py::arg("hess_xy"), py::arg("hess_yy"), py::arg("fd_step") = 3.2e-3);

    m.def("abf_json", &abf_json, py::arg("m"), py::arg("n"), py::arg("theta_max"),
          py::arg("k_kind") = "constant", py::arg("k_value") = 1.0, py::arg("E") = -1.0,
          py::arg("scale_f") = 1.0, py::arg("headroom") = 0.0, py::arg("nr") = 129);
    m.def("solve_json", &solve_json, py::arg("config_json"));
}
