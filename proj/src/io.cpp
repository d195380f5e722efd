#include "gkps/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gkps {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double default_margin_E(double theta_max) { return 0.5 * std::cos(theta_max); }

}  // namespace

RunConfig parse_config(const Json& j) {
    RunConfig cfg;
    cfg.dims.m = j.at("dims").at("m").get<int>();
    cfg.dims.n = j.at("dims").at("n").get<int>();
    cfg.theta_max = j.at("cap").at("theta_max").get<double>();

    const Json& jk = j.at("K");
    cfg.K.kind = jk.at("kind").get<std::string>();
    if (cfg.K.kind == "constant" || cfg.K.kind == "scaled_subsolution")
        cfg.K.value = jk.at("value").get<double>();
    else if (cfg.K.kind == "radial_bump") {
        cfg.K.c1 = jk.at("c1").get<double>();
        cfg.K.c2 = jk.at("c2").get<double>();
    } else if (cfg.K.kind == "table")
        cfg.K.path = jk.at("path").get<std::string>();
    else
        throw std::invalid_argument("config: unknown K.kind '" + cfg.K.kind + "'");

    const Json& jb = j.at("boundary");
    cfg.boundary.kind = jb.at("kind").get<std::string>();
    if (cfg.boundary.kind == "abf_auto") {
        cfg.boundary.E = jb.value("E", -1.0);
        cfg.boundary.scale_f = jb.value("scale_f", 1.0);
        cfg.boundary.headroom = jb.value("headroom", 0.0);
    } else if (cfg.boundary.kind == "abf_params") {
        cfg.boundary.E = jb.at("E").get<double>();
        cfg.boundary.scale_f = jb.value("scale_f", 1.0);
        cfg.boundary.A = jb.at("A").get<double>();
    } else if (cfg.boundary.kind == "constant") {
        cfg.boundary.value = jb.at("value").get<double>();
    } else {
        throw std::invalid_argument("config: unknown boundary.kind '" + cfg.boundary.kind + "'");
    }

    const Json& jg = j.at("grid");
    cfg.grid.backend = jg.at("backend").get<std::string>();
    if (cfg.grid.backend != "radial" && cfg.grid.backend != "polar2d")
        throw std::invalid_argument("config: unknown grid.backend '" + cfg.grid.backend + "'");
    cfg.grid.nr = jg.value("nr", cfg.grid.backend == "radial" ? 129 : 65);
    cfg.grid.nphi = jg.value("nphi", 128);

    if (j.contains("solver")) {
        const Json& js = j.at("solver");
        cfg.solver.dt0 = js.value("dt0", 0.1);
        cfg.solver.dt_min = js.value("dt_min", 1e-4);
        cfg.solver.newton_tol =
            js.value("newton_tol", cfg.grid.backend == "radial" ? 1e-10 : 1e-8);
        cfg.solver.max_newton = js.value("max_newton", 50);
        cfg.solver.max_halvings = js.value("max_halvings", 30);
        cfg.solver.linear_tol = js.value("linear_tol", 1e-10);
    } else if (cfg.grid.backend == "polar2d") {
        cfg.solver.newton_tol = 1e-8;
    }
    if (j.contains("outputs")) {
        cfg.outputs.field_csv = j.at("outputs").value("field_csv", "");
        cfg.outputs.report_json = j.at("outputs").value("report_json", "");
    }

    for (double v : {cfg.theta_max, cfg.K.value, cfg.K.c1, cfg.K.c2, cfg.boundary.E,
                     cfg.boundary.scale_f, cfg.boundary.A, cfg.boundary.value,
                     cfg.boundary.headroom, cfg.solver.dt0, cfg.solver.dt_min,
                     cfg.solver.newton_tol, cfg.solver.linear_tol})
        if (!std::isfinite(v)) throw std::invalid_argument("config: non-finite numeric value");
    return cfg;
}

Json serialize_config(const RunConfig& cfg) {
    Json j;
    j["dims"] = Json{{"m", cfg.dims.m}, {"n", cfg.dims.n}};
    j["cap"] = Json{{"theta_max", cfg.theta_max}};
    Json jk;
    jk["kind"] = cfg.K.kind;
    if (cfg.K.kind == "constant" || cfg.K.kind == "scaled_subsolution")
        jk["value"] = cfg.K.value;
    else if (cfg.K.kind == "radial_bump") {
        jk["c1"] = cfg.K.c1;
        jk["c2"] = cfg.K.c2;
    } else if (cfg.K.kind == "table")
        jk["path"] = cfg.K.path;
    j["K"] = jk;
    Json jb;
    jb["kind"] = cfg.boundary.kind;
    if (cfg.boundary.kind == "abf_auto") {
        jb["E"] = cfg.boundary.E;
        jb["scale_f"] = cfg.boundary.scale_f;
        jb["headroom"] = cfg.boundary.headroom;
    } else if (cfg.boundary.kind == "abf_params") {
        jb["E"] = cfg.boundary.E;
        jb["scale_f"] = cfg.boundary.scale_f;
        jb["A"] = cfg.boundary.A;
    } else {
        jb["value"] = cfg.boundary.value;
    }
    j["boundary"] = jb;
    Json jg;
    jg["backend"] = cfg.grid.backend;
    jg["nr"] = cfg.grid.nr;
    if (cfg.grid.backend == "polar2d") jg["nphi"] = cfg.grid.nphi;
    j["grid"] = jg;
    j["solver"] = Json{{"dt0", cfg.solver.dt0},
                       {"dt_min", cfg.solver.dt_min},
                       {"newton_tol", cfg.solver.newton_tol},
                       {"max_newton", cfg.solver.max_newton},
                       {"max_halvings", cfg.solver.max_halvings},
                       {"linear_tol", cfg.solver.linear_tol}};
    j["outputs"] = Json{{"field_csv", cfg.outputs.field_csv},
                        {"report_json", cfg.outputs.report_json}};
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    Json j;
    in >> j;
    return parse_config(j);
}

bool operator==(const KSpec& a, const KSpec& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == "constant" || a.kind == "scaled_subsolution") return a.value == b.value;
    if (a.kind == "radial_bump") return a.c1 == b.c1 && a.c2 == b.c2;
    return a.path == b.path;
}
bool operator==(const BoundarySpec& a, const BoundarySpec& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == "abf_auto")
        return a.E == b.E && a.scale_f == b.scale_f && a.headroom == b.headroom;
    if (a.kind == "abf_params") return a.E == b.E && a.scale_f == b.scale_f && a.A == b.A;
    return a.value == b.value;
}
bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.backend == b.backend && a.nr == b.nr && (a.backend == "radial" || a.nphi == b.nphi);
}
bool operator==(const OutputSpec& a, const OutputSpec& b) {
    return a.field_csv == b.field_csv && a.report_json == b.report_json;
}
bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.dims.m == b.dims.m && a.dims.n == b.dims.n && a.theta_max == b.theta_max &&
           a.K == b.K && a.boundary == b.boundary && a.grid == b.grid &&
           a.solver.dt0 == b.solver.dt0 && a.solver.dt_min == b.solver.dt_min &&
           a.solver.newton_tol == b.solver.newton_tol &&
           a.solver.max_newton == b.solver.max_newton &&
           a.solver.max_halvings == b.solver.max_halvings &&
           a.solver.linear_tol == b.solver.linear_tol && a.outputs == b.outputs;
}

void write_field_csv(const std::string& path, const RadialGrid& grid, const Vec& u_full,
                     const ProblemDims& dims) {
    if (u_full.size() != grid.nodes())
        throw std::invalid_argument("write_field_csv: field/grid size mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const PdScan scan = pd_scan(grid, u_full, dims);
    out << "theta,u,du_dtheta,min_eig_M\n";
    for (int k = 0; k < grid.nodes(); ++k) {
        const RadialDeriv d = radial_node_deriv(grid, u_full, k);
        out << fmt17(grid.theta(k)) << ',' << fmt17(u_full(k)) << ',' << fmt17(d.du) << ','
            << fmt17(scan.node_min_eig(k)) << '\n';
    }
}

void write_field_csv(const std::string& path, const PolarGrid2D& grid, const Vec& u_full,
                     const ProblemDims& dims) {
    if (u_full.size() != grid.nodes())
        throw std::invalid_argument("write_field_csv: field/grid size mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const PdScan scan = pd_scan(grid, u_full, dims);
    out << "theta,phi,u,du_dtheta,du_dphi,min_eig_M\n";
    for (int k = 0; k < grid.nodes(); ++k) {
        double theta = 0.0, phi = 0.0, dt = 0.0, dp = 0.0;
        if (k == 0) {
            const PoleJet p = polar_pole_jet(grid, u_full);
            dt = std::sqrt(p.gx * p.gx + p.gy * p.gy);
        } else {
            const int j = 1 + (k - 1) / grid.nphi;
            const int i = (k - 1) % grid.nphi;
            theta = grid.theta(j);
            phi = grid.phi(i);
            const Polar2Partials d = polar_node_partials(grid, u_full, j, i);
            dt = d.u_t;
            dp = d.u_p;
        }
        out << fmt17(theta) << ',' << fmt17(phi) << ',' << fmt17(u_full(k)) << ','
            << fmt17(dt) << ',' << fmt17(dp) << ',' << fmt17(scan.node_min_eig(k)) << '\n';
    }
}

namespace {

std::vector<std::vector<double>> read_csv_rows(const std::string& path, int columns,
                                               const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV '" + path + "'");
    if (line != expected_header)
        throw std::invalid_argument("CSV '" + path + "': expected header '" +
                                    expected_header + "', got '" + line + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (static_cast<int>(row.size()) != columns)
            throw std::invalid_argument("CSV '" + path + "': bad column count");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Vec read_field_csv(const std::string& path, const RadialGrid& grid) {
    const auto rows = read_csv_rows(path, 4, "theta,u,du_dtheta,min_eig_M");
    if (static_cast<int>(rows.size()) != grid.nodes())
        throw std::invalid_argument("field CSV row count does not match the grid");
    Vec u(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) u(k) = rows[k][1];
    return u;
}

Vec read_field_csv(const std::string& path, const PolarGrid2D& grid) {
    const auto rows = read_csv_rows(path, 6, "theta,phi,u,du_dtheta,du_dphi,min_eig_M");
    if (static_cast<int>(rows.size()) != grid.nodes())
        throw std::invalid_argument("field CSV row count does not match the grid");
    Vec u(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) u(k) = rows[k][2];
    return u;
}

void write_k_table(const std::string& path, const RadialGrid& grid, const Vec& K_nodes) {
    if (K_nodes.size() != grid.nodes())
        throw std::invalid_argument("write_k_table: K must cover all nodes");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "theta,value\n";
    for (int k = 0; k < grid.nodes(); ++k)
        out << fmt17(grid.theta(k)) << ',' << fmt17(K_nodes(k)) << '\n';
}

void write_k_table(const std::string& path, const PolarGrid2D& grid, const Vec& K_nodes) {
    if (K_nodes.size() != grid.nodes())
        throw std::invalid_argument("write_k_table: K must cover all nodes");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "theta,phi,value\n";
    for (int k = 0; k < grid.nodes(); ++k) {
        const int j = k == 0 ? 0 : 1 + (k - 1) / grid.nphi;
        const int i = k == 0 ? 0 : (k - 1) % grid.nphi;
        out << fmt17(grid.theta(j)) << ',' << fmt17(k == 0 ? 0.0 : grid.phi(i)) << ','
            << fmt17(K_nodes(k)) << '\n';
    }
}

Vec read_k_table(const std::string& path, const RadialGrid& grid) {
    const auto rows = read_csv_rows(path, 2, "theta,value");
    if (static_cast<int>(rows.size()) != grid.nodes())
        throw std::invalid_argument("K table row count does not match the radial grid");
    Vec K(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) K(k) = rows[k][1];
    return K;
}

Vec read_k_table(const std::string& path, const PolarGrid2D& grid) {
    const auto rows = read_csv_rows(path, 3, "theta,phi,value");
    if (static_cast<int>(rows.size()) != grid.nodes())
        throw std::invalid_argument("K table row count does not match the polar grid");
    Vec K(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) K(k) = rows[k][2];
    return K;
}

Json serialize_certificate(const AbfCertificate& cert) {
    return Json{{"r0", cert.r0},
                {"sup_psi", cert.sup_psi},
                {"margin_pd", cert.margin_pd},
                {"margin_sub", cert.margin_sub},
                {"valid", cert.valid()}};
}

Json serialize_diagnostics(const Diagnostics& d) {
    Json j;
    j["sup_u"] = d.sup_u;
    j["sup_grad_u"] = d.sup_grad_u;
    j["sup_hess_u"] = d.sup_hess_u;
    j["min_eig_M"] = d.min_eig_M;
    j["u_minus_psi_min"] = d.u_minus_psi_min;
    j["boundary_max_gap"] = d.boundary_max_gap;
    j["fr_over_f_min"] = d.fr_over_f_min;
    j["r0"] = d.r0;
    j["flags"] = Json{{"psi_below", d.psi_below_ok},
                      {"boundary_max", d.boundary_max_ok},
                      {"below_r0", d.below_r0_ok},
                      {"fr_ratio", d.fr_ratio_ok},
                      {"all", d.all_ok()}};
    return j;
}

Json serialize_report(const SolveReport& report, const RunConfig& cfg,
                      const AbfCertificate& cert, const AbfParams& abf) {
    Json j;
    j["version"] = kVersion;
    j["status"] = report.status;
    j["config"] = serialize_config(cfg);
    j["abf"] = Json{{"E", abf.E}, {"scale_f", abf.scale_f}, {"A", abf.A}};
    j["certificate"] = serialize_certificate(cert);
    Json path = Json::array();
    for (const PathPoint& p : report.path)
        path.push_back(Json{{"t", p.t},
                            {"residual_norm", p.residual_norm},
                            {"newton_iters", p.newton_iters},
                            {"min_eig_M", p.min_eig_M}});
    j["path"] = path;
    j["last_accepted_t"] = report.last_accepted_t;
    j["final_residual"] = report.final_residual;
    j["data_ordering_margin"] = report.data_ordering_margin;
    j["diagnostics"] = serialize_diagnostics(report.diagnostics);
    return j;
}

Json failure_report(const std::string& status, const RunConfig& cfg, double last_t) {
    Json j;
    j["version"] = kVersion;
    j["status"] = status;
    j["config"] = serialize_config(cfg);
    j["last_accepted_t"] = last_t;
    return j;
}

namespace {

// Interpolating continuum evaluator for tabulated radial profiles.
std::function<double(double)> interp1(std::vector<double> xs, std::vector<double> ys) {
    return [xs = std::move(xs), ys = std::move(ys)](double x) {
        if (x <= xs.front()) return ys.front();
        if (x >= xs.back()) return ys.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const size_t i = static_cast<size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return (1.0 - w) * ys[i - 1] + w * ys[i];
    };
}

}  // namespace

PreparedProblem prepare_problem(const RunConfig& cfg) {
    cfg.dims.validate_solver();
    cfg.solver.validate();
    GeodesicCap cap{cfg.dims.m, cfg.theta_max};
    cap.validate();
    const bool radial = cfg.grid.backend == "radial";
    RadialGrid rgrid{cap, cfg.grid.nr};
    PolarGrid2D pgrid{cap, cfg.grid.nr, cfg.grid.nphi};
    radial ? rgrid.validate() : pgrid.validate();
    const int nr = cfg.grid.nr;

    if (cfg.boundary.kind == "constant")
        throw CertificateInvalid(
            "constant boundary data is not admissible: M(psi) has eigenvalue -1");

    AbfParams abf;
    abf.E = cfg.boundary.E < 0.0 ? default_margin_E(cap.theta_max) : cfg.boundary.E;
    abf.scale_f = cfg.boundary.scale_f;
    abf.validate(cap);

    // tabulated K: nodal values plus an interpolating radial profile (ring
    // maxima for the 2D backend) for the continuum checks
    Vec table_nodes;
    RadialKData kdata;
    if (cfg.K.kind == "constant") {
        const double c = cfg.K.value;
        if (!(c > 0.0)) throw std::invalid_argument("config: constant K must be positive");
        kdata.continuum = [c](double) { return c; };
    } else if (cfg.K.kind == "radial_bump") {
        const double c1 = cfg.K.c1, c2 = cfg.K.c2;
        if (!(c1 > 0.0) || c1 + std::min(0.0, c2) <= 0.0)
            throw std::invalid_argument("config: radial bump K must stay positive");
        kdata.continuum = [c1, c2](double t) {
            const double c = std::cos(t);
            return c1 + c2 * c * c;
        };
    } else if (cfg.K.kind == "table") {
        std::vector<double> xs, prof;
        if (radial) {
            table_nodes = read_k_table(cfg.K.path, rgrid);
            for (int k = 0; k < nr; ++k) {
                xs.push_back(rgrid.theta(k));
                prof.push_back(table_nodes(k));
            }
        } else {
            table_nodes = read_k_table(cfg.K.path, pgrid);
            xs.push_back(0.0);
            prof.push_back(table_nodes(0));
            for (int j = 1; j < nr; ++j) {
                double mx = -1e300;
                for (int i = 0; i < pgrid.nphi; ++i)
                    mx = std::max(mx, table_nodes(pgrid.node_id(j, i)));
                xs.push_back(pgrid.theta(j));
                prof.push_back(mx);
            }
        }
        if (table_nodes.minCoeff() <= 0.0)
            throw std::invalid_argument("config: tabulated K must be positive");
        kdata.continuum = interp1(std::move(xs), std::move(prof));
        kdata.nodes_only = true;
    } else if (cfg.K.kind != "scaled_subsolution") {
        throw std::invalid_argument("config: unknown K.kind");
    }

    // fix the shift
    if (cfg.boundary.kind == "abf_params") {
        abf.A = cfg.boundary.A;
    } else if (cfg.K.kind == "scaled_subsolution") {
        // the subsolution condition holds for any c <= 1; only the r0 bound
        // constrains A, and the smallest grid-aligned shift is taken
        const double a_min = abf_phi(cap.theta_max, abf) - r0_threshold(cfg.dims);
        abf.A = std::ceil(a_min / 1e-3) * 1e-3;
    } else {
        abf = find_shift(cap, cfg.dims, kdata, abf, nr, cfg.boundary.headroom);
    }

    if (cfg.K.kind == "scaled_subsolution") {
        const double c = cfg.K.value;
        if (!(c > 0.0))
            throw std::invalid_argument("config: scaled_subsolution factor must be positive");
        const AbfParams abf_c = abf;
        const ProblemDims dims_c = cfg.dims;
        kdata.continuum = [abf_c, dims_c, c](double t) {
            return c * abf_f_operator(t, abf_c, dims_c);
        };
    }

    PreparedProblem prep;
    prep.abf = abf;
    prep.radial = radial;
    prep.certificate = validate_abf(abf, kdata, cfg.dims, cap, nr);

    const double psi_b = abf_psi(cap.theta_max, abf);
    if (radial) {
        RadialProblem& p = prep.radial_problem;
        p.dims = cfg.dims;
        p.grid = rgrid;
        p.abf = abf;
        p.certificate = prep.certificate;
        p.K = Vec::Zero(rgrid.unknowns());
        if (cfg.K.kind == "scaled_subsolution") {
            Vec psi(rgrid.nodes());
            for (int k = 0; k < rgrid.nodes(); ++k) psi(k) = abf_psi(rgrid.theta(k), abf);
            psi(rgrid.nr - 1) = psi_b;
            p.K = cfg.K.value *
                  discrete_f_operator(rgrid, psi, cfg.dims).head(rgrid.unknowns());
        } else if (cfg.K.kind == "table") {
            p.K = table_nodes.head(rgrid.unknowns());
        } else {
            for (int k = 0; k < rgrid.unknowns(); ++k)
                p.K(k) = kdata.continuum(rgrid.theta(k));
        }
    } else {
        Polar2DProblem& p = prep.polar_problem;
        p.dims = cfg.dims;
        p.grid = pgrid;
        p.abf = abf;
        p.certificate = prep.certificate;
        p.K = Vec::Zero(pgrid.unknowns());
        if (cfg.K.kind == "scaled_subsolution") {
            Vec psi(pgrid.nodes());
            psi(0) = abf_psi(0.0, abf);
            for (int j = 1; j < pgrid.nr; ++j)
                for (int i = 0; i < pgrid.nphi; ++i)
                    psi(pgrid.node_id(j, i)) = abf_psi(pgrid.theta(j), abf);
            p.K = cfg.K.value *
                  discrete_f_operator(pgrid, psi, cfg.dims).head(pgrid.unknowns());
        } else if (cfg.K.kind == "table") {
            p.K = table_nodes.head(pgrid.unknowns());
        } else {
            p.K(0) = kdata.continuum(0.0);
            for (int k = 1; k < pgrid.unknowns(); ++k) {
                const int j = 1 + (k - 1) / pgrid.nphi;
                p.K(k) = kdata.continuum(pgrid.theta(j));
            }
        }
    }
    return prep;
}

}  // namespace gkps
