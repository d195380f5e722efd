#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "gkps/io.hpp"

namespace gkps {

namespace {

KSpec parse_k_flag(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("K spec must look like kind:params, got '" + spec + "'");
    KSpec k;
    k.kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (k.kind == "constant" || k.kind == "scaled_subsolution") {
        k.value = std::stod(rest);
    } else if (k.kind == "radial_bump") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("radial_bump needs c1,c2");
        k.c1 = std::stod(rest.substr(0, comma));
        k.c2 = std::stod(rest.substr(comma + 1));
    } else if (k.kind == "table") {
        k.path = rest;
    } else {
        throw std::invalid_argument("unknown K kind '" + k.kind + "'");
    }
    return k;
}

void write_json(const std::string& path, const Json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

int run_solve(const RunConfig& cfg) {
    if (cfg.dims.m <= cfg.dims.n) {
        std::cerr << "solve: requires m > n; for m < n substitute v = -u and swap the "
                     "factor spheres (the embedding is unchanged), then solve the "
                     "swapped problem\n";
        return 1;
    }
    PreparedProblem prep;
    try {
        prep = prepare_problem(cfg);
    } catch (const CertificateInvalid& e) {
        std::cerr << "solve: " << e.what() << '\n';
        write_json(cfg.outputs.report_json, failure_report("certificate_invalid", cfg, 0.0));
        return 1;
    }
    if (!prep.certificate.valid()) {
        std::cerr << "solve: boundary function is not admissible: sup_psi = "
                  << prep.certificate.sup_psi << " (r0 = " << prep.certificate.r0
                  << "), margin_pd = " << prep.certificate.margin_pd
                  << ", margin_sub = " << prep.certificate.margin_sub << '\n';
        Json j = failure_report("certificate_invalid", cfg, 0.0);
        j["certificate"] = serialize_certificate(prep.certificate);
        write_json(cfg.outputs.report_json, j);
        return 1;
    }
    try {
        SolveReport rep;
        if (prep.radial) {
            rep = continuity_solve(prep.radial_problem, cfg.solver);
            if (!cfg.outputs.field_csv.empty())
                write_field_csv(cfg.outputs.field_csv, prep.radial_problem.grid, rep.u_full,
                                cfg.dims);
        } else {
            rep = continuity_solve(prep.polar_problem, cfg.solver);
            if (!cfg.outputs.field_csv.empty())
                write_field_csv(cfg.outputs.field_csv, prep.polar_problem.grid, rep.u_full,
                                cfg.dims);
        }
        write_json(cfg.outputs.report_json,
                   serialize_report(rep, cfg, prep.certificate, prep.abf));
        std::cout << "status: " << rep.status << "\nfinal residual: " << rep.final_residual
                  << "\npath points: " << rep.path.size()
                  << "\nmin eig M: " << rep.diagnostics.min_eig_M
                  << "\ndiagnostic flags: " << (rep.diagnostics.all_ok() ? "pass" : "FAIL")
                  << '\n';
        return 0;
    } catch (const PathStalled& e) {
        std::cerr << "solve: " << e.what() << '\n';
        write_json(cfg.outputs.report_json, failure_report("path_stalled", cfg, e.last_t));
        return 2;
    } catch (const NewtonDiverged& e) {
        std::cerr << "solve: " << e.what() << '\n';
        write_json(cfg.outputs.report_json, failure_report("newton_diverged", cfg, 0.0));
        return 2;
    }
}

int run_abf(int m, int n, double theta_max, const std::string& kspec, double E,
            double scale_f, double headroom, int nr, const std::string& out) {
    RunConfig cfg;
    cfg.dims = ProblemDims{m, n};
    cfg.theta_max = theta_max;
    cfg.K = parse_k_flag(kspec);
    cfg.boundary.kind = "abf_auto";
    cfg.boundary.E = E;
    cfg.boundary.scale_f = scale_f;
    cfg.boundary.headroom = headroom;
    cfg.grid.backend = "radial";
    cfg.grid.nr = nr;
    if (cfg.dims.m <= cfg.dims.n) {
        std::cerr << "abf: requires m > n (take v = -u and swap the factors otherwise)\n";
        return 1;
    }
    PreparedProblem prep;
    try {
        prep = prepare_problem(cfg);
    } catch (const CertificateInvalid& e) {
        std::cerr << "abf: " << e.what() << '\n';
        return 1;
    }
    std::cout << "E = " << prep.abf.E << "\nscale_f = " << prep.abf.scale_f
              << "\nA = " << prep.abf.A << "\nr0 = " << prep.certificate.r0
              << "\nsup_psi = " << prep.certificate.sup_psi
              << "\nmargin_pd = " << prep.certificate.margin_pd
              << "\nmargin_sub = " << prep.certificate.margin_sub
              << "\nvalid = " << (prep.certificate.valid() ? "yes" : "no") << '\n';
    Json j;
    j["version"] = kVersion;
    j["abf"] = Json{{"E", prep.abf.E}, {"scale_f", prep.abf.scale_f}, {"A", prep.abf.A}};
    j["certificate"] = serialize_certificate(prep.certificate);
    write_json(out, j);
    return prep.certificate.valid() ? 0 : 1;
}

int run_forward(int m, int n, bool have_c, double c, const std::string& field_csv,
                double theta_max, const std::string& out) {
    ProblemDims dims{m, n};
    dims.validate_forward();
    Json j;
    j["version"] = kVersion;
    if (have_c) {
        const CliffordReference ref = clifford_reference(m, n, c);
        std::cout << "constant u = " << c << "\nK = " << ref.K << "\nprincipal curvatures: "
                  << ref.kappa_x << " (x" << m << "), " << ref.kappa_y << " (x" << n << ")\n";
        j["constant_u"] = c;
        j["K"] = ref.K;
        j["kappa_x"] = ref.kappa_x;
        j["kappa_y"] = ref.kappa_y;
        write_json(out, j);
        return 0;
    }
    if (field_csv.empty()) {
        std::cerr << "forward: need either --c or --field\n";
        return 3;
    }
    GeodesicCap cap{m, theta_max};
    cap.validate();
    // the radial grid is inferred from the file length
    std::ifstream probe(field_csv);
    if (!probe) {
        std::cerr << "forward: cannot open '" << field_csv << "'\n";
        return 3;
    }
    int rows = -1;  // minus header
    for (std::string line; std::getline(probe, line);)
        if (!line.empty()) ++rows;
    RadialGrid grid{cap, rows};
    grid.validate();
    const Vec u = read_field_csv(field_csv, grid);
    const Vec F = discrete_f_operator(grid, u, dims);
    const PdScan scan = pd_scan(grid, u, dims);
    std::cout << "nodes = " << grid.nodes() << "\nF(u) range = [" << F.minCoeff() << ", "
              << F.maxCoeff() << "]\nmin eig M = " << scan.min_eig_M << '\n';
    j["nodes"] = grid.nodes();
    j["F_min"] = F.minCoeff();
    j["F_max"] = F.maxCoeff();
    j["min_eig_M"] = scan.min_eig_M;
    write_json(out, j);
    return 0;
}

int run_manufacture(int m, int n, double theta_max, int nr, double perturb,
                    const std::string& out_k, const std::string& out) {
    ProblemDims dims{m, n};
    GeodesicCap cap{m, theta_max};
    cap.validate();
    dims.validate_solver();
    AbfParams abf;
    abf.E = 0.5 * std::cos(theta_max);
    abf.A = std::ceil((abf_phi(theta_max, abf) - r0_threshold(dims)) / 1e-3) * 1e-3;

    const double ctm = std::cos(theta_max);
    RadialField star;
    star.u = [abf, perturb, ctm](double t) {
        return abf_phi(t, abf) - abf.A + perturb * (std::cos(t) - ctm);
    };
    star.du = [abf, perturb](double t) { return abf_phi_d1(t, abf) - perturb * std::sin(t); };
    star.ddu = [abf, perturb](double t) { return abf_phi_d2(t, abf) - perturb * std::cos(t); };

    RadialGrid grid{cap, nr};
    grid.validate();
    const ManufacturedProblem mp = manufacture_problem(star, dims, cap, nr);
    if (!out_k.empty()) {
        Vec k_all(grid.nodes());
        k_all.head(grid.unknowns()) = mp.K;
        k_all(grid.nr - 1) =
            f_operator(radial_field_jet(star, theta_max, dims), dims);
        write_k_table(out_k, grid, k_all);
    }
    std::cout << "psi boundary value = " << mp.psi_boundary << "\nK range = ["
              << mp.K.minCoeff() << ", " << mp.K.maxCoeff() << "]\nabf: E = " << abf.E
              << ", scale_f = " << abf.scale_f << ", A = " << abf.A << '\n';
    Json j;
    j["version"] = kVersion;
    j["psi_boundary"] = mp.psi_boundary;
    j["abf"] = Json{{"E", abf.E}, {"scale_f", abf.scale_f}, {"A", abf.A}};
    j["perturb"] = perturb;
    j["K_min"] = mp.K.minCoeff();
    j["K_max"] = mp.K.maxCoeff();
    write_json(out, j);
    return 0;
}

int run_check_oracle(int count, unsigned seed, double step) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<int> mdist(2, 3);
    int bad = 0;
    double worst_pair = 0.0, worst_ratio_lo = 1e300, worst_ratio_hi = 0.0;
    for (int it = 0; it < count; ++it) {
        const int m = mdist(rng), n = 1;
        ProblemDims dims{m, n};
        ProductJet jet = ProductJet::zero(m, n);
        double K = 0.0;
        do {
            jet.u = unif(rng);
            for (int i = 0; i < m; ++i) jet.grad_x(i) = unif(rng);
            for (int a = 0; a < n; ++a) jet.grad_y(a) = unif(rng);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j)
                    jet.hess_xx(i, j) = jet.hess_xx(j, i) = unif(rng);
            for (int i = 0; i < m; ++i)
                for (int a = 0; a < n; ++a) jet.hess_xy(i, a) = unif(rng);
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    jet.hess_yy(a, b) = jet.hess_yy(b, a) = unif(rng);
            K = curvature_k(jet, dims);
        } while (std::abs(K) < 1e-2);  // keep relative comparisons meaningful

        const GeomSample gs = second_fundamental(jet, dims);
        const double pair_err = std::abs(gs.K - K) / std::max(std::abs(K), 1e-300);
        worst_pair = std::max(worst_pair, pair_err);
        const OracleReport rep = extrinsic_oracle(jet, dims, step);
        worst_ratio_lo = std::min(worst_ratio_lo, rep.convergence_ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, rep.convergence_ratio);
        if (pair_err > 1e-10 || rep.convergence_ratio < 3.0 || rep.convergence_ratio > 5.0)
            ++bad;
    }
    std::cout << "jets checked: " << count << "\nworst det h/det g deviation: " << worst_pair
              << "\nconvergence ratios in [" << worst_ratio_lo << ", " << worst_ratio_hi
              << "]\nfailures: " << bad << '\n';
    return bad == 0 ? 0 : 1;
}

int run_check_obstruction(int count, unsigned seed, int res) {
    std::mt19937_64 rng(seed);
    double worst = -1e300;
    for (int it = 0; it < count; ++it) {
        const GlobalField f = random_low_frequency_field(rng, 0.1);
        const ObstructionReport rep = global_obstruction_demo(f, res / 2 + 1, res, 64);
        worst = std::max(worst, rep.largest_xx_eigenvalue);
    }
    std::cout << "fields: " << count << "\nworst largest xx-eigenvalue at argmax: " << worst
              << " (must stay below -1 + 0.05)\n";
    return worst <= -1.0 + 0.05 ? 0 : 1;
}

int run_check_comparison(const std::string& u_csv, const std::string& v_csv, int m, int n,
                         double theta_max) {
    ProblemDims dims{m, n};
    dims.validate_solver();
    GeodesicCap cap{m, theta_max};
    std::ifstream probe(u_csv);
    int rows = -1;
    for (std::string line; std::getline(probe, line);)
        if (!line.empty()) ++rows;
    RadialGrid grid{cap, rows};
    grid.validate();
    const Vec u = read_field_csv(u_csv, grid);
    const Vec v = read_field_csv(v_csv, grid);
    const ComparisonVerdict cv =
        comparison_check(grid, u, v, dims, r0_threshold(dims));
    if (!cv.precondition_ok) {
        std::cout << "precondition failed: " << cv.precondition_failure << '\n';
        return 1;
    }
    std::cout << "boundary shift sup(v-u) = " << cv.boundary_shift
              << "\nbranch v - shift <= u: " << (cv.branch_shifted ? "holds" : "fails")
              << " (margin " << cv.margin_shifted << ")\nbranch v <= u: "
              << (cv.branch_plain ? "holds" : "fails") << " (margin " << cv.margin_plain
              << ")\n";
    return cv.some_branch() ? 0 : 1;
}

int run_check_jacobian(const std::string& backend, int count, unsigned seed);
int run_check_boundary_identity(const std::string& config_path);

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"prescribed Gauss-Kronecker curvature on products of unit spheres"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve the Dirichlet problem from a config");
    std::string solve_config;
    solve->add_option("--config", solve_config, "JSON config path")->required();

    // abf
    auto* abf = app.add_subcommand("abf", "construct and certify a boundary function");
    int abf_m = 2, abf_n = 1, abf_nr = 129;
    double abf_theta = 1.0, abf_E = -1.0, abf_scale = 1.0, abf_headroom = 0.0;
    std::string abf_k = "constant:1.0", abf_out;
    abf->add_option("--m", abf_m)->required();
    abf->add_option("--n", abf_n)->required();
    abf->add_option("--theta-max", abf_theta)->required();
    abf->add_option("--k", abf_k, "curvature data, kind:params");
    abf->add_option("--E", abf_E);
    abf->add_option("--scale-f", abf_scale);
    abf->add_option("--headroom", abf_headroom);
    abf->add_option("--nr", abf_nr);
    abf->add_option("--out", abf_out, "report JSON path");

    // forward
    auto* fwd = app.add_subcommand("forward", "evaluate curvature of a field");
    int fwd_m = 2, fwd_n = 1;
    double fwd_c = 0.0, fwd_theta = 1.0;
    std::string fwd_field, fwd_out;
    fwd->add_option("--m", fwd_m)->required();
    fwd->add_option("--n", fwd_n)->required();
    auto* fwd_c_opt = fwd->add_option("--c", fwd_c, "constant u");
    fwd->add_option("--field", fwd_field, "radial field CSV");
    fwd->add_option("--theta-max", fwd_theta);
    fwd->add_option("--out", fwd_out);

    // manufacture
    auto* man = app.add_subcommand("manufacture", "build K := F(u*) for a known convex u*");
    int man_m = 2, man_n = 1, man_nr = 129;
    double man_theta = 1.0, man_perturb = 0.0;
    std::string man_out_k, man_out;
    man->add_option("--m", man_m)->required();
    man->add_option("--n", man_n)->required();
    man->add_option("--theta-max", man_theta)->required();
    man->add_option("--nr", man_nr);
    man->add_option("--perturb", man_perturb);
    man->add_option("--out-k", man_out_k, "K table CSV path");
    man->add_option("--out", man_out);

    // check group
    auto* check = app.add_subcommand("check", "independent verification oracles");
    check->require_subcommand(1);
    auto* c_oracle = check->add_subcommand("oracle", "extrinsic curvature recomputation");
    int co_count = 50;
    unsigned co_seed = 20240601u;
    double co_step = 3.2e-3;
    c_oracle->add_option("--count", co_count);
    c_oracle->add_option("--seed", co_seed);
    c_oracle->add_option("--step", co_step);
    auto* c_jac = check->add_subcommand("jacobian", "analytic vs finite-difference Jacobian");
    std::string cj_backend = "radial";
    int cj_count = 5;
    unsigned cj_seed = 7u;
    c_jac->add_option("--backend", cj_backend)->check(CLI::IsMember({"radial", "polar2d"}));
    c_jac->add_option("--count", cj_count);
    c_jac->add_option("--seed", cj_seed);
    auto* c_cmp = check->add_subcommand("comparison", "comparison-lemma branches");
    std::string cc_u, cc_v;
    int cc_m = 2, cc_n = 1;
    double cc_theta = 1.0;
    c_cmp->add_option("--u", cc_u)->required();
    c_cmp->add_option("--v", cc_v)->required();
    c_cmp->add_option("--m", cc_m);
    c_cmp->add_option("--n", cc_n);
    c_cmp->add_option("--theta-max", cc_theta)->required();
    auto* c_obs = check->add_subcommand("obstruction", "no global convex solution probe");
    int ob_count = 100, ob_res = 128;
    unsigned ob_seed = 987u;
    c_obs->add_option("--count", ob_count);
    c_obs->add_option("--seed", ob_seed);
    c_obs->add_option("--res", ob_res, "nodes per great circle");
    auto* c_bnd = check->add_subcommand("boundary-identity", "Dirichlet-ring Hessian identity");
    std::string cb_config;
    c_bnd->add_option("--config", cb_config)->required();

    std::vector<const char*> argv;
    argv.push_back("gkps");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (solve->parsed()) return run_solve(load_config(solve_config));
        if (abf->parsed())
            return run_abf(abf_m, abf_n, abf_theta, abf_k, abf_E, abf_scale, abf_headroom,
                           abf_nr, abf_out);
        if (fwd->parsed())
            return run_forward(fwd_m, fwd_n, fwd_c_opt->count() > 0, fwd_c, fwd_field,
                               fwd_theta, fwd_out);
        if (man->parsed())
            return run_manufacture(man_m, man_n, man_theta, man_nr, man_perturb, man_out_k,
                                   man_out);
        if (check->parsed()) {
            if (c_oracle->parsed()) return run_check_oracle(co_count, co_seed, co_step);
            if (c_jac->parsed()) return run_check_jacobian(cj_backend, cj_count, cj_seed);
            if (c_cmp->parsed()) return run_check_comparison(cc_u, cc_v, cc_m, cc_n, cc_theta);
            if (c_obs->parsed()) return run_check_obstruction(ob_count, ob_seed, ob_res);
            if (c_bnd->parsed()) return run_check_boundary_identity(cb_config);
        }
    } catch (const CertificateInvalid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const PathStalled& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NewtonDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 3;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

namespace {

int run_check_jacobian(const std::string& backend, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ProblemDims dims{2, 1};
    GeodesicCap cap{2, 1.0471975511965976};
    AbfParams abf;
    abf.E = 0.25;
    abf.A = std::ceil((abf_phi(cap.theta_max, abf) - r0_threshold(dims)) / 1e-3) * 1e-3;

    double worst = 0.0;
    const double fd = 1e-6;
    for (int it = 0; it < count; ++it) {
        if (backend == "radial") {
            RadialGrid grid{cap, 33};
            Vec u(grid.nodes());
            for (int k = 0; k < grid.nodes(); ++k) u(k) = abf_psi(grid.theta(k), abf);
            // smooth low-mode perturbation, positive-definiteness checked
            Vec pert(grid.nodes());
            for (;;) {
                const double a1 = 0.02 * unif(rng), a2 = 0.02 * unif(rng);
                for (int k = 0; k < grid.nodes(); ++k) {
                    const double t = grid.theta(k) / cap.theta_max;
                    pert(k) = a1 * std::cos(3.14159265358979 * t) + a2 * t * t;
                }
                if (pd_scan(grid, u + pert, dims).min_eig_M > 1e-6) break;
            }
            Vec v = u + pert;
            Vec K(grid.unknowns());
            for (int k = 0; k < grid.unknowns(); ++k) K(k) = 0.5;
            const AssemblyOutput A = radial_jacobian(grid, v, K, dims);
            Mat J = Mat(A.jacobian);
            for (int col = 0; col < grid.unknowns(); ++col) {
                Vec vp = v, vm = v;
                vp(col) += fd;
                vm(col) -= fd;
                const Vec dr = (radial_residual(grid, vp, K, dims).residual -
                                radial_residual(grid, vm, K, dims).residual) /
                               (2.0 * fd);
                for (int row = 0; row < grid.unknowns(); ++row) {
                    const double scale = std::max(1.0, std::abs(dr(row)));
                    worst = std::max(worst, std::abs(J(row, col) - dr(row)) / scale);
                }
            }
        } else {
            PolarGrid2D grid{cap, 33, 12};
            Vec v(grid.nodes());
            v(0) = abf_psi(0.0, abf);
            for (int j = 1; j < grid.nr; ++j)
                for (int i = 0; i < grid.nphi; ++i)
                    v(grid.node_id(j, i)) =
                        abf_psi(grid.theta(j), abf) +
                        0.01 * unif(rng) * std::sin(grid.theta(j)) * std::cos(grid.phi(i));
            if (pd_scan(grid, v, dims).min_eig_M <= 1e-6) continue;
            Vec K = Vec::Constant(grid.unknowns(), 0.5);
            const AssemblyOutput A = grid2d_assemble(grid, v, K, dims, true);
            Mat J = Mat(A.jacobian);
            for (int col = 0; col < grid.unknowns(); ++col) {
                Vec vp = v, vm = v;
                vp(col) += fd;
                vm(col) -= fd;
                const Vec dr = (grid2d_assemble(grid, vp, K, dims, false).residual -
                                grid2d_assemble(grid, vm, K, dims, false).residual) /
                               (2.0 * fd);
                for (int row = 0; row < grid.unknowns(); ++row) {
                    const double scale = std::max(1.0, std::abs(dr(row)));
                    worst = std::max(worst, std::abs(J(row, col) - dr(row)) / scale);
                }
            }
        }
    }
    std::cout << "backend: " << backend << "\niterates: " << count
              << "\nworst relative deviation: " << worst << " (tolerance 1e-6)\n";
    return worst < 1e-6 ? 0 : 1;
}

int run_check_boundary_identity(const std::string& config_path) {
    RunConfig cfg = load_config(config_path);
    if (cfg.grid.backend != "radial") {
        std::cerr << "boundary-identity check runs on the radial backend\n";
        return 3;
    }
    PreparedProblem prep = prepare_problem(cfg);
    if (!prep.certificate.valid()) {
        std::cerr << "boundary-identity: certificate invalid\n";
        return 1;
    }
    const SolveReport rep = continuity_solve(prep.radial_problem, cfg.solver);
    const BoundaryIdentityReport bir =
        boundary_identity_check(prep.radial_problem.grid, rep.u_full, prep.abf, cfg.dims);
    const double h = prep.radial_problem.grid.h();
    std::cout << "lhs (u_TT - psi_TT) = " << bir.lhs << "\nrhs cot * d(u-psi) = " << bir.rhs
              << "\ndefect = " << bir.defect << " (10 h^2 = " << 10 * h * h
              << ")\nimplied h_TT / cot(theta_max) = " << bir.h_sign_ratio << '\n';
    return bir.defect <= 10 * h * h ? 0 : 1;
}

}  // namespace

}  // namespace gkps
