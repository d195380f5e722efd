#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gkps/io.hpp"

using namespace gkps;

namespace {

RunConfig sample_config() {
    RunConfig cfg;
    cfg.dims = ProblemDims{2, 1};
    cfg.theta_max = 1.0471975511965976;
    cfg.K.kind = "scaled_subsolution";
    cfg.K.value = 0.5;
    cfg.boundary.kind = "abf_auto";
    cfg.boundary.E = 0.25;
    cfg.grid.backend = "radial";
    cfg.grid.nr = 33;
    cfg.outputs.field_csv = "/tmp/gkps_io_u.csv";
    cfg.outputs.report_json = "/tmp/gkps_io_rep.json";
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config round trip") {
    const RunConfig cfg = sample_config();
    const RunConfig back = parse_config(serialize_config(cfg));
    CHECK(back == cfg);

    RunConfig table = cfg;
    table.K.kind = "table";
    table.K.path = "/tmp/k.csv";
    table.grid.backend = "polar2d";
    table.grid.nphi = 32;
    table.solver.newton_tol = 1e-8;
    CHECK(parse_config(serialize_config(table)) == table);
}

TEST_CASE("config validation errors") {
    Json j = serialize_config(sample_config());
    j["K"]["kind"] = "mystery";
    CHECK_THROWS_AS(parse_config(j), std::invalid_argument);
    Json j2 = serialize_config(sample_config());
    j2["cap"]["theta_max"] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(parse_config(j2), std::invalid_argument);
}

TEST_CASE("field CSV round trips bitwise") {
    GeodesicCap cap{2, 1.0};
    RadialGrid grid{cap, 17};
    Vec u(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k)
        u(k) = -1.3 + 0.017 * k + 1e-13 * (k % 3);  // exercise full precision
    const std::string path = "/tmp/gkps_roundtrip.csv";
    write_field_csv(path, grid, u, ProblemDims{2, 1});
    const Vec back = read_field_csv(path, grid);
    for (int k = 0; k < grid.nodes(); ++k) CHECK(back(k) == u(k));

    // 2D variant
    PolarGrid2D pg{cap, 7, 8};
    Vec up(pg.nodes());
    for (int k = 0; k < pg.nodes(); ++k) up(k) = -1.0 + 0.003 * k;
    write_field_csv(path, pg, up, ProblemDims{2, 1});
    const Vec back2 = read_field_csv(path, pg);
    for (int k = 0; k < pg.nodes(); ++k) CHECK(back2(k) == up(k));
}

TEST_CASE("solve pipeline writes a deterministic report") {
    RunConfig cfg = sample_config();
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_missing_config.json"}) == 3);
    {
        std::ofstream out("/tmp/gkps_cfg.json");
        out << serialize_config(cfg).dump(2) << '\n';
    }
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_cfg.json"}) == 0);
    const std::string rep1 = slurp(cfg.outputs.report_json);
    const std::string csv1 = slurp(cfg.outputs.field_csv);
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_cfg.json"}) == 0);
    CHECK(rep1 == slurp(cfg.outputs.report_json));
    CHECK(csv1 == slurp(cfg.outputs.field_csv));

    // thread count must not change a single byte
    setenv("GK_THREADS", "3", 1);
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_cfg.json"}) == 0);
    unsetenv("GK_THREADS");
    CHECK(rep1 == slurp(cfg.outputs.report_json));
    CHECK(csv1 == slurp(cfg.outputs.field_csv));

    const Json j = Json::parse(rep1);
    CHECK(j.at("status") == "converged");
    CHECK(j.at("final_residual").get<double>() <= 1e-10);
    CHECK(j.at("diagnostics").at("flags").at("all").get<bool>());
    CHECK(j.at("version") == kVersion);
    CHECK(j.at("config").at("K").at("value").get<double>() == 0.5);
}

TEST_CASE("a u = psi run reports a zero gap to the boundary function") {
    RunConfig cfg = sample_config();
    cfg.K.value = 1.0;
    cfg.outputs.field_csv = "/tmp/gkps_io_u1.csv";
    cfg.outputs.report_json = "/tmp/gkps_io_rep1.json";
    {
        std::ofstream out("/tmp/gkps_cfg1.json");
        out << serialize_config(cfg).dump(2) << '\n';
    }
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_cfg1.json"}) == 0);
    const Json j = Json::parse(slurp(cfg.outputs.report_json));
    CHECK(j.at("diagnostics").at("u_minus_psi_min").get<double>() == 0.0);
}

TEST_CASE("stalled paths surface in the report") {
    RunConfig cfg = sample_config();
    cfg.K.kind = "constant";
    cfg.K.value = 0.5;
    cfg.solver.max_newton = 1;
    cfg.solver.dt_min = 1e-3;
    cfg.outputs.report_json = "/tmp/gkps_io_stall.json";
    cfg.outputs.field_csv = "";
    {
        std::ofstream out("/tmp/gkps_cfg2.json");
        out << serialize_config(cfg).dump(2) << '\n';
    }
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_cfg2.json"}) == 2);
    const Json j = Json::parse(slurp(cfg.outputs.report_json));
    CHECK(j.at("status") == "path_stalled");
    CHECK(j.at("last_accepted_t").get<double>() < 1.0);
}

TEST_CASE("abf subcommand certifies the reference construction") {
    CHECK(run_cli({"abf", "--m", "2", "--n", "1", "--theta-max", "1.0472", "--k",
                   "constant:0.5", "--out", "/tmp/gkps_abf.json"}) == 0);
    const Json j = Json::parse(slurp("/tmp/gkps_abf.json"));
    CHECK(j.at("certificate").at("valid").get<bool>());
    CHECK(j.at("abf").at("E").get<double>() > 0.0);
    CHECK(j.at("abf").at("A").get<double>() > 0.0);
    CHECK(j.at("certificate").at("sup_psi").get<double>() <=
          j.at("certificate").at("r0").get<double>());
}

TEST_CASE("solve with m < n points at the duality reduction") {
    RunConfig cfg = sample_config();
    cfg.dims = ProblemDims{1, 2};
    {
        std::ofstream out("/tmp/gkps_cfg3.json");
        out << serialize_config(cfg).dump(2) << '\n';
    }
    CHECK(run_cli({"solve", "--config", "/tmp/gkps_cfg3.json"}) == 1);
}

TEST_CASE("usage errors exit with code 3") {
    CHECK(run_cli({"frobnicate"}) == 3);
    CHECK(run_cli({"solve", "--no-such-flag", "x"}) == 3);
    CHECK(run_cli({}) == 3);
}

TEST_CASE("constant boundary data is rejected as inadmissible") {
    RunConfig cfg = sample_config();
    cfg.K.kind = "constant";
    cfg.K.value = 0.5;
    cfg.boundary.kind = "constant";
    cfg.boundary.value = -1.0;
    cfg.outputs.report_json = "/tmp/gkps_io_const.json";
    {
        std::ofstream out("/tmp/gkps_cfg4.json");
        out << serialize_config(cfg).dump(2) << '\n';
    }
    CHECK(run_cli({"solve", "--config", "/tmp/gkps_cfg4.json"}) == 1);
    const Json j = Json::parse(slurp("/tmp/gkps_io_const.json"));
    CHECK(j.at("status") == "certificate_invalid");
}

TEST_CASE("forward subcommand evaluates the constant-u reference") {
    CHECK(run_cli({"forward", "--m", "2", "--n", "1", "--c", "0.6931471805599453", "--out",
                   "/tmp/gkps_fwd.json"}) == 0);
    const Json j = Json::parse(slurp("/tmp/gkps_fwd.json"));
    CHECK(j.at("K").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("K tables round trip through manufacture and solve") {
    CHECK(run_cli({"manufacture", "--m", "2", "--n", "1", "--theta-max", "1.0471975511965976",
                   "--nr", "33", "--out-k", "/tmp/gkps_ktab.csv",
                   "--out", "/tmp/gkps_man.json"}) == 0);
    const Json man = Json::parse(slurp("/tmp/gkps_man.json"));
    RunConfig cfg = sample_config();
    cfg.K.kind = "table";
    cfg.K.path = "/tmp/gkps_ktab.csv";
    cfg.boundary.kind = "abf_params";
    cfg.boundary.E = man.at("abf").at("E").get<double>();
    cfg.boundary.scale_f = man.at("abf").at("scale_f").get<double>();
    cfg.boundary.A = man.at("abf").at("A").get<double>();
    cfg.outputs.field_csv = "/tmp/gkps_io_u2.csv";
    cfg.outputs.report_json = "/tmp/gkps_io_rep2.json";
    {
        std::ofstream out("/tmp/gkps_cfg5.json");
        out << serialize_config(cfg).dump(2) << '\n';
    }
    REQUIRE(run_cli({"solve", "--config", "/tmp/gkps_cfg5.json"}) == 0);
    const Json j = Json::parse(slurp(cfg.outputs.report_json));
    CHECK(j.at("status") == "converged");
    // the manufactured data has a zero subsolution margin, so the discrete
    // solution may dip below psi at truncation size; the hard flags hold
    CHECK(j.at("diagnostics").at("flags").at("boundary_max").get<bool>());
    CHECK(j.at("diagnostics").at("flags").at("below_r0").get<bool>());
    CHECK(j.at("diagnostics").at("min_eig_M").get<double>() > 0.0);
    CHECK(j.at("diagnostics").at("u_minus_psi_min").get<double>() > -1e-3);
}
