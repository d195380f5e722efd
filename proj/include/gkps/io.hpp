#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "gkps/solver.hpp"
#include "gkps/verify.hpp"

namespace gkps {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Curvature-data family.  "scaled_subsolution" samples c * F(psi) with the
// solver's own discrete operator so that c = 1 reproduces psi exactly;
// "table" ingests nodal values from CSV.
struct KSpec {
    std::string kind = "constant";  // constant | scaled_subsolution | radial_bump | table
    double value = 1.0;             // constant level or subsolution factor c
    double c1 = 0.0, c2 = 0.0;      // radial bump c1 + c2 cos^2(theta)
    std::string path;               // table CSV
};

struct BoundarySpec {
    std::string kind = "abf_auto";  // abf_auto | abf_params | constant
    double E = -1.0;                // < 0 means the default cos(theta_max)/2
    double scale_f = 1.0;
    double A = 0.0;      // abf_params only
    double value = 0.0;  // constant only
    double headroom = 0.0;
};

struct GridSpec {
    std::string backend = "radial";  // radial | polar2d
    int nr = 129;
    int nphi = 128;
};

struct OutputSpec {
    std::string field_csv;
    std::string report_json;
};

struct RunConfig {
    ProblemDims dims;
    double theta_max = 1.0;
    KSpec K;
    BoundarySpec boundary;
    GridSpec grid;
    ContinuityConfig solver;
    OutputSpec outputs;
};

RunConfig parse_config(const Json& j);
Json serialize_config(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

bool operator==(const KSpec&, const KSpec&);
bool operator==(const BoundarySpec&, const BoundarySpec&);
bool operator==(const GridSpec&, const GridSpec&);
bool operator==(const OutputSpec&, const OutputSpec&);
bool operator==(const RunConfig&, const RunConfig&);

// Nodal field serialization; floats printed with 17 significant digits so
// reloads are bitwise identical.
void write_field_csv(const std::string& path, const RadialGrid& grid, const Vec& u_full,
                     const ProblemDims& dims);
void write_field_csv(const std::string& path, const PolarGrid2D& grid, const Vec& u_full,
                     const ProblemDims& dims);
Vec read_field_csv(const std::string& path, const RadialGrid& grid);
Vec read_field_csv(const std::string& path, const PolarGrid2D& grid);

// K tables: "theta,value" rows at the radial nodes, or "theta,phi,value" at
// the polar nodes.
void write_k_table(const std::string& path, const RadialGrid& grid, const Vec& K_nodes);
void write_k_table(const std::string& path, const PolarGrid2D& grid, const Vec& K_nodes);
Vec read_k_table(const std::string& path, const RadialGrid& grid);
Vec read_k_table(const std::string& path, const PolarGrid2D& grid);

Json serialize_certificate(const AbfCertificate& cert);
Json serialize_diagnostics(const Diagnostics& d);
Json serialize_report(const SolveReport& report, const RunConfig& cfg,
                      const AbfCertificate& cert, const AbfParams& abf);
Json failure_report(const std::string& status, const RunConfig& cfg, double last_t);

// A solve pipeline assembled from a config: boundary function, certificate,
// K data and grids, ready for continuity_solve.
struct PreparedProblem {
    AbfParams abf;
    AbfCertificate certificate;
    bool radial = true;
    RadialProblem radial_problem;
    Polar2DProblem polar_problem;
};
PreparedProblem prepare_problem(const RunConfig& cfg);

// CLI entry point.  Exit codes: 0 success, 1 validation failure, 2 solver
// failure, 3 usage/config error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace gkps
