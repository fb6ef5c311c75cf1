#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degenlab/estimates.hpp"
#include "degenlab/liouville.hpp"
#include "degenlab/solver.hpp"

namespace degen {

enum class AlphaPolicy { fixed, heat_auto, pme_auto };
enum class RunMode { solve, sample_exact };
enum class InitialKind { constant, heat_mode, fde_barenblatt, pme_quadratic_pressure, linear };

/// Fully validated scenario: every run is a pure function of this value plus
/// the seed. Unknown keys anywhere in the file are rejected so scenario files
/// double as archival records.
struct ScenarioConfig {
    // geometry
    GeometryKind gkind = GeometryKind::circle;
    int dim = 1;
    double r_lo = 0.0, r_hi = 1.0;
    int grid_points = 128;
    std::optional<double> circumference;

    // equation
    NonlinearityKind preset = NonlinearityKind::heat;
    double p = 1.0;
    AlphaPolicy alpha_policy = AlphaPolicy::fixed;
    double alpha = 0.0;
    double delta = 1.0;
    std::vector<double> table_s, table_F;

    // initial data
    InitialKind init_kind = InitialKind::constant;
    double t_start = 0.0;
    double const_value = 1.0;
    double A = 2.0, B = 1.0, mu = 1.0;   // heat_mode
    double C = 1.0;                      // fde_barenblatt
    double T_blow = 1.0;                 // pme_quadratic_pressure
    double intercept = 1.0, slope = 0.0; // linear

    // solver
    RunMode mode = RunMode::solve;
    double dt = 1e-3;
    double horizon = 0.5;
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    BoundaryCondition bc = BoundaryCondition::periodic;
    double positivity_floor = 1e-12;
    int snapshot_stride = 1;

    // analysis
    std::optional<ValueRange> range;
    std::vector<Window> windows;
    std::vector<std::string> reports;
    bool detail_csv = false;
    std::optional<SweepSpec> sweep;
    std::uint64_t seed = 1;

    // canonical echo of the fully resolved file and its content hash
    std::string resolved_json;
    std::string config_hash;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

GeometryPtr build_geometry(const ScenarioConfig& cfg);
Nonlinearity build_nonlinearity(const ScenarioConfig& cfg);
std::optional<ExactSolution> build_exact(const ScenarioConfig& cfg);
Field build_initial(const ScenarioConfig& cfg, GeometryPtr geom);
Trajectory build_trajectory(const ScenarioConfig& cfg);

/// Exit-code contract: 0 = checks pass, 2 = checks ran and failed
/// (configuration and runtime errors surface as exceptions; the CLI maps them
/// to exit 1).
struct RunOutcome {
    int exit_code = 0;
    std::string summary;
};

RunOutcome run_check(const ScenarioConfig& cfg, const std::string& out_dir);
RunOutcome run_lemma(double a, double b, int n, long samples, std::uint64_t seed,
                     const std::string& out_dir);
RunOutcome run_solve(const ScenarioConfig& cfg, const std::string& out_dir);
/// Window estimates dispatch to at most `jobs` concurrent workers; the
/// document order never depends on the pool size.
RunOutcome run_verify(const ScenarioConfig& cfg, const std::string& out_dir, int jobs = 1);
RunOutcome run_sweep(const ScenarioConfig& cfg, const std::string& out_dir);

} // namespace degen
