#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "degenlab/exact_solutions.hpp"
#include "degenlab/geometry.hpp"
#include "degenlab/nonlinearity.hpp"

namespace degen {

enum class BoundaryCondition { periodic, dirichlet_exact, neumann_zero };

std::string to_string(BoundaryCondition bc);

struct SolverConfig {
    double dt = 1e-3;
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    BoundaryCondition bc = BoundaryCondition::periodic;
    double positivity_floor = 1e-12;
    int snapshot_stride = 1;
};

/// Newton failed to reach the residual tolerance; carries the last residual.
struct StepFailure : std::runtime_error {
    explicit StepFailure(double r);
    double last_residual;
};

/// Damping could not keep the iterate above the positivity floor.
struct PositivityFailure : std::runtime_error {
    PositivityFailure();
};

/// Time-stamped positive states on a fixed geometry.
struct Trajectory {
    GeometryPtr geom;
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    int snapshots() const { return static_cast<int>(times.size()); }
    Field field(int k) const;
    double min_value() const;
    double max_value() const;
};

/// One backward-Euler step: solves u_new - dt * Lap F(u_new) = u by damped
/// Newton on the tridiagonal Jacobian I - dt * Lap diag(F'(u_new)). The step
/// accepts only residual decrease with all values above the positivity floor.
/// `exact` supplies Dirichlet traces and may be null otherwise.
Field step(const Field& u, const Nonlinearity& nl, const SolverConfig& cfg, double dt,
           const ExactSolution* exact);

/// March to u0.time + horizon. A failing step is retried on halved dt (up to
/// 10 halvings) before giving up. Snapshots are stored every
/// `snapshot_stride` accepted macro steps, always including both endpoints.
Trajectory solve(const Field& u0, double horizon, const Nonlinearity& nl,
                 const SolverConfig& cfg, const ExactSolution* exact = nullptr);

/// Discrete defect |(u_{k+1} - u_{k-1}) / (t_{k+1} - t_{k-1}) - Lap F(u_k)|
/// maximized over interior nodes, one value per interior snapshot.
std::vector<double> residual(const Trajectory& traj, const Nonlinearity& nl);

/// Sample an exact solution on the trajectory grid of a given resolution and
/// snapshot count; used to certify the oracle formulas themselves.
Trajectory sample_exact(const ExactSolution& exact, GeometryPtr geom, double t_start,
                        double horizon, int snapshots);

/// Max over snapshots and nodes of |u - exact| / |exact|.
double linf_relative_error(const Trajectory& traj, const ExactSolution& exact);

/// Weighted mass sum_i s(r_i) u_i h (the discrete volume integral).
double weighted_mass(const Field& f);

struct RefinementStudy {
    std::function<GeometryPtr(int grid_points)> make_geometry;
    BoundaryCondition bc = BoundaryCondition::periodic;
    double t_start = 0.0;
    double horizon = 0.5;
};

struct OrderFit {
    double order = 0.0;       // least-squares slope of log err vs log h (or dt)
    bool exact = false;       // all errors at roundoff; order undefined
    std::vector<double> errors;
};

/// Observed spatial order: solve at each resolution with dt = dt_scale * h^2
/// and fit the error slope against h.
OrderFit observed_spatial_order(const ExactSolution& exact, const Nonlinearity& nl,
                                const RefinementStudy& study, const std::vector<int>& resolutions,
                                double dt_scale);

/// Observed temporal order: fixed fine grid, shrinking dt.
OrderFit observed_temporal_order(const ExactSolution& exact, const Nonlinearity& nl,
                                 const RefinementStudy& study, int grid_points,
                                 const std::vector<double>& dts);

/// One CSV per snapshot (`r,u`) plus a manifest listing times and the
/// caller's config echo.
void export_trajectory(const Trajectory& traj, const std::string& out_dir,
                       const std::string& config_echo);

} // namespace degen
