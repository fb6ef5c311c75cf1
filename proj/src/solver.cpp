#include "degenlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace degen {

std::string to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::periodic: return "periodic";
        case BoundaryCondition::dirichlet_exact: return "dirichlet_exact";
        case BoundaryCondition::neumann_zero: return "neumann_zero";
    }
    return "?";
}

StepFailure::StepFailure(double r)
    : std::runtime_error("step failure: Newton residual " + std::to_string(r) +
                         " above tolerance after max iterations"),
      last_residual(r) {}

PositivityFailure::PositivityFailure()
    : std::runtime_error("positivity failure: iterate cannot stay above the floor") {}

Field Trajectory::field(int k) const { return Field(geom, states[static_cast<std::size_t>(k)], times[static_cast<std::size_t>(k)]); }

double Trajectory::min_value() const {
    double m = states[0][0];
    for (const auto& s : states) m = std::min(m, *std::min_element(s.begin(), s.end()));
    return m;
}

double Trajectory::max_value() const {
    double m = states[0][0];
    for (const auto& s : states) m = std::max(m, *std::max_element(s.begin(), s.end()));
    return m;
}

namespace {

// Face weights s(r_i +- h/2) cached per geometry instance.
struct FaceWeights {
    std::vector<double> lo, hi, center;
    explicit FaceWeights(const ModelGeometry& g) {
        const int n = g.grid_points();
        lo.resize(static_cast<std::size_t>(n));
        hi.resize(static_cast<std::size_t>(n));
        center.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            lo[static_cast<std::size_t>(i)] = g.weight(g.node(i) - 0.5 * g.spacing());
            hi[static_cast<std::size_t>(i)] = g.weight(g.node(i) + 0.5 * g.spacing());
            center[static_cast<std::size_t>(i)] = g.weight(g.node(i));
        }
    }
};

// Backward-Euler residual  v - dt Lap F(v) - u  under the configured rows.
void euler_residual(const ModelGeometry& g, const FaceWeights& w, const Nonlinearity& nl,
                    BoundaryCondition bc, double dt, const std::vector<double>& u,
                    const std::vector<double>& v, double bc_lo, double bc_hi,
                    std::vector<double>& out, std::vector<double>& fv) {
    const int n = g.grid_points();
    const double h2 = g.spacing() * g.spacing();
    for (int i = 0; i < n; ++i) fv[static_cast<std::size_t>(i)] = nl.F(v[static_cast<std::size_t>(i)]);

    auto interior = [&](int i, int im, int ip) {
        const double lap = (w.hi[static_cast<std::size_t>(i)] * (fv[static_cast<std::size_t>(ip)] - fv[static_cast<std::size_t>(i)]) -
                            w.lo[static_cast<std::size_t>(i)] * (fv[static_cast<std::size_t>(i)] - fv[static_cast<std::size_t>(im)])) /
                           (w.center[static_cast<std::size_t>(i)] * h2);
        out[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] - dt * lap - u[static_cast<std::size_t>(i)];
    };

    if (bc == BoundaryCondition::periodic) {
        for (int i = 0; i < n; ++i) interior(i, (i + n - 1) % n, (i + 1) % n);
        return;
    }
    for (int i = 1; i + 1 < n; ++i) interior(i, i - 1, i + 1);
    if (bc == BoundaryCondition::dirichlet_exact) {
        out[0] = v[0] - bc_lo;
        out[static_cast<std::size_t>(n - 1)] = v[static_cast<std::size_t>(n - 1)] - bc_hi;
    } else { // zero-flux outer faces
        out[0] = v[0] - dt * w.hi[0] * (fv[1] - fv[0]) / (w.center[0] * h2) - u[0];
        const std::size_t l = static_cast<std::size_t>(n - 1);
        out[l] = v[l] + dt * w.lo[l] * (fv[l] - fv[l - 1]) / (w.center[l] * h2) - u[l];
    }
}

double inf_norm(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// Thomas solve of a tridiagonal system; diagonals are overwritten.
void solve_tridiag(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                   std::vector<double>& rhs) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

// Cyclic tridiagonal solve via Sherman-Morrison.
void solve_cyclic(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                  std::vector<double> rhs, std::vector<double>& x) {
    const std::size_t n = b.size();
    const double alpha = c[n - 1]; // coupling (n-1) -> 0
    const double beta = a[0];      // coupling 0 -> (n-1)
    const double gamma = -b[0];
    std::vector<double> bb = b;
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;

    std::vector<double> b1 = bb, a1 = a, c1 = c, y = rhs;
    solve_tridiag(a1, b1, c1, y);
    std::vector<double> b2 = bb, a2 = a, c2 = c, z = u;
    solve_tridiag(a2, b2, c2, z);

    const double vy = y[0] + beta / gamma * y[n - 1];
    const double vz = z[0] + beta / gamma * z[n - 1];
    const double factor = vy / (1.0 + vz);
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
}

} // namespace

Field step(const Field& u, const Nonlinearity& nl, const SolverConfig& cfg, double dt,
           const ExactSolution* exact) {
    const ModelGeometry& g = *u.geom;
    const int n = g.grid_points();
    const FaceWeights w(g);
    const double h2 = g.spacing() * g.spacing();
    const double t_new = u.time + dt;

    if (cfg.bc == BoundaryCondition::dirichlet_exact && !exact)
        throw std::invalid_argument("step: dirichlet_exact needs a reference solution");
    const double bc_lo = exact ? (*exact)(g.node(0), t_new) : 0.0;
    const double bc_hi = exact ? (*exact)(g.node(n - 1), t_new) : 0.0;

    std::vector<double> v = u.values;
    for (double& x : v) x = std::max(x, cfg.positivity_floor);
    std::vector<double> res(static_cast<std::size_t>(n)), fv(static_cast<std::size_t>(n));
    std::vector<double> trial(static_cast<std::size_t>(n)), res_trial(static_cast<std::size_t>(n));

    euler_residual(g, w, nl, cfg.bc, dt, u.values, v, bc_lo, bc_hi, res, fv);
    double rnorm = inf_norm(res);

    for (int it = 0; it < cfg.newton_max_iter; ++it) {
        if (rnorm <= cfg.newton_tol) return Field(u.geom, v, t_new);

        // Tridiagonal Jacobian I - dt Lap diag(F'(v)).
        std::vector<double> lo(static_cast<std::size_t>(n), 0.0), di(static_cast<std::size_t>(n), 1.0),
            up(static_cast<std::size_t>(n), 0.0);
        auto fill_interior = [&](int i, int im, int ip, double* corner_lo, double* corner_up) {
            const double ci = dt / (w.center[static_cast<std::size_t>(i)] * h2);
            const double dlo = ci * w.lo[static_cast<std::size_t>(i)] * nl.Fp(v[static_cast<std::size_t>(im)]);
            const double dup = ci * w.hi[static_cast<std::size_t>(i)] * nl.Fp(v[static_cast<std::size_t>(ip)]);
            di[static_cast<std::size_t>(i)] =
                1.0 + ci * (w.lo[static_cast<std::size_t>(i)] + w.hi[static_cast<std::size_t>(i)]) * nl.Fp(v[static_cast<std::size_t>(i)]);
            if (corner_lo)
                *corner_lo = -dlo;
            else
                lo[static_cast<std::size_t>(i)] = -dlo;
            if (corner_up)
                *corner_up = -dup;
            else
                up[static_cast<std::size_t>(i)] = -dup;
        };

        std::vector<double> delta;
        if (cfg.bc == BoundaryCondition::periodic) {
            double corner_last_up = 0.0, corner_first_lo = 0.0;
            for (int i = 0; i < n; ++i) {
                const int im = (i + n - 1) % n, ip = (i + 1) % n;
                fill_interior(i, im, ip, i == 0 ? &corner_first_lo : nullptr,
                              i == n - 1 ? &corner_last_up : nullptr);
            }
            std::vector<double> rhs = res;
            for (double& x : rhs) x = -x;
            lo[0] = corner_first_lo;      // A(0, n-1)
            up[static_cast<std::size_t>(n - 1)] = corner_last_up; // A(n-1, 0)
            solve_cyclic(lo, di, up, rhs, delta);
        } else {
            for (int i = 1; i + 1 < n; ++i) fill_interior(i, i - 1, i + 1, nullptr, nullptr);
            if (cfg.bc == BoundaryCondition::dirichlet_exact) {
                di[0] = 1.0;
                up[0] = 0.0;
                di[static_cast<std::size_t>(n - 1)] = 1.0;
                lo[static_cast<std::size_t>(n - 1)] = 0.0;
            } else {
                const double c0 = dt / (w.center[0] * h2);
                di[0] = 1.0 + c0 * w.hi[0] * nl.Fp(v[0]);
                up[0] = -c0 * w.hi[0] * nl.Fp(v[1]);
                const std::size_t l = static_cast<std::size_t>(n - 1);
                const double cl = dt / (w.center[l] * h2);
                di[l] = 1.0 + cl * w.lo[l] * nl.Fp(v[l]);
                lo[l] = -cl * w.lo[l] * nl.Fp(v[l - 1]);
            }
            delta = res;
            for (double& x : delta) x = -x;
            solve_tridiag(lo, di, up, delta);
        }

        // Damping: halve until the residual decreases and positivity holds.
        double lambda = 1.0;
        bool accepted = false;
        bool positivity_blocked = true;
        for (int half = 0; half < 40; ++half, lambda *= 0.5) {
            for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + lambda * delta[static_cast<std::size_t>(i)];
            if (*std::min_element(trial.begin(), trial.end()) < cfg.positivity_floor) continue;
            positivity_blocked = false;
            euler_residual(g, w, nl, cfg.bc, dt, u.values, trial, bc_lo, bc_hi, res_trial, fv);
            const double rt = inf_norm(res_trial);
            if (rt < rnorm) {
                v = trial;
                res = res_trial;
                rnorm = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (positivity_blocked) throw PositivityFailure();
            throw StepFailure(rnorm);
        }
    }
    if (rnorm <= cfg.newton_tol) return Field(u.geom, v, u.time + dt);
    throw StepFailure(rnorm);
}

namespace {

Field advance(const Field& u, const Nonlinearity& nl, const SolverConfig& cfg, double dt,
              const ExactSolution* exact, int depth) {
    try {
        return step(u, nl, cfg, dt, exact);
    } catch (const std::runtime_error&) {
        if (depth >= 10) throw;
        const Field half = advance(u, nl, cfg, 0.5 * dt, exact, depth + 1);
        return advance(half, nl, cfg, 0.5 * dt, exact, depth + 1);
    }
}

} // namespace

Trajectory solve(const Field& u0, double horizon, const Nonlinearity& nl,
                 const SolverConfig& cfg, const ExactSolution* exact) {
    if (!(horizon > 0.0)) throw std::invalid_argument("solve: horizon must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solve: dt must be positive");
    if (u0.min_value() <= 0.0) throw std::invalid_argument("solve: initial data must be positive");

    const long n_steps = std::max(1L, std::lround(std::ceil(horizon / cfg.dt - 1e-12)));
    Trajectory traj;
    traj.geom = u0.geom;
    traj.times.push_back(u0.time);
    traj.states.push_back(u0.values);

    Field u = u0;
    const double t_end = u0.time + horizon;
    for (long k = 0; k < n_steps; ++k) {
        const double target = (k + 1 == n_steps) ? t_end : u0.time + (k + 1) * cfg.dt;
        u = advance(u, nl, cfg, target - u.time, exact, 0);
        u.time = target;
        if ((k + 1) % cfg.snapshot_stride == 0 || k + 1 == n_steps) {
            traj.times.push_back(u.time);
            traj.states.push_back(u.values);
        }
    }
    return traj;
}

std::vector<double> residual(const Trajectory& traj, const Nonlinearity& nl) {
    if (traj.snapshots() < 3) throw std::invalid_argument("residual: need at least 3 snapshots");
    const ModelGeometry& g = *traj.geom;
    const int n = g.grid_points();
    std::vector<double> out;
    for (int k = 1; k + 1 < traj.snapshots(); ++k) {
        Field fk = traj.field(k);
        for (int i = 0; i < n; ++i) fk.values[static_cast<std::size_t>(i)] = nl.F(fk.values[static_cast<std::size_t>(i)]);
        const Field lap = laplace_beltrami(fk);
        const double dt2 = traj.times[static_cast<std::size_t>(k + 1)] - traj.times[static_cast<std::size_t>(k - 1)];
        double worst = 0.0;
        const int i_lo = g.periodic() ? 0 : 1;
        const int i_hi = g.periodic() ? n : n - 1;
        for (int i = i_lo; i < i_hi; ++i) {
            const double ut =
                (traj.states[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(i)] -
                 traj.states[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)]) / dt2;
            worst = std::max(worst, std::abs(ut - lap.values[static_cast<std::size_t>(i)]));
        }
        out.push_back(worst);
    }
    return out;
}

Trajectory sample_exact(const ExactSolution& exact, GeometryPtr geom, double t_start,
                        double horizon, int snapshots) {
    if (snapshots < 2) throw std::invalid_argument("sample_exact: need >= 2 snapshots");
    Trajectory traj;
    traj.geom = geom;
    for (int k = 0; k < snapshots; ++k) {
        const double t = t_start + horizon * k / (snapshots - 1);
        Field f = exact.sample(geom, t);
        traj.times.push_back(t);
        traj.states.push_back(std::move(f.values));
    }
    return traj;
}

double linf_relative_error(const Trajectory& traj, const ExactSolution& exact) {
    double worst = 0.0;
    for (int k = 0; k < traj.snapshots(); ++k)
        for (int i = 0; i < traj.geom->grid_points(); ++i) {
            const double ue = exact(traj.geom->node(i), traj.times[static_cast<std::size_t>(k)]);
            worst = std::max(worst, std::abs(traj.states[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] - ue) / std::abs(ue));
        }
    return worst;
}

double weighted_mass(const Field& f) {
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += f.geom->weight(f.geom->node(i)) * f.values[static_cast<std::size_t>(i)];
    return s * f.geom->spacing();
}

namespace {

double fit_slope(const std::vector<double>& hs, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(hs.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(hs[static_cast<std::size_t>(i)]), y = std::log(errs[static_cast<std::size_t>(i)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

OrderFit observed_spatial_order(const ExactSolution& exact, const Nonlinearity& nl,
                                const RefinementStudy& study, const std::vector<int>& resolutions,
                                double dt_scale) {
    if (resolutions.size() < 3) throw std::invalid_argument("observed_spatial_order: need >= 3 resolutions");
    OrderFit fit;
    std::vector<double> hs;
    for (int N : resolutions) {
        GeometryPtr geom = study.make_geometry(N);
        SolverConfig cfg;
        cfg.bc = study.bc;
        cfg.dt = dt_scale * geom->spacing() * geom->spacing();
        const Field u0 = exact.sample(geom, study.t_start);
        const Trajectory traj = solve(u0, study.horizon, nl, cfg, &exact);
        fit.errors.push_back(linf_relative_error(traj, exact));
        hs.push_back(geom->spacing());
    }
    fit.exact = *std::max_element(fit.errors.begin(), fit.errors.end()) < 1e-13;
    fit.order = fit.exact ? 0.0 : fit_slope(hs, fit.errors);
    return fit;
}

OrderFit observed_temporal_order(const ExactSolution& exact, const Nonlinearity& nl,
                                 const RefinementStudy& study, int grid_points,
                                 const std::vector<double>& dts) {
    if (dts.size() < 3) throw std::invalid_argument("observed_temporal_order: need >= 3 steps");
    OrderFit fit;
    GeometryPtr geom = study.make_geometry(grid_points);
    const Field u0 = exact.sample(geom, study.t_start);
    for (double dt : dts) {
        SolverConfig cfg;
        cfg.bc = study.bc;
        cfg.dt = dt;
        const Trajectory traj = solve(u0, study.horizon, nl, cfg, &exact);
        fit.errors.push_back(linf_relative_error(traj, exact));
    }
    fit.exact = *std::max_element(fit.errors.begin(), fit.errors.end()) < 1e-13;
    fit.order = fit.exact ? 0.0 : fit_slope(dts, fit.errors);
    return fit;
}

void export_trajectory(const Trajectory& traj, const std::string& out_dir,
                       const std::string& config_echo) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::FILE* mf = std::fopen((fs::path(out_dir) / "manifest.txt").string().c_str(), "w");
    if (!mf) throw std::runtime_error("export_trajectory: cannot open manifest");
    std::fprintf(mf, "degenlab trajectory\nsnapshots: %d\ngrid_points: %d\n", traj.snapshots(),
                 traj.geom->grid_points());
    std::fprintf(mf, "geometry: %s\n", to_string(traj.geom->kind()).c_str());
    for (int k = 0; k < traj.snapshots(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "snap_%05d.csv", k);
        std::fprintf(mf, "snapshot: %s t=%.17g\n", name, traj.times[static_cast<std::size_t>(k)]);
        Field f = traj.field(k);
        // column label is `u` for solution snapshots
        std::FILE* fp = std::fopen((fs::path(out_dir) / name).string().c_str(), "w");
        if (!fp) throw std::runtime_error("export_trajectory: cannot open snapshot file");
        std::fputs("r,u\n", fp);
        for (int i = 0; i < f.size(); ++i)
            std::fprintf(fp, "%.17g,%.17g\n", f.geom->node(i), f.values[static_cast<std::size_t>(i)]);
        std::fclose(fp);
    }
    std::fprintf(mf, "[config]\n%s", config_echo.c_str());
    std::fclose(mf);
}

} // namespace degen
