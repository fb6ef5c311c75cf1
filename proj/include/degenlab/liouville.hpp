#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "degenlab/estimates.hpp"
#include "degenlab/solver.hpp"

namespace degen {

enum class SweepTheorem { fde, pme_n1 };

/// Window schedule T(R) = coeff * R^exponent. The growth gauge of the
/// Liouville argument is realized only through this schedule; the fast
/// diffusion sweep defaults to T = R^2 and the porous medium sweep to T = R.
struct SweepSchedule {
    double coeff = 1.0;
    double exponent = 2.0;
    double T(double R) const;
};

struct SweepSpec {
    SweepTheorem theorem = SweepTheorem::fde;
    double p = 0.5;
    double delta = 1.0; // pme only
    double x0 = 0.0;
    double t0 = 0.0;
    std::vector<double> R_list;
    SweepSchedule schedule;
};

struct SweepRow {
    double R = 0.0;
    double T = 0.0;
    double M_double = 0.0;   // sup of u over the double cube Q_{2R,2T}
    double rhs = 0.0;        // certified center bound, constants aside
    double lhs_center = 0.0; // actual |grad u|/u at (x0, t0)
    bool decreasing = false; // rhs below the previous row's
};

struct SweepTable {
    std::vector<SweepRow> rows;
    bool rhs_decreasing = false; // strictly, across the whole sweep
};

/// Supplies the solution on the double cube Q(2R, 2T); restrictions of one
/// global solution are fine.
using WindowSolutionGenerator =
    std::function<std::shared_ptr<const Trajectory>(double R, double T)>;

/// Liouville mechanics: for each R, take M on the double cube, evaluate the
/// theorem's bound for the center point with that M, and record whether the
/// bound sequence decreases as the windows grow.
SweepTable liouville_sweep(const WindowSolutionGenerator& generator, const SweepSpec& spec);

} // namespace degen
