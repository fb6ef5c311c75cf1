#include "degenlab/liouville.hpp"

#include <cmath>
#include <stdexcept>

namespace degen {

double SweepSchedule::T(double R) const { return coeff * std::pow(R, exponent); }

SweepTable liouville_sweep(const WindowSolutionGenerator& generator, const SweepSpec& spec) {
    if (spec.R_list.empty()) throw std::invalid_argument("liouville_sweep: empty R list");

    SweepTable table;
    table.rhs_decreasing = true;
    double prev_rhs = 0.0;

    for (std::size_t idx = 0; idx < spec.R_list.size(); ++idx) {
        const double R = spec.R_list[idx];
        const double T = spec.schedule.T(R);
        const std::shared_ptr<const Trajectory> traj = generator(R, T);
        if (!traj || traj->snapshots() < 2)
            throw std::invalid_argument("liouville_sweep: generator returned no usable trajectory");

        const double tol = 1e-9 * (std::abs(spec.t0) + T);
        if (traj->times.front() > spec.t0 - 2.0 * T + tol || traj->times.back() < spec.t0 - tol)
            throw std::invalid_argument("window error: generator window smaller than Q(2R, 2T)");

        const ModelGeometry& geom = *traj->geom;
        const int center = geom.nearest_node(spec.x0);
        const std::vector<int> ball = geodesic_ball(geom, center, 2.0 * R);

        SweepRow row;
        row.R = R;
        row.T = T;

        row.M_double = 0.0;
        for (int s = 0; s < traj->snapshots(); ++s) {
            const double t = traj->times[s];
            if (t < spec.t0 - 2.0 * T - tol || t > spec.t0 + tol) continue;
            for (int i : ball) row.M_double = std::max(row.M_double, traj->states[s][i]);
        }

        // |grad u|/u at the fixed center point, from the snapshot nearest t0.
        int s0 = 0;
        for (int s = 0; s < traj->snapshots(); ++s)
            if (std::abs(traj->times[s] - spec.t0) < std::abs(traj->times[s0] - spec.t0)) s0 = s;
        const Field grad = gradient_r(traj->field(s0));
        const double u0 = traj->states[s0][center];
        row.lhs_center = std::abs(grad.values[center]) / u0;

        if (spec.theorem == SweepTheorem::fde) {
            const double k = geom.ricci_lower_bound();
            row.rhs = 1.0 / R + std::pow(row.M_double, (1.0 - spec.p) / 2.0) / std::sqrt(T) +
                      std::sqrt(k);
        } else {
            // The theorem bounds |grad G|/(alpha - G); convert to |grad u|/u
            // units at the center via (alpha - G(u0)) / (p u0^(p-1)).
            const double p = spec.p, d = spec.delta;
            const double Mp = std::pow(row.M_double, p - 1.0);
            const double alpha = p / (p - 1.0) * Mp * (1.0 + d);
            const double G0 = p / (p - 1.0) * std::pow(u0, p - 1.0);
            const double conv = (alpha - G0) / (p * std::pow(u0, p - 1.0));
            row.rhs = ((1.0 + d) / (d * R) + 1.0 / std::sqrt(Mp * d * T)) * conv;
        }

        row.decreasing = idx > 0 && row.rhs < prev_rhs;
        if (idx > 0 && !row.decreasing) table.rhs_decreasing = false;
        prev_rhs = row.rhs;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace degen
