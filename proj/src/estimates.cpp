#include "degenlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace degen {

HarnackFields harnack_fields(const Field& u, const Nonlinearity& nl, double alpha, int n) {
    if (n < 1) throw std::invalid_argument("harnack_fields: dimension must be >= 1");
    const int N = u.size();
    HarnackFields hf;
    hf.alpha = alpha;
    hf.time = u.time;
    hf.g.resize(N);
    hf.gprime.resize(N);
    hf.gsecond.resize(N);
    hf.grad_g.resize(N);
    hf.w.resize(N);
    hf.f.resize(N);
    hf.b.resize(N);
    hf.L.resize(N);
    hf.L1_signed.resize(N);

    const Field du = gradient_r(u);
    for (int i = 0; i < N; ++i) {
        const double ui = u.values[i];
        const double g = nl.G(ui);
        const double ag = alpha - g;
        if (!(ag > 0.0)) {
            std::ostringstream msg;
            msg << "harnack_fields: condition (B) fails at node " << i << " (alpha - G(u) = " << ag << ")";
            throw std::domain_error(msg.str());
        }
        const double gp = nl.Fp(ui);
        const double b = nl.curvature_ratio(ui);
        const double grad_g = gp / ui * du.values[i]; // chain rule: G'(u) du/dr
        const double f = 2.0 * gp / ag;
        hf.g[i] = g;
        hf.gprime[i] = gp;
        hf.b[i] = b;
        hf.gsecond[i] = b * gp;
        hf.grad_g[i] = grad_g;
        hf.w[i] = grad_g * grad_g / (ag * ag);
        hf.f[i] = f;
        hf.L[i] = ag * (2.0 * (1.0 + b) - (n - 1) * b * b / f);
        hf.L1_signed[i] = 2.0 - f + b;
    }
    return hf;
}

double identity_check_g(const Trajectory& traj, const Nonlinearity& nl) {
    if (traj.snapshots() < 3) throw std::invalid_argument("identity_check_g: need >= 3 snapshots");
    const ModelGeometry& geom = *traj.geom;
    const int N = geom.grid_points();
    const int i_lo = geom.periodic() ? 0 : 1;
    const int i_hi = geom.periodic() ? N : N - 1;

    auto g_field = [&](int k) {
        Field f = traj.field(k);
        for (double& v : f.values) v = nl.G(v);
        return f;
    };

    double worst = 0.0;
    for (int k = 1; k + 1 < traj.snapshots(); ++k) {
        const Field u = traj.field(k);
        const Field g = g_field(k);
        const Field gm = g_field(k - 1);
        const Field gp = g_field(k + 1);
        const Field lap_g = laplace_beltrami(g);
        const Field du = gradient_r(u);
        const double dt2 = traj.times[k + 1] - traj.times[k - 1];

        for (int i = i_lo; i < i_hi; ++i) {
            const double ui = u.values[i];
            const double fp = nl.Fp(ui);
            const double grad_g = fp / ui * du.values[i];
            const double grad_phi = du.values[i] / ui;

            const double g_t = (gp.values[i] - gm.values[i]) / dt2;
            worst = std::max(worst, std::abs(g_t - fp * lap_g.values[i] - grad_g * grad_g));

            const double phi_t = (std::log(traj.states[k + 1][i]) - std::log(traj.states[k - 1][i])) / dt2;
            worst = std::max(worst, std::abs(phi_t - lap_g.values[i] - grad_g * grad_phi));
        }
    }
    return worst;
}

InequalityResidualReport inequality_residual(const Trajectory& traj, const Nonlinearity& nl,
                                             double alpha, double k, int n) {
    if (traj.snapshots() < 3) throw std::invalid_argument("inequality_residual: need >= 3 snapshots");
    const ValueRange range(traj.min_value(), traj.max_value());
    const ConditionReport rep = condition_report(nl, range, alpha, n);
    if (!rep.satisfied_A) throw std::domain_error("inequality_residual: condition (A) fails (F' unbounded)");
    if (!rep.satisfied_B) throw std::domain_error("inequality_residual: condition (B) fails (alpha - G not positive)");
    if (!rep.satisfied_C_2_10)
        throw std::domain_error("inequality_residual: nonlinear condition (C) fails (coefficient not positive)");

    const ModelGeometry& geom = *traj.geom;
    const int N = geom.grid_points();
    const int i_lo = geom.periodic() ? 0 : 1;
    const int i_hi = geom.periodic() ? N : N - 1;

    std::vector<HarnackFields> hf;
    hf.reserve(traj.snapshots());
    for (int s = 0; s < traj.snapshots(); ++s)
        hf.push_back(harnack_fields(traj.field(s), nl, alpha, n));

    InequalityResidualReport out;
    out.min_residual = std::numeric_limits<double>::infinity();
    for (int s = 1; s + 1 < traj.snapshots(); ++s) {
        const HarnackFields& H = hf[s];
        const Field w_field(traj.geom, H.w, traj.times[s]);
        const Field lap_w = laplace_beltrami(w_field);
        const Field grad_w = gradient_r(w_field);
        const double dt2 = traj.times[s + 1] - traj.times[s - 1];

        for (int i = i_lo; i < i_hi; ++i) {
            const double w_t = (hf[s + 1].w[i] - hf[s - 1].w[i]) / dt2;
            const double res = H.gprime[i] * lap_w.values[i] - w_t - H.L[i] * H.w[i] * H.w[i] +
                               2.0 * H.gprime[i] * k * H.w[i] +
                               H.L1_signed[i] * H.grad_g[i] * grad_w.values[i];
            out.scale = std::max(out.scale, std::abs(H.L[i] * H.w[i] * H.w[i]));
            if (res < out.min_residual) {
                out.min_residual = res;
                out.node = i;
                out.time = traj.times[s];
            }
        }
    }
    return out;
}

namespace {

struct WindowIndices {
    std::vector<int> ball, half_ball;
    std::vector<int> snaps, half_snaps; // indices into traj.times
    int center_node = 0;
};

WindowIndices window_indices(const Trajectory& traj, const Window& win) {
    const ModelGeometry& geom = *traj.geom;
    const double tol = 1e-9 * (std::abs(win.t0) + win.T);
    if (win.t0 - win.T < traj.times.front() - tol || win.t0 > traj.times.back() + tol)
        throw std::invalid_argument("window error: Q_{R,T} exceeds the trajectory time range");
    if (!(win.R > 0.0 && win.T > 0.0)) throw std::invalid_argument("window error: need R, T > 0");

    WindowIndices wi;
    wi.center_node = geom.nearest_node(win.x0);
    wi.ball = geodesic_ball(geom, wi.center_node, win.R);
    wi.half_ball = geodesic_ball(geom, wi.center_node, 0.5 * win.R);
    for (int s = 0; s < traj.snapshots(); ++s) {
        const double t = traj.times[s];
        if (t >= win.t0 - win.T - tol && t <= win.t0 + tol) wi.snaps.push_back(s);
        if (t >= win.t0 - 0.5 * win.T - tol && t <= win.t0 + tol) wi.half_snaps.push_back(s);
    }
    if (wi.snaps.empty() || wi.half_snaps.empty())
        throw std::invalid_argument("window error: no snapshots inside Q_{R,T}");
    return wi;
}

void window_extrema(const Trajectory& traj, const WindowIndices& wi, double& m, double& M) {
    m = std::numeric_limits<double>::infinity();
    M = -m;
    for (int s : wi.snaps)
        for (int i : wi.ball) {
            m = std::min(m, traj.states[s][i]);
            M = std::max(M, traj.states[s][i]);
        }
}

/// Shared sup-over-half-window loop; `lhs` maps (snapshot index, node) to the
/// audited quantity.
template <typename LhsFn>
void half_window_sup(const Trajectory& traj, const WindowIndices& wi, LhsFn&& lhs,
                     EstimateReport& rep) {
    rep.lhs_sup = -std::numeric_limits<double>::infinity();
    int best_snap = wi.half_snaps.front();
    for (int s : wi.half_snaps)
        for (int i : wi.half_ball) {
            const double v = lhs(s, i);
            if (v > rep.lhs_sup) {
                rep.lhs_sup = v;
                rep.lhs_argmax_r = traj.geom->node(i);
                rep.lhs_argmax_t = traj.times[s];
                best_snap = s;
            }
        }
    rep.detail_r.clear();
    rep.detail_lhs.clear();
    for (int i : wi.half_ball) {
        rep.detail_r.push_back(traj.geom->node(i));
        rep.detail_lhs.push_back(lhs(best_snap, i));
    }
}

} // namespace

EstimateReport bound_ratio_thm11(const Trajectory& traj, const Nonlinearity& nl, double alpha,
                                 const Window& window, const ConditionReport& constants) {
    if (!(constants.satisfied_A && constants.satisfied_B && constants.satisfied_C_2_10))
        throw std::domain_error("bound_ratio_thm11: admissibility conditions do not hold");
    const WindowIndices wi = window_indices(traj, window);
    const double k = traj.geom->ricci_lower_bound();

    EstimateReport rep;
    rep.theorem = "thm11";
    rep.window = window;
    rep.alpha = alpha;
    window_extrema(traj, wi, rep.m_window, rep.M_window);

    std::vector<HarnackFields> hf;
    for (int s = 0; s < traj.snapshots(); ++s)
        hf.push_back(harnack_fields(traj.field(s), nl, alpha, traj.geom->dim()));
    half_window_sup(traj, wi,
                    [&](int s, int i) { return std::sqrt(hf[s].w[i]); }, rep);

    rep.term_R = 1.0 / window.R;
    rep.term_T = 1.0 / std::sqrt(window.T);
    rep.term_k = std::sqrt(k);
    rep.rhs = rep.term_R + rep.term_T + rep.term_k;
    rep.ratio = rep.lhs_sup / rep.rhs;
    return rep;
}

EstimateReport bound_ratio_fde(const Trajectory& traj, double p, const Window& window) {
    const int n = traj.geom->dim();
    const Interval adm = fde_admissible_range(n);
    if (!adm.contains(p)) {
        std::ostringstream msg;
        msg << "bound_ratio_fde: p = " << p << " outside the admissible range (" << adm.lo << ", 1)";
        throw std::domain_error(msg.str());
    }
    const Nonlinearity nl = Nonlinearity::power(p);
    const WindowIndices wi = window_indices(traj, window);
    const double k = traj.geom->ricci_lower_bound();

    EstimateReport rep;
    rep.theorem = "fde";
    rep.window = window;
    rep.alpha = 0.0;
    window_extrema(traj, wi, rep.m_window, rep.M_window);

    std::vector<Field> grads;
    for (int s = 0; s < traj.snapshots(); ++s) grads.push_back(gradient_r(traj.field(s)));
    half_window_sup(traj, wi,
                    [&](int s, int i) { return std::abs(grads[s].values[i]) / traj.states[s][i]; },
                    rep);

    // |grad G(u)| / (-G(u)) = (1-p) |grad u| / u is exact algebra here.
    for (int s : wi.half_snaps)
        for (int i : wi.half_ball) {
            const double u = traj.states[s][i];
            const double gg = std::abs(nl.Fp(u) / u * grads[s].values[i]) / (-nl.G(u));
            const double uu = (1.0 - p) * std::abs(grads[s].values[i]) / u;
            rep.consistency_defect = std::max(rep.consistency_defect, std::abs(gg - uu));
        }

    rep.term_R = 1.0 / window.R;
    rep.term_T = std::pow(rep.M_window, (1.0 - p) / 2.0) / std::sqrt(window.T);
    rep.term_k = std::sqrt(k);
    rep.rhs = rep.term_R + rep.term_T + rep.term_k;
    rep.ratio = rep.lhs_sup / rep.rhs;
    return rep;
}

EstimateReport bound_ratio_pme_n1(const Trajectory& traj, double p, double delta,
                                  const Window& window) {
    if (!(p > 1.0)) throw std::invalid_argument("bound_ratio_pme_n1: need p > 1");
    if (!(delta > 0.0)) throw std::invalid_argument("bound_ratio_pme_n1: need delta > 0");
    if (traj.geom->dim() != 1) throw std::invalid_argument("bound_ratio_pme_n1: one-dimensional models only");
    const Nonlinearity nl = Nonlinearity::power(p);
    const WindowIndices wi = window_indices(traj, window);

    EstimateReport rep;
    rep.theorem = "pme_n1";
    rep.window = window;
    window_extrema(traj, wi, rep.m_window, rep.M_window);
    const double Mp = std::pow(rep.M_window, p - 1.0);
    rep.alpha = p / (p - 1.0) * Mp * (1.0 + delta);

    std::vector<Field> grads;
    for (int s = 0; s < traj.snapshots(); ++s) grads.push_back(gradient_r(traj.field(s)));
    half_window_sup(traj, wi,
                    [&](int s, int i) {
                        const double u = traj.states[s][i];
                        return std::abs(nl.Fp(u) / u * grads[s].values[i]) / (rep.alpha - nl.G(u));
                    },
                    rep);

    rep.term_R = (1.0 + delta) / (delta * window.R);
    rep.term_T = 1.0 / std::sqrt(Mp * delta * window.T);
    rep.term_k = 0.0;
    rep.rhs = rep.term_R + rep.term_T;
    rep.ratio = rep.lhs_sup / rep.rhs;
    return rep;
}

EstimateReport bound_ratio_pme_n2(const Trajectory& traj, double p, double delta,
                                  const Window& window) {
    const int n = traj.geom->dim();
    if (n < 2) throw std::invalid_argument("bound_ratio_pme_n2: needs dimension >= 2");
    const Nonlinearity nl = Nonlinearity::power(p);
    const WindowIndices wi = window_indices(traj, window);

    EstimateReport rep;
    rep.theorem = "pme_n2";
    rep.window = window;
    window_extrema(traj, wi, rep.m_window, rep.M_window);

    const PinchResult pinch = pme_pinch(n, p, delta, ValueRange(rep.m_window, rep.M_window));
    if (!pinch.holds) {
        std::ostringstream msg;
        msg << "bound_ratio_pme_n2: pinch condition fails: (M/m)^(p-1) = " << pinch.osc
            << " is not below the threshold " << pinch.threshold;
        throw std::domain_error(msg.str());
    }
    rep.alpha = pinch.alpha;

    std::vector<Field> grads;
    for (int s = 0; s < traj.snapshots(); ++s) grads.push_back(gradient_r(traj.field(s)));
    half_window_sup(traj, wi,
                    [&](int s, int i) {
                        const double u = traj.states[s][i];
                        return std::abs(nl.Fp(u) / u * grads[s].values[i]) / (rep.alpha - nl.G(u));
                    },
                    rep);

    const double k = traj.geom->ricci_lower_bound();
    const double Mp = std::pow(rep.M_window, p - 1.0);
    rep.term_R = (delta + 1.0) / (pinch.gamma * delta * window.R);
    rep.term_T = 1.0 / std::sqrt(pinch.gamma * delta * Mp * window.T);
    rep.term_k = std::sqrt(k / delta);
    rep.rhs = rep.term_R + rep.term_T + rep.term_k;
    rep.ratio = rep.lhs_sup / rep.rhs;
    rep.consistency_defect = pinch.gamma; // exposed for reporting
    return rep;
}

EstimateReport bound_ratio_heat_sz(const Trajectory& traj, const Nonlinearity& nl,
                                   const Window& window) {
    const bool heat_like = nl.kind() == NonlinearityKind::heat ||
                           (nl.kind() == NonlinearityKind::power && nl.exponent() == 1.0);
    if (!heat_like) throw std::invalid_argument("bound_ratio_heat_sz: heat preset only");
    const WindowIndices wi = window_indices(traj, window);
    const double k = traj.geom->ricci_lower_bound();

    EstimateReport rep;
    rep.theorem = "heat_sz";
    rep.window = window;
    window_extrema(traj, wi, rep.m_window, rep.M_window);
    rep.alpha = 1.0 + std::log(rep.M_window);

    std::vector<Field> grads;
    for (int s = 0; s < traj.snapshots(); ++s) grads.push_back(gradient_r(traj.field(s)));
    half_window_sup(traj, wi,
                    [&](int s, int i) {
                        const double u = traj.states[s][i];
                        return (std::abs(grads[s].values[i]) / u) / (1.0 + std::log(rep.M_window / u));
                    },
                    rep);

    rep.term_R = 1.0 / window.R;
    rep.term_T = 1.0 / std::sqrt(window.T);
    rep.term_k = std::sqrt(k);
    rep.rhs = rep.term_R + rep.term_T + rep.term_k;
    rep.ratio = rep.lhs_sup / rep.rhs;
    return rep;
}

} // namespace degen
