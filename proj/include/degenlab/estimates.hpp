#pragma once

#include <string>
#include <vector>

#include "degenlab/geometry.hpp"
#include "degenlab/nonlinearity.hpp"
#include "degenlab/solver.hpp"

namespace degen {

/// Per-node quantities entering the gradient-estimate machinery at one
/// instant: g = G(u), the Harnack quantity w = |grad g|^2 / (alpha - g)^2 and
/// the coefficients
///   f  = 2 g' / (alpha - g),   b = g''/g' = s F''/F',
///   L  = (alpha - g) (2(1+b) - (n-1) b^2 / f),
///   L1 = 2 - f + b              (signed; the eta = -1 choice).
/// grad g is evaluated by the chain rule G'(u) * grad_h u, so algebraic
/// identities between g- and u-gradients hold to roundoff rather than to
/// discretization error.
struct HarnackFields {
    double alpha = 0.0;
    double time = 0.0;
    std::vector<double> g, gprime, gsecond, grad_g, w, f, b, L, L1_signed;
};

HarnackFields harnack_fields(const Field& u, const Nonlinearity& nl, double alpha, int n);

/// Max interior defect of the evolution identities
///   g_t = g' lap g + |grad g|^2    and    phi_t = lap G(u) + grad G(u) . grad phi
/// (phi = ln u) over interior snapshots; O(h^2 + dt^2) for exact solutions.
double identity_check_g(const Trajectory& traj, const Nonlinearity& nl);

struct InequalityResidualReport {
    double min_residual = 0.0;
    int node = -1;
    double time = 0.0;
    double scale = 0.0; // max |L w^2| over the window, for relative tolerances
};

/// Pointwise residual of the key differential inequality,
///   g' lap w - w_t - L w^2 + 2 g' k w + L1 (grad g . grad w),
/// minimized over interior nodes and interior snapshots. Refuses (naming the
/// condition) unless the admissibility conditions hold on the trajectory's
/// value range.
InequalityResidualReport inequality_residual(const Trajectory& traj, const Nonlinearity& nl,
                                             double alpha, double k, int n);

/// Space-time window Q_{R,T} = B(x0, R) x [t0 - T, t0]; x0 is a coordinate.
struct Window {
    double x0 = 0.0;
    double t0 = 0.0;
    double R = 1.0;
    double T = 1.0;
};

/// Localized bound audit: lhs_sup over the half window Q_{R/2,T/2}, the
/// theorem's right-hand side, and the inferred constant ratio = lhs_sup/rhs.
/// The unknown C(...) constants are never hard-coded; stability of the ratio
/// across windows and refinements is what the acceptance suite asserts.
struct EstimateReport {
    std::string theorem;
    Window window;
    double M_window = 0.0; // sup of u over the full window
    double m_window = 0.0;
    double alpha = 0.0;
    double lhs_sup = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double term_R = 0.0, term_T = 0.0, term_k = 0.0; // rhs decomposition
    double lhs_argmax_r = 0.0, lhs_argmax_t = 0.0;
    double consistency_defect = 0.0; // theorem-specific cross identity
    std::vector<double> detail_r, detail_lhs; // per-node lhs at the attaining snapshot
};

/// |grad G(u)| / (alpha - G(u)) vs 1/R + 1/sqrt(T) + sqrt(k); conditions are
/// taken from the supplied report and must pass.
EstimateReport bound_ratio_thm11(const Trajectory& traj, const Nonlinearity& nl, double alpha,
                                 const Window& window, const ConditionReport& constants);

/// Fast diffusion: |grad u|/u vs 1/R + M^((1-p)/2)/sqrt(T) + sqrt(k), with M
/// the sup over the full window. Also audits the exact identity
/// |grad G(u)|/(-G(u)) = (1-p) |grad u|/u (consistency_defect).
EstimateReport bound_ratio_fde(const Trajectory& traj, double p, const Window& window);

/// Porous medium on the line: |grad G(u)|/(alpha - G(u)) vs
/// (1+delta)/(delta R) + 1/sqrt(M^(p-1) delta T), alpha = p/(p-1) M^(p-1) (1+delta).
EstimateReport bound_ratio_pme_n1(const Trajectory& traj, double p, double delta,
                                  const Window& window);

/// Porous medium, n >= 2, under the pinch condition on the window's value
/// range; refuses with the oscillation and threshold when the pinch fails.
EstimateReport bound_ratio_pme_n2(const Trajectory& traj, double p, double delta,
                                  const Window& window);

/// Heat specialization: (|grad u|/u) / (1 + ln(M/u)) vs 1/R + 1/sqrt(T) + sqrt(k).
EstimateReport bound_ratio_heat_sz(const Trajectory& traj, const Nonlinearity& nl,
                                   const Window& window);

} // namespace degen
