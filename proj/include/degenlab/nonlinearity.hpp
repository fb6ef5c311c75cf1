#pragma once

#include <string>
#include <vector>

namespace degen {

enum class NonlinearityKind { heat, power, custom };

/// Diffusion nonlinearity F of u_t = div grad F(u), with F in C^2(0, inf) and
/// F' > 0. The coupled G with G'(s) = F'(s)/s is carried alongside because the
/// gradient-estimate quantities are phrased in G(u).
///
/// Integration constants of G are fixed per kind so quoted alpha values match:
/// heat: G = ln s; power p != 1: G = p/(p-1) s^(p-1); power p = 1 behaves as
/// heat. Custom tables anchor G(s_min) = 0.
class Nonlinearity {
public:
    static Nonlinearity heat();
    static Nonlinearity power(double p);
    /// Monotone cubic (Fritsch-Carlson) interpolation of a strictly increasing
    /// table s -> F(s) on a positive interval.
    static Nonlinearity custom(std::vector<double> s, std::vector<double> F);

    NonlinearityKind kind() const { return kind_; }
    double exponent() const;       // power kind only
    double domain_min() const;     // custom: table range; presets: 0
    double domain_max() const;

    double F(double s) const;
    double Fp(double s) const;     // F'
    double Fpp(double s) const;    // F''
    double G(double s) const;

    /// s F''(s) / F'(s); exactly p-1 for power, 0 for heat.
    double curvature_ratio(double s) const;

private:
    Nonlinearity() = default;

    NonlinearityKind kind_ = NonlinearityKind::heat;
    double p_ = 1.0;

    // custom-table state
    std::vector<double> xs_, ys_, slopes_;
    std::vector<double> g_at_knots_;
    int segment(double s) const;
    void check_domain(double s) const;
};

/// Closed value range [m, M] of a solution, 0 < m <= M.
struct ValueRange {
    double m;
    double M;
    ValueRange(double m_, double M_);
};

/// Constants and verdicts for the gradient-estimate admissibility conditions.
/// Two versions of the nonlinear-condition coefficient are carried: the
/// operative one, 2(1+b) - (n-1) b^2/f, and the literal theorem-statement one,
/// which doubles the b^2/f term; applications in the source material follow
/// the former, so the operative verdict uses gamma_2_10.
struct ConditionReport {
    double K = 0.0;             // sup F' over [m, M]
    double delta = 0.0;         // inf (alpha - G) over [m, M]
    double tau_min = 0.0;       // sup |s F''| / F' over [m, M]
    double gamma_2_10 = 0.0;    // inf 2(1+b) - (n-1) b^2 / f
    double gamma_thm11C = 0.0;  // inf 2 + b (2 - (n-1) b (alpha - G)/F')
    double alpha = 0.0;
    bool satisfied_A = false;
    bool satisfied_B = false;
    bool satisfied_C_2_10 = false;
    bool satisfied_C_literal = false;
    bool versions_match = false;
};

/// Compute the admissibility constants of the localized gradient estimate over
/// [m, M] for dimension n. Constants come from closed forms for presets and
/// from dense log-uniform sampling (4097 points plus endpoints) otherwise. A
/// nonpositive alpha - G anywhere yields satisfied_B = false rather than an
/// exception; a nonpositive F' anywhere is an error.
ConditionReport condition_report(const Nonlinearity& nl, const ValueRange& range,
                                 double alpha, int n);

struct Interval {
    double lo;
    double hi;
    bool contains(double p) const { return lo < p && p < hi; }
};

/// Admissible fast-diffusion exponents (1 - 4/(n+3), 1) for dimension n >= 1.
Interval fde_admissible_range(int n);

/// gamma = ((n+3) p - (n-1)) / 2, positive exactly on the admissible range.
/// Throws out-of-range errors naming the violated bound.
double fde_gamma(int n, double p);

struct PinchResult {
    bool holds = false;
    double gamma = 0.0;
    double alpha = 0.0;
    double osc = 0.0;        // (M/m)^(p-1)
    double threshold = 0.0;  // (1/(1+delta)) (4p/((n-1)(p-1)) + 1)
};

/// Porous-medium oscillation bound for n >= 2, p > 1, delta in (0, 4/(n-1)]:
/// holds iff (M/m)^(p-1) < threshold, equivalently gamma > 0 with
/// gamma = 2p - (n-1)(p-1)/2 * (M^(p-1)(1+delta) - m^(p-1)) / m^(p-1).
PinchResult pme_pinch(int n, double p, double delta, const ValueRange& range);

} // namespace degen
