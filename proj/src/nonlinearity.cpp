#include "degenlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace degen {

namespace {

constexpr int kSamplePoints = 4097;

double hermite(double t, double y0, double y1, double m0, double m1) {
    const double t2 = t * t, t3 = t2 * t;
    return y0 * (2 * t3 - 3 * t2 + 1) + m0 * (t3 - 2 * t2 + t) +
           y1 * (-2 * t3 + 3 * t2) + m1 * (t3 - t2);
}

double hermite_d(double t, double y0, double y1, double m0, double m1) {
    const double d = y1 - y0;
    return m0 + 2 * (3 * d - 2 * m0 - m1) * t + 3 * (m0 + m1 - 2 * d) * t * t;
}

double hermite_dd(double t, double y0, double y1, double m0, double m1) {
    const double d = y1 - y0;
    return 2 * (3 * d - 2 * m0 - m1) + 6 * (m0 + m1 - 2 * d) * t;
}

} // namespace

Nonlinearity Nonlinearity::heat() {
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::heat;
    nl.p_ = 1.0;
    return nl;
}

Nonlinearity Nonlinearity::power(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("Nonlinearity::power: exponent must be positive (F' > 0)");
    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::power;
    nl.p_ = p;
    return nl;
}

Nonlinearity Nonlinearity::custom(std::vector<double> s, std::vector<double> F) {
    if (s.size() != F.size() || s.size() < 3)
        throw std::invalid_argument("Nonlinearity::custom: need matching tables with >= 3 rows");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0)) throw std::invalid_argument("Nonlinearity::custom: s values must be positive");
        if (i > 0 && !(s[i] > s[i - 1] && F[i] > F[i - 1]))
            throw std::invalid_argument("Nonlinearity::custom: table must be strictly increasing in s and F");
    }

    Nonlinearity nl;
    nl.kind_ = NonlinearityKind::custom;
    nl.xs_ = std::move(s);
    nl.ys_ = std::move(F);

    // Fritsch-Butland slopes: harmonic mean of adjacent secants, secant at the
    // ends. Keeps the interpolant monotone and F' positive at the knots.
    const std::size_t n = nl.xs_.size();
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        sec[i] = (nl.ys_[i + 1] - nl.ys_[i]) / (nl.xs_[i + 1] - nl.xs_[i]);
    nl.slopes_.assign(n, 0.0);
    nl.slopes_[0] = sec[0];
    nl.slopes_[n - 1] = sec[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        nl.slopes_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);

    // Reject tables whose interpolant loses strict monotonicity anywhere.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = nl.xs_[i + 1] - nl.xs_[i];
        const double m0 = nl.slopes_[i] * h, m1 = nl.slopes_[i + 1] * h;
        double lo = std::min(hermite_d(0.0, nl.ys_[i], nl.ys_[i + 1], m0, m1),
                             hermite_d(1.0, nl.ys_[i], nl.ys_[i + 1], m0, m1));
        const double denom = 3 * (m0 + m1 - 2 * (nl.ys_[i + 1] - nl.ys_[i]));
        if (denom != 0.0) {
            const double tc = -(3 * (nl.ys_[i + 1] - nl.ys_[i]) - 2 * m0 - m1) / denom;
            if (tc > 0.0 && tc < 1.0)
                lo = std::min(lo, hermite_d(tc, nl.ys_[i], nl.ys_[i + 1], m0, m1));
        }
        if (!(lo > 0.0))
            throw std::invalid_argument("Nonlinearity::custom: interpolant is not strictly increasing");
    }

    // Cumulative G at the knots, G(s_min) = 0, via per-segment Simpson of F'/s.
    nl.g_at_knots_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = nl.xs_[i], bz = nl.xs_[i + 1];
        const int steps = 64;
        const double hh = (bz - a) / steps;
        double acc = 0.0;
        auto integrand = [&nl](double x) { return nl.Fp(x) / x; };
        for (int k = 0; k < steps; ++k) {
            const double x0 = a + k * hh;
            acc += hh / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + 0.5 * hh) + integrand(x0 + hh));
        }
        nl.g_at_knots_[i + 1] = nl.g_at_knots_[i] + acc;
    }
    return nl;
}

double Nonlinearity::exponent() const {
    if (kind_ != NonlinearityKind::power)
        throw std::logic_error("Nonlinearity::exponent: not a power nonlinearity");
    return p_;
}

double Nonlinearity::domain_min() const {
    return kind_ == NonlinearityKind::custom ? xs_.front() : 0.0;
}

double Nonlinearity::domain_max() const {
    return kind_ == NonlinearityKind::custom ? xs_.back() : std::numeric_limits<double>::infinity();
}

int Nonlinearity::segment(double s) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
    const int i = static_cast<int>(it - xs_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(xs_.size()) - 2);
}

void Nonlinearity::check_domain(double s) const {
    if (!(s > 0.0)) throw std::domain_error("Nonlinearity: argument must be positive");
    if (kind_ == NonlinearityKind::custom && (s < xs_.front() || s > xs_.back()))
        throw std::domain_error("Nonlinearity: argument outside the custom table range");
}

double Nonlinearity::F(double s) const {
    check_domain(s);
    switch (kind_) {
        case NonlinearityKind::heat: return s;
        case NonlinearityKind::power: return std::pow(s, p_);
        case NonlinearityKind::custom: {
            const int i = segment(s);
            const double h = xs_[i + 1] - xs_[i];
            const double t = (s - xs_[i]) / h;
            return hermite(t, ys_[i], ys_[i + 1], slopes_[i] * h, slopes_[i + 1] * h);
        }
    }
    return 0.0;
}

double Nonlinearity::Fp(double s) const {
    check_domain(s);
    switch (kind_) {
        case NonlinearityKind::heat: return 1.0;
        case NonlinearityKind::power: return p_ * std::pow(s, p_ - 1.0);
        case NonlinearityKind::custom: {
            const int i = segment(s);
            const double h = xs_[i + 1] - xs_[i];
            const double t = (s - xs_[i]) / h;
            return hermite_d(t, ys_[i], ys_[i + 1], slopes_[i] * h, slopes_[i + 1] * h) / h;
        }
    }
    return 0.0;
}

double Nonlinearity::Fpp(double s) const {
    check_domain(s);
    switch (kind_) {
        case NonlinearityKind::heat: return 0.0;
        case NonlinearityKind::power: return p_ * (p_ - 1.0) * std::pow(s, p_ - 2.0);
        case NonlinearityKind::custom: {
            const int i = segment(s);
            const double h = xs_[i + 1] - xs_[i];
            const double t = (s - xs_[i]) / h;
            return hermite_dd(t, ys_[i], ys_[i + 1], slopes_[i] * h, slopes_[i + 1] * h) / (h * h);
        }
    }
    return 0.0;
}

double Nonlinearity::G(double s) const {
    check_domain(s);
    switch (kind_) {
        case NonlinearityKind::heat: return std::log(s);
        case NonlinearityKind::power:
            if (p_ == 1.0) return std::log(s);
            return p_ / (p_ - 1.0) * std::pow(s, p_ - 1.0);
        case NonlinearityKind::custom: {
            const int i = segment(s);
            const double a = xs_[i];
            const int steps = 16;
            const double hh = (s - a) / steps;
            double acc = g_at_knots_[i];
            if (hh != 0.0) {
                for (int k = 0; k < steps; ++k) {
                    const double x0 = a + k * hh;
                    acc += hh / 6.0 * (Fp(x0) / x0 + 4.0 * Fp(x0 + 0.5 * hh) / (x0 + 0.5 * hh) +
                                       Fp(x0 + hh) / (x0 + hh));
                }
            }
            return acc;
        }
    }
    return 0.0;
}

double Nonlinearity::curvature_ratio(double s) const {
    switch (kind_) {
        case NonlinearityKind::heat: return 0.0;
        case NonlinearityKind::power: return p_ - 1.0;
        case NonlinearityKind::custom: return s * Fpp(s) / Fp(s);
    }
    return 0.0;
}

ValueRange::ValueRange(double m_, double M_) : m(m_), M(M_) {
    if (!(m > 0.0 && m <= M)) throw std::invalid_argument("ValueRange: need 0 < m <= M");
}

ConditionReport condition_report(const Nonlinearity& nl, const ValueRange& range,
                                 double alpha, int n) {
    if (n < 1) throw std::invalid_argument("condition_report: dimension must be >= 1");

    ConditionReport rep;
    rep.alpha = alpha;

    // Sample points: endpoints always; interior log-uniform.
    std::vector<double> pts;
    pts.reserve(kSamplePoints + 2);
    pts.push_back(range.m);
    if (range.M > range.m) {
        const double llo = std::log(range.m), lhi = std::log(range.M);
        for (int i = 1; i < kSamplePoints - 1; ++i)
            pts.push_back(std::exp(llo + (lhi - llo) * i / (kSamplePoints - 1)));
        pts.push_back(range.M);
    }

    const bool is_heat = nl.kind() == NonlinearityKind::heat ||
                         (nl.kind() == NonlinearityKind::power && nl.exponent() == 1.0);

    double K, tau;
    if (is_heat) {
        K = 1.0;
        tau = 0.0;
        rep.delta = alpha - std::log(range.M);
    } else if (nl.kind() == NonlinearityKind::power) {
        const double p = nl.exponent();
        K = p * std::pow(p > 1.0 ? range.M : range.m, p - 1.0);
        tau = std::abs(p - 1.0);
        rep.delta = alpha - nl.G(range.M); // G is increasing, so the inf sits at M
    } else {
        K = 0.0;
        tau = 0.0;
        rep.delta = std::numeric_limits<double>::infinity();
        for (double s : pts) {
            const double fp = nl.Fp(s);
            if (!(fp > 0.0))
                throw std::invalid_argument("condition_report: F' <= 0 inside the value range");
            K = std::max(K, fp);
            tau = std::max(tau, std::abs(s * nl.Fpp(s)) / fp);
            rep.delta = std::min(rep.delta, alpha - nl.G(s));
        }
    }
    rep.K = K;
    rep.tau_min = tau;
    rep.satisfied_A = std::isfinite(K);
    rep.satisfied_B = rep.delta > 0.0;

    if (is_heat) {
        // b = 0 kills the b^2/f term in both versions.
        rep.gamma_2_10 = 2.0;
        rep.gamma_thm11C = 2.0;
    } else if (!rep.satisfied_B) {
        rep.gamma_2_10 = std::numeric_limits<double>::quiet_NaN();
        rep.gamma_thm11C = std::numeric_limits<double>::quiet_NaN();
    } else {
        double g10 = std::numeric_limits<double>::infinity();
        double glit = std::numeric_limits<double>::infinity();
        for (double s : pts) {
            const double fp = nl.Fp(s);
            if (!(fp > 0.0))
                throw std::invalid_argument("condition_report: F' <= 0 inside the value range");
            const double b = nl.curvature_ratio(s);
            const double f = 2.0 * fp / (alpha - nl.G(s));
            g10 = std::min(g10, 2.0 * (1.0 + b) - (n - 1) * b * b / f);
            glit = std::min(glit, 2.0 * (1.0 + b) - 2.0 * (n - 1) * b * b / f);
        }
        rep.gamma_2_10 = g10;
        rep.gamma_thm11C = glit;
    }
    rep.satisfied_C_2_10 = rep.gamma_2_10 > 0.0;
    rep.satisfied_C_literal = rep.gamma_thm11C > 0.0;
    rep.versions_match =
        std::isfinite(rep.gamma_2_10) && std::isfinite(rep.gamma_thm11C) &&
        std::abs(rep.gamma_2_10 - rep.gamma_thm11C) <= 1e-12 * std::max(1.0, std::abs(rep.gamma_2_10));
    return rep;
}

Interval fde_admissible_range(int n) {
    if (n < 1) throw std::domain_error("fde_admissible_range: dimension must be >= 1");
    // (n-1)/(n+3) is the exact form of 1 - 4/(n+3).
    return Interval{static_cast<double>(n - 1) / (n + 3), 1.0};
}

double fde_gamma(int n, double p) {
    const Interval r = fde_admissible_range(n);
    if (!r.contains(p)) {
        std::ostringstream msg;
        msg << "fde_gamma: p = " << p << " violates ";
        if (p <= r.lo)
            msg << "p > 1 - 4/(n+3) = " << r.lo;
        else
            msg << "p < 1";
        msg << " for n = " << n;
        throw std::domain_error(msg.str());
    }
    return ((n + 3) * p - (n - 1)) / 2.0;
}

PinchResult pme_pinch(int n, double p, double delta, const ValueRange& range) {
    if (n < 2) throw std::invalid_argument("pme_pinch: dimension must be >= 2");
    if (!(p > 1.0)) throw std::invalid_argument("pme_pinch: exponent must satisfy p > 1");
    if (!(delta > 0.0 && delta <= 4.0 / (n - 1)))
        throw std::invalid_argument("pme_pinch: delta must lie in (0, 4/(n-1)]");

    PinchResult res;
    res.osc = std::pow(range.M / range.m, p - 1.0);
    res.threshold = (4.0 * p / ((n - 1) * (p - 1.0)) + 1.0) / (1.0 + delta);
    res.holds = res.osc < res.threshold;
    const double mp = std::pow(range.m, p - 1.0);
    const double Mp = std::pow(range.M, p - 1.0);
    res.gamma = 2.0 * p - (n - 1) * (p - 1.0) / 2.0 * (Mp * (1.0 + delta) - mp) / mp;
    res.alpha = p / (p - 1.0) * Mp * (1.0 + delta);
    return res;
}

} // namespace degen
