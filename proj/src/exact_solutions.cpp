#include "degenlab/exact_solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace degen {

ExactSolution ExactSolution::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("ExactSolution::constant: need c > 0");
    ExactSolution e;
    e.kind_ = ExactKind::constant;
    e.c_ = c;
    return e;
}

ExactSolution ExactSolution::heat_mode(double A, double B, double mu) {
    if (!(A > std::abs(B))) throw std::invalid_argument("ExactSolution::heat_mode: need A > |B| for positivity");
    ExactSolution e;
    e.kind_ = ExactKind::heat_mode;
    e.A_ = A;
    e.B_ = B;
    e.mu_ = mu;
    return e;
}

ExactSolution ExactSolution::fde_barenblatt(double p, int n, double C) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("ExactSolution::fde_barenblatt: need 0 < p < 1");
    if (!(n * (p - 1.0) + 2.0 > 0.0))
        throw std::invalid_argument("ExactSolution::fde_barenblatt: need n(p-1) + 2 > 0");
    if (!(C > 0.0)) throw std::invalid_argument("ExactSolution::fde_barenblatt: need C > 0");
    ExactSolution e;
    e.kind_ = ExactKind::fde_barenblatt;
    e.p_ = p;
    e.n_ = n;
    e.C_ = C;
    e.beta_ = 1.0 / (n * (p - 1.0) + 2.0);
    e.kappa_ = (1.0 - p) * e.beta_ / (2.0 * p);
    return e;
}

ExactSolution ExactSolution::pme_quadratic_pressure(double p, double T_blow) {
    if (!(p > 1.0)) throw std::invalid_argument("ExactSolution::pme_quadratic_pressure: need p > 1");
    ExactSolution e;
    e.kind_ = ExactKind::pme_quadratic_pressure;
    e.p_ = p;
    e.t_blow_ = T_blow;
    return e;
}

double ExactSolution::operator()(double r, double t) const {
    switch (kind_) {
        case ExactKind::constant:
            return c_;
        case ExactKind::heat_mode:
            return A_ + B_ * std::exp(-mu_ * mu_ * t) * std::cos(mu_ * r);
        case ExactKind::fde_barenblatt: {
            if (!(t > 0.0)) throw std::domain_error("fde_barenblatt: valid for t > 0 only");
            const double scale = std::pow(t, -2.0 * beta_);
            return std::pow(t, -n_ * beta_) *
                   std::pow(C_ + kappa_ * r * r * scale, -1.0 / (1.0 - p_));
        }
        case ExactKind::pme_quadratic_pressure: {
            if (!(t < t_blow_)) throw std::domain_error("pme_quadratic_pressure: valid for t < T_blow only");
            if (!(r > 0.0)) throw std::domain_error("pme_quadratic_pressure: valid for r > 0 only");
            const double v = r * r / (2.0 * (p_ + 1.0) * (t_blow_ - t));
            return std::pow((p_ - 1.0) * v / p_, 1.0 / (p_ - 1.0));
        }
    }
    return 0.0;
}

Field ExactSolution::sample(GeometryPtr geom, double t) const {
    Field f(geom, t);
    for (int i = 0; i < f.size(); ++i) f.values[static_cast<std::size_t>(i)] = (*this)(geom->node(i), t);
    return f;
}

std::string ExactSolution::name() const {
    switch (kind_) {
        case ExactKind::constant: return "constant";
        case ExactKind::heat_mode: return "heat_mode";
        case ExactKind::fde_barenblatt: return "fde_barenblatt";
        case ExactKind::pme_quadratic_pressure: return "pme_quadratic_pressure";
    }
    return "?";
}

} // namespace degen
