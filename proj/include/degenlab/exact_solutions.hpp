#pragma once

#include <string>

#include "degenlab/geometry.hpp"

namespace degen {

enum class ExactKind { constant, heat_mode, fde_barenblatt, pme_quadratic_pressure };

/// Closed-form reference solutions used as solver and estimate oracles. None
/// is taken on authority: the discrete residual check certifies each formula
/// at second order before it backs any other test.
class ExactSolution {
public:
    /// u = c.
    static ExactSolution constant(double c);
    /// u = A + B exp(-mu^2 t) cos(mu r), A > |B|; heat equation.
    static ExactSolution heat_mode(double A, double B, double mu);
    /// Self-similar fast-diffusion profile
    /// u(r, t) = t^(-n beta) (C + kappa r^2 t^(-2 beta))^(-1/(1-p)),
    /// beta = 1/(n(p-1)+2), kappa = (1-p) beta / (2p); needs p < 1, t > 0.
    static ExactSolution fde_barenblatt(double p, int n, double C);
    /// Porous-medium pressure solution on the line (n = 1):
    /// v(r, t) = r^2 / (2(p+1)(T_blow - t)), u = ((p-1) v / p)^(1/(p-1));
    /// valid for t < T_blow, r > 0.
    static ExactSolution pme_quadratic_pressure(double p, double T_blow);

    double operator()(double r, double t) const;
    Field sample(GeometryPtr geom, double t) const;

    ExactKind kind() const { return kind_; }
    std::string name() const;

private:
    ExactSolution() = default;
    ExactKind kind_ = ExactKind::constant;
    double c_ = 1.0;
    double A_ = 0.0, B_ = 0.0, mu_ = 0.0;
    double p_ = 0.5, C_ = 1.0, beta_ = 0.0, kappa_ = 0.0;
    int n_ = 1;
    double t_blow_ = 1.0;
};

} // namespace degen
