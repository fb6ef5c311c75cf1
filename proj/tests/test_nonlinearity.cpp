#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "degenlab/nonlinearity.hpp"
#include "degenlab/rng.hpp"

using namespace degen;

namespace {

// Central finite differences, the derivative oracle for the evaluators.
double fd1(const Nonlinearity& nl, double s, double h) { return (nl.F(s + h) - nl.F(s - h)) / (2 * h); }
double fd2(const Nonlinearity& nl, double s, double h) {
    return (nl.F(s + h) - 2 * nl.F(s) + nl.F(s - h)) / (h * h);
}

Nonlinearity sampled_square_table(int knots, double lo, double hi) {
    std::vector<double> s, F;
    for (int i = 0; i < knots; ++i) {
        const double x = lo + (hi - lo) * i / (knots - 1);
        s.push_back(x);
        F.push_back(x * x);
    }
    return Nonlinearity::custom(s, F);
}

} // namespace

TEST_CASE("presets evaluate their closed forms") {
    const Nonlinearity heat = Nonlinearity::heat();
    CHECK(heat.F(2.5) == 2.5);
    CHECK(heat.Fp(2.5) == 1.0);
    CHECK(heat.Fpp(2.5) == 0.0);
    CHECK(heat.G(std::exp(1.0)) == doctest::Approx(1.0));

    const Nonlinearity pme = Nonlinearity::power(2.0);
    CHECK(pme.F(3.0) == doctest::Approx(9.0));
    CHECK(pme.Fp(3.0) == doctest::Approx(6.0));
    CHECK(pme.Fpp(3.0) == doctest::Approx(2.0));
    CHECK(pme.G(3.0) == doctest::Approx(6.0)); // p/(p-1) s^(p-1) = 2*3

    CHECK_THROWS_AS(Nonlinearity::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::power(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(heat.F(-1.0), std::domain_error);
}

TEST_CASE("power(1) evaluates identically to heat") {
    const Nonlinearity heat = Nonlinearity::heat();
    const Nonlinearity p1 = Nonlinearity::power(1.0);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double s = rng.uniform(0.01, 50.0);
        CHECK(p1.F(s) == heat.F(s));
        CHECK(p1.Fp(s) == heat.Fp(s));
        CHECK(p1.Fpp(s) == heat.Fpp(s));
        CHECK(p1.G(s) == heat.G(s));
    }
}

TEST_CASE("finite differences reproduce F' and F'' on presets") {
    Rng rng(4);
    for (const double p : {1.0, 0.5, 2.0, 3.7}) {
        const Nonlinearity nl = p == 1.0 ? Nonlinearity::heat() : Nonlinearity::power(p);
        for (int i = 0; i < 1000; ++i) {
            const double s = rng.uniform(0.5, 4.0);
            const double h = 1e-4 * s;
            CHECK(fd1(nl, s, h) == doctest::Approx(nl.Fp(s)).epsilon(1e-6));
            const double ref = nl.Fpp(s);
            if (std::abs(ref) > 1e-12)
                CHECK(fd2(nl, s, h) == doctest::Approx(ref).epsilon(1e-6));
            else
                CHECK(std::abs(fd2(nl, s, h)) < 1e-6);
        }
    }
}

TEST_CASE("G couples to F through G' = F'/s at second order") {
    for (const Nonlinearity& nl :
         {Nonlinearity::heat(), Nonlinearity::power(0.5), Nonlinearity::power(2.0),
          sampled_square_table(41, 0.5, 4.0)}) {
        const double s = 1.7;
        double prev_err = 1e300;
        for (const double h : {1e-2, 5e-3, 2.5e-3}) {
            const double fd = (nl.G(s + h) - nl.G(s - h)) / (2 * h);
            const double err = std::abs(fd - nl.Fp(s) / s);
            CHECK(err < 1e-4);
            CHECK(err <= prev_err + 1e-12);
            prev_err = err;
        }
    }
}

TEST_CASE("power curvature ratio s F''/F' is exactly p - 1") {
    Rng rng(5);
    for (const double p : {0.3, 0.5, 0.9, 2.0, 3.0}) {
        const Nonlinearity nl = Nonlinearity::power(p);
        CHECK(nl.curvature_ratio(1.234) == p - 1.0);
        for (int i = 0; i < 100; ++i) {
            const double s = rng.uniform(0.1, 10.0);
            const double raw = s * nl.Fpp(s) / nl.Fp(s);
            CHECK(std::abs(raw - (p - 1.0)) <= 1e-13 * std::max(1.0, std::abs(p - 1.0)));
        }
    }
}

TEST_CASE("custom tables: monotone interpolation and validation") {
    const Nonlinearity sq = sampled_square_table(41, 0.5, 4.0);
    for (double s = 0.55; s < 3.95; s += 0.1) {
        CHECK(sq.F(s) == doctest::Approx(s * s).epsilon(1e-3));
        CHECK(sq.Fp(s) == doctest::Approx(2 * s).epsilon(2e-2));
        CHECK(sq.Fp(s) > 0.0);
    }
    CHECK_THROWS_AS(sq.F(0.4), std::domain_error);
    CHECK_THROWS_AS(sq.F(4.1), std::domain_error);

    CHECK_THROWS_AS(Nonlinearity::custom({1.0, 2.0, 3.0}, {1.0, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::custom({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::custom({-1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("heat condition report: the worked specialization") {
    const double M = 3.0;
    const ConditionReport rep =
        condition_report(Nonlinearity::heat(), ValueRange(1.0, M), 1.0 + std::log(M), 1);
    CHECK(rep.K == 1.0);
    CHECK(rep.gamma_2_10 == 2.0);
    CHECK(rep.gamma_thm11C == 2.0);
    CHECK(rep.tau_min == 0.0);
    CHECK(rep.delta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.satisfied_A);
    CHECK(rep.satisfied_B);
    CHECK(rep.satisfied_C_2_10);
    CHECK(rep.satisfied_C_literal);
    CHECK(rep.versions_match);
    // tau = 1 quoted for this specialization satisfies tau >= tau_min
    CHECK(1.0 >= rep.tau_min);
}

TEST_CASE("fast diffusion condition report at p = 1/2, n = 3, alpha = 0") {
    const ConditionReport rep =
        condition_report(Nonlinearity::power(0.5), ValueRange(1e-6, 2.0), 0.0, 3);
    // 2p - (n-1)(1-p)/2 = 1/2 for the operative version
    CHECK(rep.gamma_2_10 == doctest::Approx(0.5).epsilon(1e-9));
    // the literal theorem-statement version doubles the b^2/f term: 0 here
    CHECK(rep.gamma_thm11C == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.satisfied_C_2_10);
    CHECK_FALSE(rep.versions_match);
    CHECK(rep.satisfied_B); // alpha - G = -G > 0 for p < 1
    CHECK(rep.tau_min == doctest::Approx(0.5));
}

TEST_CASE("condition report flags a condition-B violation without throwing") {
    const ConditionReport rep =
        condition_report(Nonlinearity::heat(), ValueRange(1.0, 10.0), 0.5, 2);
    CHECK_FALSE(rep.satisfied_B);
    CHECK(rep.delta < 0.0);
}

TEST_CASE("condition report on a custom table tracks the power closed form") {
    // The table anchors G(s_min) = 0 while power(2) uses G = 2s, so the two
    // agree once alpha is shifted by G_power(s_min) = 1.
    const ConditionReport tab =
        condition_report(sampled_square_table(257, 0.5, 2.0), ValueRange(0.6, 1.9), 9.0, 3);
    const ConditionReport ref = condition_report(Nonlinearity::power(2.0), ValueRange(0.6, 1.9), 10.0, 3);
    CHECK(tab.K == doctest::Approx(ref.K).epsilon(1e-3));
    CHECK(tab.delta == doctest::Approx(ref.delta).epsilon(1e-3));
    CHECK(tab.tau_min == doctest::Approx(ref.tau_min).epsilon(1e-2));
    // F'' of the interpolant wobbles at O(h) and b^2/f amplifies it
    CHECK(tab.gamma_2_10 == doctest::Approx(ref.gamma_2_10).epsilon(5e-2));
}

TEST_CASE("fde admissible range formula") {
    const Interval r3 = fde_admissible_range(3);
    CHECK(r3.lo == 1.0 / 3.0);
    CHECK(r3.hi == 1.0);
    const Interval r1 = fde_admissible_range(1);
    CHECK(r1.lo == 0.0);
    const Interval r5 = fde_admissible_range(5);
    CHECK(r5.lo == 0.5);
    CHECK_THROWS_AS(fde_admissible_range(0), std::domain_error);
}

TEST_CASE("fde gamma values and admissibility errors") {
    CHECK(fde_gamma(3, 0.5) == 0.5);
    CHECK(fde_gamma(2, 0.5) == 0.75);
    // continuity toward the heat value gamma = 2 at p -> 1
    CHECK(fde_gamma(1, 1.0 - 1e-9) == doctest::Approx(2.0).epsilon(1e-8));

    CHECK_THROWS_WITH_AS(fde_gamma(3, 0.2), doctest::Contains("0.33333"), std::domain_error);
    CHECK_THROWS_WITH_AS(fde_gamma(3, 1.2), doctest::Contains("p < 1"), std::domain_error);
}

TEST_CASE("fde gamma positivity matches the admissible range on a grid") {
    for (int n = 1; n <= 6; ++n) {
        const Interval adm = fde_admissible_range(n);
        for (int i = 1; i <= 19; ++i) {
            const double p = 0.05 * i;
            const double gamma_formula = ((n + 3) * p - (n - 1)) / 2.0;
            if (adm.contains(p)) {
                CHECK(fde_gamma(n, p) > 0.0);
                CHECK(fde_gamma(n, p) == gamma_formula);
            } else {
                CHECK(gamma_formula <= 0.0);
                CHECK_THROWS_AS(fde_gamma(n, p), std::domain_error);
            }
        }
    }
}

TEST_CASE("pme pinch: worked examples") {
    const PinchResult wide = pme_pinch(2, 2.0, 0.1, ValueRange(1.0, 8.0));
    CHECK(wide.threshold == doctest::Approx(9.0 / 1.1).epsilon(1e-12));
    CHECK(wide.holds);
    CHECK(wide.gamma > 0.0);

    CHECK_FALSE(pme_pinch(2, 2.0, 0.1, ValueRange(1.0, 9.0)).holds);

    const PinchResult narrow = pme_pinch(2, 2.0, 0.1, ValueRange(1.0, 1.5));
    CHECK(narrow.gamma == doctest::Approx(3.675).epsilon(1e-12));
    CHECK(narrow.alpha == doctest::Approx(2.0 * 1.5 * 1.1).epsilon(1e-12));

    // constant range holds for any admissible delta
    for (const double d : {0.05, 0.5, 2.0, 4.0})
        CHECK(pme_pinch(2, 3.0, d, ValueRange(2.0, 2.0)).holds);

    CHECK_THROWS_AS(pme_pinch(2, 2.0, 0.0, ValueRange(1.0, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(pme_pinch(3, 2.0, 2.1, ValueRange(1.0, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(pme_pinch(1, 2.0, 0.1, ValueRange(1.0, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(pme_pinch(2, 0.9, 0.1, ValueRange(1.0, 2.0)), std::invalid_argument);
}

TEST_CASE("pme pinch stays true as M decreases") {
    Rng rng(6);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const double p = rng.uniform(1.1, 4.0);
        const double delta = rng.uniform(0.01, 4.0 / (n - 1));
        const double m = rng.uniform(0.2, 2.0);
        bool seen_true = false;
        for (double M = 8.0 * m; M >= m; M *= 0.8) {
            const bool holds = pme_pinch(n, p, delta, ValueRange(m, std::max(M, m))).holds;
            if (seen_true) CHECK(holds);
            seen_true = seen_true || holds;
        }
        CHECK(pme_pinch(n, p, delta, ValueRange(m, m)).holds); // M = m endpoint
    }
}

TEST_CASE("pinch verdict agrees with the sign of gamma") {
    Rng rng(7);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        const double p = rng.uniform(1.05, 4.0);
        const double delta = rng.uniform(0.01, 4.0 / (n - 1));
        const double m = rng.uniform(0.2, 2.0);
        const double M = m * rng.uniform(1.0, 6.0);
        const PinchResult res = pme_pinch(n, p, delta, ValueRange(m, M));
        CHECK(res.holds == (res.gamma > 0.0));
    }
}

TEST_CASE("value range validation") {
    CHECK_THROWS_AS(ValueRange(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ValueRange(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ValueRange(-1.0, 1.0), std::invalid_argument);
}
