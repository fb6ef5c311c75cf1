#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "degenlab/matrix_lemma.hpp"
#include "degenlab/rng.hpp"

using namespace degen;

namespace {

SymMatrix random_sym(Rng& rng, int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, rng.gaussian());
    return m;
}

double quad_form(const SymMatrix& a, double ca, double cb, const std::vector<double>& v) {
    double tr = a.trace(), q = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) q += v[i] * a(i, j) * v[j];
    return ca * q + cb * tr;
}

std::vector<double> random_unit(Rng& rng, int n) {
    std::vector<double> v(n);
    double norm = 0.0;
    for (double& x : v) {
        x = rng.gaussian();
        norm += x * x;
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

} // namespace

TEST_CASE("frobenius examples") {
    CHECK(frobenius_sq(SymMatrix::identity(3)) == 3.0);
    CHECK(frobenius_sq(SymMatrix::diagonal({1.0, -2.0})) == 5.0);
}

TEST_CASE("frobenius equals eigenvalue sum of squares") {
    Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 7);
        const SymMatrix a = random_sym(rng, n);
        const EigenSystem es = jacobi_eigensystem(a);
        double sum = 0.0;
        for (double lam : es.values) sum += lam * lam;
        CHECK(frobenius_sq(a) == doctest::Approx(sum).epsilon(1e-10));
    }
}

TEST_CASE("jacobi eigenpairs satisfy A v = lambda v") {
    Rng rng(12);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 7);
        const SymMatrix a = random_sym(rng, n);
        const double norm = std::sqrt(frobenius_sq(a));
        const EigenSystem es = jacobi_eigensystem(a);
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                double av = 0.0;
                for (int j = 0; j < n; ++j) av += a(i, j) * es.vectors[k][j];
                CHECK(std::abs(av - es.values[k] * es.vectors[k][i]) <= 1e-10 * norm);
            }
        }
    }
}

TEST_CASE("extremal quadratic examples") {
    const QuadraticExtrema e1 = extremal_quadratic(SymMatrix::identity(2), 1.0, 1.0);
    CHECK(e1.max == doctest::Approx(3.0));
    CHECK(e1.min == doctest::Approx(3.0));

    const QuadraticExtrema e2 = extremal_quadratic(SymMatrix::diagonal({1.0, -1.0}), 1.0, 1.0);
    CHECK(e2.max == doctest::Approx(1.0));
    CHECK(e2.min == doctest::Approx(-1.0));

    CHECK_THROWS_AS(extremal_quadratic(SymMatrix(3), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("extremal quadratic dominates random directions") {
    Rng rng(13);
    const SymMatrix a = random_sym(rng, 4);
    const QuadraticExtrema ext = extremal_quadratic(a, 0.7, -0.3);
    double sampled = -1e300;
    for (int it = 0; it < 100000; ++it)
        sampled = std::max(sampled, quad_form(a, 0.7, -0.3, random_unit(rng, 4)));
    CHECK(ext.max >= sampled - 1e-12);
    CHECK(ext.max == doctest::Approx(sampled).epsilon(1e-3));
}

TEST_CASE("no sampled direction beats the extremal value") {
    Rng rng(14);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 7);
        const SymMatrix a = random_sym(rng, n);
        const double ca = rng.uniform(-2.0, 2.0), cb = rng.uniform(-2.0, 2.0);
        const QuadraticExtrema ext = extremal_quadratic(a, ca, cb);
        for (int dir = 0; dir < 10; ++dir) {
            const double q = quad_form(a, ca, cb, random_unit(rng, n));
            CHECK(q <= ext.max + 1e-10);
            CHECK(q >= ext.min - 1e-10);
        }
    }
}

TEST_CASE("supremum bound closed form") {
    CHECK(supremum_bound(1.0, 0.0, 2) == 1.0);
    CHECK(supremum_bound(1.0, 0.0, 5) == 1.0);
    CHECK(supremum_bound(0.0, 1.0, 3) == 3.0);
    CHECK(supremum_bound(2.0, -1.0, 2) == 2.0);
    // n = 1 collapses to the plain Rayleigh square
    CHECK(supremum_bound(0.3, -1.7, 1) == doctest::Approx((0.3 - 1.7) * (0.3 - 1.7)));
}

TEST_CASE("witness attains the bound") {
    const LemmaWitness w1 = witness(1.0, 0.0, 3);
    CHECK(w1.matrix(0, 0) == doctest::Approx(1.0));
    CHECK(w1.matrix(1, 1) == 0.0);
    CHECK(w1.value * w1.value == doctest::Approx(1.0));

    const LemmaWitness w2 = witness(0.0, 1.0, 2);
    CHECK(w2.matrix(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(w2.value * w2.value == doctest::Approx(2.0));

    const LemmaWitness w3 = witness(1.0, 1.0, 3);
    CHECK(w3.value * w3.value == doctest::Approx(6.0));

    Rng rng(15);
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 7);
        const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
        const LemmaWitness w = witness(a, b, n);
        CHECK(frobenius_sq(w.matrix) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(w.value * w.value - supremum_bound(a, b, n)) <=
              1e-12 * std::max(1.0, supremum_bound(a, b, n)));
    }

    CHECK_THROWS_AS(witness(0.0, 0.0, 3), std::invalid_argument);
}

TEST_CASE("bruteforce stays below the bound and approaches it") {
    // trace-only case: 1e5 samples land within 5% of the n = 3 supremum
    const double hit = bruteforce_sup(0.0, 1.0, 3, 100000, 42);
    CHECK(hit <= 3.0 + 1e-9);
    CHECK(hit >= 0.95 * 3.0);

    const double mixed = bruteforce_sup(1.0, 1.0, 3, 100000, 43);
    CHECK(mixed <= 6.0 + 1e-9);
    CHECK(mixed >= 0.6 * 6.0);

    Rng rng(16);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 3);
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        CHECK(bruteforce_sup(a, b, n, 2000, 100 + rep) <= supremum_bound(a, b, n) + 1e-9);
    }
}

TEST_CASE("bruteforce is deterministic in the seed") {
    const double one = bruteforce_sup(0.4, -1.2, 4, 5000, 7);
    const double two = bruteforce_sup(0.4, -1.2, 4, 5000, 7);
    CHECK(one == two);
    CHECK(bruteforce_sup(0.4, -1.2, 4, 5000, 8) != one);
}
