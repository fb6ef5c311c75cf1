#include "degenlab/matrix_lemma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degenlab/rng.hpp"

namespace degen {

SymMatrix::SymMatrix(int n) : n_(n) {
    if (n < 2 || n > 8) throw std::invalid_argument("SymMatrix: size must be in [2, 8]");
    a_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

void SymMatrix::set(int i, int j, double value) {
    a_[static_cast<std::size_t>(i) * n_ + j] = value;
    a_[static_cast<std::size_t>(j) * n_ + i] = value;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

bool SymMatrix::is_zero() const {
    for (double x : a_)
        if (x != 0.0) return false;
    return true;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.size(); ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
    return m;
}

double frobenius_sq(const SymMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) s += a(i, j) * a(i, j);
    return s;
}

EigenSystem jacobi_eigensystem(const SymMatrix& a) {
    const int n = a.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        v[i][i] = 1.0;
        for (int j = 0; j < n; ++j) m[i][j] = a(i, j);
    }

    auto offdiag_sq = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += m[i][j] * m[i][j];
        return s;
    };

    const double scale = std::max(frobenius_sq(a), 1e-300);
    for (int sweep = 0; sweep < 64 && offdiag_sq() > 1e-30 * scale; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m[p][q];
                if (apq == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigenSystem out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        out.values[static_cast<std::size_t>(k)] = m[k][k];
        for (int i = 0; i < n; ++i) out.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = v[i][k];
    }
    return out;
}

QuadraticExtrema extremal_quadratic(const SymMatrix& a_mat, double a, double b) {
    if (a_mat.is_zero()) throw std::invalid_argument("extremal_quadratic: zero matrix");
    const EigenSystem es = jacobi_eigensystem(a_mat);
    double tr = 0.0;
    for (double lam : es.values) tr += lam;
    QuadraticExtrema ext{-1e308, 1e308};
    for (double lam : es.values) {
        const double val = a * lam + b * tr;
        ext.max = std::max(ext.max, val);
        ext.min = std::min(ext.min, val);
    }
    return ext;
}

double supremum_bound(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("supremum_bound: n must be >= 1");
    return (a + b) * (a + b) + (n - 1) * b * b;
}

LemmaWitness witness(double a, double b, int n) {
    if (a == 0.0 && b == 0.0) throw std::invalid_argument("witness: (a, b) must be nonzero");
    const double s = supremum_bound(a, b, n);
    const double norm = std::sqrt(s);
    std::vector<double> diag(static_cast<std::size_t>(n), b / norm);
    diag[0] = (a + b) / norm;
    LemmaWitness w{SymMatrix::diagonal(diag), std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0};
    w.v[0] = 1.0;
    w.value = a * w.matrix(0, 0) + b * w.matrix.trace();
    return w;
}

double bruteforce_sup(double a, double b, int n, long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("bruteforce_sup: samples must be >= 1");
    if (n < 2 || n > 8) throw std::invalid_argument("bruteforce_sup: n must be in [2, 8]");
    Rng rng(seed);
    double best = 0.0;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long it = 0; it < samples; ++it) {
        SymMatrix m(n);
        double tr = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                // GOE scaling keeps the ensemble rotation invariant.
                const double x = (i == j) ? rng.gaussian() : rng.gaussian() / std::sqrt(2.0);
                m.set(i, j, x);
            }
            tr += m(i, i);
        }
        const double fro = std::sqrt(frobenius_sq(m));
        if (fro == 0.0) continue;

        double vn = 0.0;
        do {
            vn = 0.0;
            for (int i = 0; i < n; ++i) {
                v[static_cast<std::size_t>(i)] = rng.gaussian();
                vn += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            }
        } while (vn == 0.0);
        vn = std::sqrt(vn);

        double quad = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                quad += v[static_cast<std::size_t>(i)] * m(i, j) * v[static_cast<std::size_t>(j)];
        quad /= vn * vn;

        const double val = (a * quad + b * tr) / fro;
        best = std::max(best, val * val);
    }
    return best;
}

} // namespace degen
