#pragma once

#include <cstdint>
#include <vector>

namespace degen {

/// Small dense symmetric matrix (2 <= n <= 8). Storage is row-major n*n with
/// symmetry enforced on write.
class SymMatrix {
public:
    explicit SymMatrix(int n);

    int size() const { return n_; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double value);

    double trace() const;
    bool is_zero() const;

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const std::vector<double>& d);

private:
    int n_;
    std::vector<double> a_;
};

/// Eigenpairs of a SymMatrix; vectors[k] is the unit eigenvector for values[k].
struct EigenSystem {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// Cyclic Jacobi rotations; adequate and robust at these sizes.
EigenSystem jacobi_eigensystem(const SymMatrix& a);

/// |A|^2 = sum of squared entries = sum of squared eigenvalues.
double frobenius_sq(const SymMatrix& a);

struct QuadraticExtrema {
    double max;
    double min;
};

/// Extrema over unit vectors v of (a*A + b*tr(A)*I)(v, v). The matrix must be
/// nonzero.
QuadraticExtrema extremal_quadratic(const SymMatrix& a_mat, double a, double b);

/// (a+b)^2 + (n-1) b^2: the supremum over nonzero symmetric A and unit v of
/// [(a*A + b*tr(A)*I)(v,v) / |A|]^2.
double supremum_bound(double a, double b, int n);

struct LemmaWitness {
    SymMatrix matrix;        // unit Frobenius norm, diagonal
    std::vector<double> v;   // unit vector attaining the bound
    double value;            // (a*A + b*tr(A)*I)(v, v); value^2 == supremum_bound
};

/// Attaining pair for supremum_bound: spectrum proportional to
/// (a+b, b, ..., b) with v the first basis vector. (a, b) must be nonzero.
LemmaWitness witness(double a, double b, int n);

/// Empirical maximum of [(a*A + b*tr(A)*I)(v,v) / |A|]^2 over `samples` draws,
/// A from a Frobenius-normalized gaussian symmetric ensemble and v uniform on
/// the sphere. Deterministic for a fixed seed.
double bruteforce_sup(double a, double b, int n, long samples, std::uint64_t seed);

} // namespace degen
