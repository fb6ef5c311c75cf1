#pragma once

#include <memory>
#include <string>
#include <vector>

namespace degen {

enum class GeometryKind { line, circle, radial_euclidean, radial_hyperbolic, radial_spherical };

std::string to_string(GeometryKind k);

/// One-dimensional model geometry with a known Ricci lower bound: a flat
/// segment or circle (n = 1), or the radial coordinate of a constant-curvature
/// model space of dimension n >= 2. All operators act on radially symmetric
/// data, where the Laplace-Beltrami operator reduces to
/// (1/s(r)) d/dr (s(r) d/dr) with volume weight s(r).
class ModelGeometry {
public:
    ModelGeometry(GeometryKind kind, int n, double r_lo, double r_hi, int grid_points);

    /// A circle of the given circumference: nodes cover [0, Lc (N-1)/N] and
    /// node N-1 wraps to node 0 over one further spacing h = Lc/N.
    static ModelGeometry circle_with_circumference(double circumference, int grid_points);

    GeometryKind kind() const { return kind_; }
    int dim() const { return n_; }
    int grid_points() const { return grid_points_; }
    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }
    double spacing() const { return h_; }
    double node(int i) const { return r_lo_ + h_ * i; }
    bool periodic() const { return kind_ == GeometryKind::circle; }
    double circumference() const; // circle only

    /// Volume weight s(r): 1, 1, r^(n-1), sinh^(n-1) r, sin^(n-1) r.
    double weight(double r) const;

    /// k in Ric >= -k: n-1 for the unit hyperbolic model, 0 otherwise
    /// (n = 1 always reports 0).
    double ricci_lower_bound() const;

    /// Distance between nodes along the model (arc distance on the circle).
    double distance(int i, int j) const;
    double distance_to(int i, double r) const;

    int nearest_node(double r) const;

    bool operator==(const ModelGeometry& o) const = default;

private:
    GeometryKind kind_;
    int n_;
    double r_lo_, r_hi_, h_;
    int grid_points_;
};

using GeometryPtr = std::shared_ptr<const ModelGeometry>;

/// Scalar grid function at one instant.
struct Field {
    GeometryPtr geom;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    Field(GeometryPtr g, double t = 0.0);
    Field(GeometryPtr g, std::vector<double> v, double t = 0.0);

    int size() const { return static_cast<int>(values.size()); }
    double min_value() const;
    double max_value() const;
};

/// Divergence-form second-order stencil of the radial Laplace-Beltrami
/// operator. Circle rows wrap; other boundary rows use even-reflection ghosts
/// (interior rows are the ones the estimates consume).
Field laplace_beltrami(const Field& f);

/// Signed radial derivative: centered in the interior, second-order one-sided
/// at the ends (wrapped on the circle).
Field gradient_r(const Field& f);

/// |grad f| = |d f / d r| for radial data.
Field gradient_norm(const Field& f);

/// Node indices with distance(x0, i) <= R. Never empty for a valid center.
std::vector<int> geodesic_ball(const ModelGeometry& geom, int x0, double R);

/// Li-Yau space-time bump: psi(r, t) = chi(d(r, x0)/R) * eta((t0 - t)/T) with
/// quintic-smoothstep profiles, equal to 1 on the half window and supported in
/// the full one. Derivatives are exact, not finite differences.
class CutoffPsi {
public:
    CutoffPsi(GeometryPtr geom, int x0, double R, double t0, double T);

    double operator()(int node, double t) const;
    double dr(int node, double t) const;
    double drr(int node, double t) const;
    double dt(int node, double t) const;

    double R() const { return R_; }
    double T() const { return T_; }
    double t0() const { return t0_; }
    int center() const { return x0_; }
    const ModelGeometry& geometry() const { return *geom_; }

private:
    GeometryPtr geom_;
    int x0_;
    double R_, t0_, T_;
};

/// Grid suprema of the cutoff's defining ratios, evaluated where psi > 0:
///   grad_ratio  = sup |dr psi| / psi^a * R      (a = 1/2)
///   hess_ratio  = sup |drr psi| / psi^a * R^2
///   time_ratio  = sup (dt psi)^2 / psi * T^2
struct CutoffConstants {
    bool equals_one_on_half_cube = false;
    bool within_unit_interval = false;
    bool radially_nonincreasing = false;
    double grad_ratio = 0.0;
    double hess_ratio = 0.0;
    double time_ratio = 0.0;
};

/// Evaluate the cutoff properties over the grid and the given times. Times
/// must cover the window [t0 - T, t0].
CutoffConstants cutoff_constants(const CutoffPsi& psi, const std::vector<double>& times);

/// Write a field as CSV (`r,value`, 17 significant digits); read it back.
void write_field_csv(const Field& f, const std::string& path);
std::vector<std::pair<double, double>> read_field_csv(const std::string& path);

} // namespace degen
