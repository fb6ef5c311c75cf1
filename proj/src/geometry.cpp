#include "degenlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace degen {

std::string to_string(GeometryKind k) {
    switch (k) {
        case GeometryKind::line: return "line";
        case GeometryKind::circle: return "circle";
        case GeometryKind::radial_euclidean: return "radial_euclidean";
        case GeometryKind::radial_hyperbolic: return "radial_hyperbolic";
        case GeometryKind::radial_spherical: return "radial_spherical";
    }
    return "?";
}

ModelGeometry::ModelGeometry(GeometryKind kind, int n, double r_lo, double r_hi, int grid_points)
    : kind_(kind), n_(n), r_lo_(r_lo), r_hi_(r_hi), grid_points_(grid_points) {
    if (grid_points < 4) throw std::invalid_argument("ModelGeometry: need at least 4 grid points");
    if (!(r_hi > r_lo)) throw std::invalid_argument("ModelGeometry: need r_hi > r_lo");
    const bool one_dim = kind == GeometryKind::line || kind == GeometryKind::circle;
    if (one_dim && n != 1) throw std::invalid_argument("ModelGeometry: line/circle are one-dimensional");
    if (!one_dim) {
        if (n < 2) throw std::invalid_argument("ModelGeometry: radial models need n >= 2");
        if (!(r_lo > 0.0))
            throw std::invalid_argument("ModelGeometry: radial models need r_lo > 0 (coordinate singularity)");
    }
    if (kind == GeometryKind::radial_spherical && !(r_hi < std::numbers::pi))
        throw std::invalid_argument("ModelGeometry: spherical radial coordinate must stay below pi");
    h_ = (r_hi - r_lo) / (grid_points - 1);
}

ModelGeometry ModelGeometry::circle_with_circumference(double circumference, int grid_points) {
    if (!(circumference > 0.0)) throw std::invalid_argument("ModelGeometry: circumference must be positive");
    const double h = circumference / grid_points;
    return ModelGeometry(GeometryKind::circle, 1, 0.0, h * (grid_points - 1), grid_points);
}

double ModelGeometry::circumference() const {
    if (kind_ != GeometryKind::circle) throw std::logic_error("circumference: not a circle");
    return h_ * grid_points_;
}

double ModelGeometry::weight(double r) const {
    switch (kind_) {
        case GeometryKind::line:
        case GeometryKind::circle: return 1.0;
        case GeometryKind::radial_euclidean: return std::pow(r, n_ - 1);
        case GeometryKind::radial_hyperbolic: return std::pow(std::sinh(r), n_ - 1);
        case GeometryKind::radial_spherical: return std::pow(std::sin(r), n_ - 1);
    }
    return 1.0;
}

double ModelGeometry::ricci_lower_bound() const {
    return kind_ == GeometryKind::radial_hyperbolic ? static_cast<double>(n_ - 1) : 0.0;
}

double ModelGeometry::distance(int i, int j) const { return distance_to(i, node(j)); }

double ModelGeometry::distance_to(int i, double r) const {
    double d = std::abs(node(i) - r);
    if (periodic()) {
        const double lc = circumference();
        d = std::fmod(d, lc);
        d = std::min(d, lc - d);
    }
    return d;
}

int ModelGeometry::nearest_node(double r) const {
    if (periodic()) {
        const double lc = circumference();
        double x = std::fmod(r - r_lo_, lc);
        if (x < 0) x += lc;
        int i = static_cast<int>(std::lround(x / h_)) % grid_points_;
        return i;
    }
    const int i = static_cast<int>(std::lround((r - r_lo_) / h_));
    return std::clamp(i, 0, grid_points_ - 1);
}

Field::Field(GeometryPtr g, double t) : geom(std::move(g)), time(t) {
    values.assign(static_cast<std::size_t>(geom->grid_points()), 0.0);
}

Field::Field(GeometryPtr g, std::vector<double> v, double t)
    : geom(std::move(g)), values(std::move(v)), time(t) {
    if (static_cast<int>(values.size()) != geom->grid_points())
        throw std::invalid_argument("Field: value count does not match the grid");
}

double Field::min_value() const { return *std::min_element(values.begin(), values.end()); }
double Field::max_value() const { return *std::max_element(values.begin(), values.end()); }

Field laplace_beltrami(const Field& f) {
    const ModelGeometry& g = *f.geom;
    const int n = g.grid_points();
    const double h = g.spacing();
    Field out(f.geom, f.time);

    auto row = [&](int i, double fm, double fc, double fp, double sm, double sp) {
        return (sp * (fp - fc) - sm * (fc - fm)) / (g.weight(g.node(i)) * h * h);
    };

    if (g.periodic()) {
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n, ip = (i + 1) % n;
            out.values[i] = row(i, f.values[im], f.values[i], f.values[ip],
                                g.weight(g.node(i) - 0.5 * h), g.weight(g.node(i) + 0.5 * h));
        }
        return out;
    }

    for (int i = 1; i + 1 < n; ++i)
        out.values[i] = row(i, f.values[i - 1], f.values[i], f.values[i + 1],
                            g.weight(g.node(i) - 0.5 * h), g.weight(g.node(i) + 0.5 * h));
    // Even-reflection ghosts at the ends (weights mirrored with the data).
    {
        const double sp = g.weight(g.node(0) + 0.5 * h);
        out.values[0] = row(0, f.values[1], f.values[0], f.values[1], sp, sp);
        const double sm = g.weight(g.node(n - 1) - 0.5 * h);
        out.values[n - 1] = row(n - 1, f.values[n - 2], f.values[n - 1], f.values[n - 2], sm, sm);
    }
    return out;
}

Field gradient_r(const Field& f) {
    const ModelGeometry& g = *f.geom;
    const int n = g.grid_points();
    const double h = g.spacing();
    Field out(f.geom, f.time);

    if (g.periodic()) {
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n, ip = (i + 1) % n;
            out.values[i] = (f.values[ip] - f.values[im]) / (2.0 * h);
        }
        return out;
    }
    for (int i = 1; i + 1 < n; ++i)
        out.values[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
    out.values[0] = (-3.0 * f.values[0] + 4.0 * f.values[1] - f.values[2]) / (2.0 * h);
    out.values[n - 1] = (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) / (2.0 * h);
    return out;
}

Field gradient_norm(const Field& f) {
    Field out = gradient_r(f);
    for (double& v : out.values) v = std::abs(v);
    return out;
}

std::vector<int> geodesic_ball(const ModelGeometry& geom, int x0, double R) {
    if (x0 < 0 || x0 >= geom.grid_points())
        throw std::invalid_argument("geodesic_ball: center outside the grid");
    if (!(R > 0.0)) throw std::invalid_argument("geodesic_ball: radius must be positive");
    const double tol = 1e-12 * (R + geom.spacing());
    std::vector<int> idx;
    for (int i = 0; i < geom.grid_points(); ++i)
        if (geom.distance(x0, i) <= R + tol) idx.push_back(i);
    return idx;
}

namespace {

// Quintic smoothstep and derivatives: s(0)=0, s(1)=1, first and second
// derivatives vanish at both ends (C^2 bump pieces).
double smoothstep5(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
double smoothstep5_d(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
double smoothstep5_dd(double x) { return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x); }

double bump(double rho) {
    if (rho <= 0.5) return 1.0;
    if (rho >= 1.0) return 0.0;
    return 1.0 - smoothstep5(2.0 * rho - 1.0);
}
double bump_d(double rho) {
    if (rho <= 0.5 || rho >= 1.0) return 0.0;
    return -2.0 * smoothstep5_d(2.0 * rho - 1.0);
}
double bump_dd(double rho) {
    if (rho <= 0.5 || rho >= 1.0) return 0.0;
    return -4.0 * smoothstep5_dd(2.0 * rho - 1.0);
}

} // namespace

CutoffPsi::CutoffPsi(GeometryPtr geom, int x0, double R, double t0, double T)
    : geom_(std::move(geom)), x0_(x0), R_(R), t0_(t0), T_(T) {
    if (x0 < 0 || x0 >= geom_->grid_points())
        throw std::invalid_argument("CutoffPsi: center outside the grid");
    if (!(R > 0.0 && T > 0.0)) throw std::invalid_argument("CutoffPsi: need R, T > 0");
}

double CutoffPsi::operator()(int node, double t) const {
    const double sigma = (t0_ - t) / T_;
    if (sigma < 0.0) return 0.0;
    return bump(geom_->distance(x0_, node) / R_) * bump(sigma);
}

double CutoffPsi::dr(int node, double t) const {
    const double sigma = (t0_ - t) / T_;
    if (sigma < 0.0) return 0.0;
    const double sgn = geom_->node(node) >= geom_->node(x0_) ? 1.0 : -1.0;
    return sgn * bump_d(geom_->distance(x0_, node) / R_) / R_ * bump(sigma);
}

double CutoffPsi::drr(int node, double t) const {
    const double sigma = (t0_ - t) / T_;
    if (sigma < 0.0) return 0.0;
    return bump_dd(geom_->distance(x0_, node) / R_) / (R_ * R_) * bump(sigma);
}

double CutoffPsi::dt(int node, double t) const {
    const double sigma = (t0_ - t) / T_;
    if (sigma < 0.0) return 0.0;
    return bump(geom_->distance(x0_, node) / R_) * bump_d(sigma) * (-1.0 / T_);
}

CutoffConstants cutoff_constants(const CutoffPsi& psi, const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("cutoff_constants: no times given");
    const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
    const double tol = 1e-12 * (std::abs(psi.t0()) + psi.T());
    if (*tmin > psi.t0() - psi.T() + tol || *tmax < psi.t0() - tol)
        throw std::invalid_argument("cutoff_constants: window exceeds the supplied time range");

    const ModelGeometry& g = psi.geometry();
    CutoffConstants c;
    c.equals_one_on_half_cube = true;
    c.within_unit_interval = true;
    c.radially_nonincreasing = true;
    const double t0 = psi.t0();
    for (double t : times) {
        double prev_d = -1.0, prev_psi = 2.0;
        std::vector<int> order(static_cast<std::size_t>(g.grid_points()));
        for (int i = 0; i < g.grid_points(); ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return g.distance(psi.center(), a) < g.distance(psi.center(), b);
        });
        for (int i : order) {
            const double d = g.distance(psi.center(), i);
            const double p = psi(i, t);
            if (p < -1e-15 || p > 1.0 + 1e-15) c.within_unit_interval = false;
            if (d <= 0.5 * psi.R() && (t0 - t) <= 0.5 * psi.T() && t <= t0 && p != 1.0)
                c.equals_one_on_half_cube = false;
            if (d > prev_d && p > prev_psi + 1e-14) c.radially_nonincreasing = false;
            prev_d = d;
            prev_psi = p;
            if (p > 0.0) {
                c.grad_ratio = std::max(c.grad_ratio, std::abs(psi.dr(i, t)) / std::sqrt(p) * psi.R());
                c.hess_ratio = std::max(c.hess_ratio,
                                        std::abs(psi.drr(i, t)) / std::sqrt(p) * psi.R() * psi.R());
                const double pt = psi.dt(i, t);
                c.time_ratio = std::max(c.time_ratio, pt * pt / p * psi.T() * psi.T());
            }
        }
    }
    return c;
}

void write_field_csv(const Field& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("write_field_csv: cannot open " + path);
    std::fputs("r,value\n", fp);
    for (int i = 0; i < f.size(); ++i)
        std::fprintf(fp, "%.17g,%.17g\n", f.geom->node(i), f.values[static_cast<std::size_t>(i)]);
    std::fclose(fp);
}

std::vector<std::pair<double, double>> read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("read_field_csv: malformed row");
        rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return rows;
}

} // namespace degen
