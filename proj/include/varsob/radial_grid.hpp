#pragma once

// Discretized radial functions: quadrature grids on balls and segments,
// per-node function values, and exponent fields with cached bounds.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quadrature.hpp"
#include "special_functions.hpp"

namespace varsob {

// ============================================================
// grid
// ============================================================

/// Radial quadrature grid: nodes r_0 = 0 < r_1 < ... < r_M with nonnegative
/// weights.  Ball grids bake omega_{n-1} r^{n-1} dr into the weights, so a
/// plain weighted sum over nodes integrates over the n-ball; segment grids
/// carry plain dr.  Node 0 always has weight zero (the measure there
/// vanishes); it is kept so functions know their value at the center.
struct RadialGrid {
    int n;                        // ambient dimension (1 for segment grids)
    double r_max;
    std::vector<double> nodes;
    std::vector<double> weights;

    double measure() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

namespace detail {

inline void check_edges(const std::vector<double>& edges) {
    if (edges.size() < 2) throw std::invalid_argument("grid: need at least one panel");
    if (edges.front() < 0.0) throw std::invalid_argument("grid: edges must be >= 0");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1]))
            throw std::invalid_argument("grid: edges must increase strictly");
    if (!std::isfinite(edges.back()))
        throw std::invalid_argument("grid: edges must be finite");
}

/// Composite Gauss-Legendre assembly.  radial_factor(r) scales dr into the
/// measure actually integrated (omega r^{n-1} for balls, 1 for segments).
inline GridPtr assemble_grid(int n, const std::vector<double>& edges,
                             int points_per_panel,
                             const std::function<double(double)>& radial_factor) {
    check_edges(edges);
    if (points_per_panel < 2 || points_per_panel > 64)
        throw std::invalid_argument("grid: points per panel must be in [2, 64]");

    std::vector<double> gx, gw;
    gauss_legendre(points_per_panel, gx, gw);

    auto g = std::make_shared<RadialGrid>();
    g->n = n;
    g->r_max = edges.back();
    g->nodes.push_back(0.0);
    g->weights.push_back(0.0);
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        const double c = 0.5 * (edges[j] + edges[j + 1]);
        const double h = 0.5 * (edges[j + 1] - edges[j]);
        for (int i = 0; i < points_per_panel; ++i) {
            const double r = c + h * gx[i];
            g->nodes.push_back(r);
            g->weights.push_back(h * gw[i] * radial_factor(r));
        }
    }
    return g;
}

} // namespace detail

/// Ball grid with uniform panels on [0, r_max].
inline GridPtr make_ball_grid(int n, double r_max, int panels,
                              int points_per_panel = 8) {
    if (n < 1) throw std::invalid_argument("make_ball_grid: requires n >= 1");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("make_ball_grid: requires finite r_max > 0");
    if (panels < 1) throw std::invalid_argument("make_ball_grid: requires panels >= 1");
    std::vector<double> edges(panels + 1);
    for (int j = 0; j <= panels; ++j) edges[j] = r_max * j / panels;
    const double omega = sphere_area(n);
    return detail::assemble_grid(n, edges, points_per_panel, [n, omega](double r) {
        return omega * std::pow(r, n - 1);
    });
}

/// Ball grid with panels doubling geometrically from r_inner out to r_max,
/// resolving functions that concentrate near the origin.
inline GridPtr make_ball_grid_geometric(int n, double r_max, double r_inner,
                                        int points_per_panel = 8) {
    if (n < 1) throw std::invalid_argument("make_ball_grid_geometric: requires n >= 1");
    if (!(r_inner > 0.0) || !(r_inner < r_max) || !std::isfinite(r_max))
        throw std::invalid_argument(
            "make_ball_grid_geometric: requires 0 < r_inner < r_max < inf");
    std::vector<double> edges{0.0};
    for (double e = r_inner; e < r_max; e *= 2.0) edges.push_back(e);
    edges.push_back(r_max);
    const double omega = sphere_area(n);
    return detail::assemble_grid(n, edges, points_per_panel, [n, omega](double r) {
        return omega * std::pow(r, n - 1);
    });
}

/// One-dimensional segment grid carrying plain length measure, with panel
/// edges given explicitly (place exponent jumps on edges: nodes are strictly
/// interior to panels, so a piecewise rule is never sampled at a jump).
inline GridPtr make_segment_grid(const std::vector<double>& edges,
                                 int points_per_panel = 8) {
    return detail::assemble_grid(1, edges, points_per_panel,
                                 [](double) { return 1.0; });
}

// ============================================================
// functions on a grid
// ============================================================

class DiscreteFunction {
  public:
    DiscreteFunction(GridPtr grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (!grid_) throw std::invalid_argument("DiscreteFunction: null grid");
        if (values_.size() != grid_->nodes.size())
            throw std::invalid_argument(
                "DiscreteFunction: values size must match grid nodes");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("DiscreteFunction: values must be finite");
    }

    static DiscreteFunction from_rule(GridPtr grid,
                                      const std::function<double(double)>& f) {
        if (!grid) throw std::invalid_argument("DiscreteFunction: null grid");
        std::vector<double> v;
        v.reserve(grid->nodes.size());
        for (double r : grid->nodes) v.push_back(f(r));
        return DiscreteFunction(std::move(grid), std::move(v));
    }

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    DiscreteFunction scaled(double c) const {
        std::vector<double> v(values_);
        for (double& x : v) x *= c;
        return DiscreteFunction(grid_, std::move(v));
    }

    DiscreteFunction plus(const DiscreteFunction& other) const {
        require_same_grid(other);
        std::vector<double> v(values_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
        return DiscreteFunction(grid_, std::move(v));
    }

    DiscreteFunction pointwise_product(const DiscreteFunction& other) const {
        require_same_grid(other);
        std::vector<double> v(values_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= other.values_[i];
        return DiscreteFunction(grid_, std::move(v));
    }

    /// Largest |value| over nodes that carry measure.
    double sup_on_support() const {
        double m = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (grid_->weights[i] > 0.0) m = std::max(m, std::abs(values_[i]));
        return m;
    }

    void require_same_grid(const DiscreteFunction& other) const {
        if (grid_ != other.grid_)
            throw std::invalid_argument("DiscreteFunction: grids do not match");
    }

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

// ============================================================
// exponent fields
// ============================================================

/// A variable exponent r -> p(r), sampled once per grid node with cached
/// inf/sup.  Values must lie in [1, inf); 1 itself is admitted because the
/// conjugate exponent of a Holder pair degenerates to 1 at p = q = 2.
class ExponentField {
  public:
    ExponentField(GridPtr grid, std::vector<double> node_values)
        : grid_(std::move(grid)), node_values_(std::move(node_values)) {
        if (!grid_) throw std::invalid_argument("ExponentField: null grid");
        if (node_values_.size() != grid_->nodes.size())
            throw std::invalid_argument(
                "ExponentField: values size must match grid nodes");
        inf_ = std::numeric_limits<double>::infinity();
        sup_ = 1.0;
        for (double p : node_values_) {
            if (!std::isfinite(p) || p < 1.0 - 1e-12)
                throw std::domain_error(
                    "ExponentField: exponent must be finite and >= 1");
            inf_ = std::min(inf_, p);
            sup_ = std::max(sup_, p);
        }
    }

    ExponentField(GridPtr grid, const std::function<double(double)>& rule)
        : ExponentField(grid, sample_rule(grid, rule)) {}

    static ExponentField constant(GridPtr grid, double p) {
        return ExponentField(std::move(grid), [p](double) { return p; });
    }

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& node_values() const { return node_values_; }
    double inf_exponent() const { return inf_; }
    double sup_exponent() const { return sup_; }

    void require_same_grid(const DiscreteFunction& u) const {
        if (grid_ != u.grid())
            throw std::invalid_argument("ExponentField: grid does not match function");
    }

  private:
    static std::vector<double> sample_rule(const GridPtr& grid,
                                           const std::function<double(double)>& rule) {
        if (!grid) throw std::invalid_argument("ExponentField: null grid");
        std::vector<double> v;
        v.reserve(grid->nodes.size());
        for (double r : grid->nodes) v.push_back(rule(r));
        return v;
    }

    GridPtr grid_;
    std::vector<double> node_values_;
    double inf_ = 1.0;
    double sup_ = 1.0;
};

} // namespace varsob
