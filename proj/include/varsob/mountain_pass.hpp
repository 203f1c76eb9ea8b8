#pragma once

// The energy functional J, its maximum along the normalized-bubble ray, the
// margin against the compactness threshold, the curvature condition on the
// exponent Hessians, and numerical probes of the mountain-pass geometry.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "energy.hpp"
#include "expansion.hpp"
#include "luxemburg.hpp"
#include "radial_grid.hpp"

namespace varsob {

// ============================================================
// the functional
// ============================================================

/// J(u) = int (1/p(x)) (|grad u|^{p(x)} + h0 |u|^{p(x)}) - int (1/q(x)) |u|^{q(x)},
/// evaluated with the grid's own quadrature rule.  u and du must share the
/// grid, and both must vanish at the outermost node — a nonzero boundary
/// value means the grid cuts the function off mid-support.
inline double functional_J(const DiscreteFunction& u, const DiscreteFunction& du,
                           const EnergyProblem& prob) {
    u.require_same_grid(du);
    const RadialGrid& g = *u.grid();
    if (g.n != prob.dims.n)
        throw std::domain_error("functional_J: grid dimension does not match the problem");
    if (u.values().back() != 0.0 || du.values().back() != 0.0)
        throw std::domain_error(
            "functional_J: function does not vanish at the grid boundary (support not covered)");

    double acc = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const double w = g.weights[i];
        if (w == 0.0) continue;
        const double r = g.nodes[i];
        const double uu = std::abs(u.values()[i]);
        const double gu = std::abs(du.values()[i]);
        if (uu == 0.0 && gu == 0.0) continue;
        const double pv = prob.p_at(r);
        double term = 0.0;
        if (gu != 0.0) term += std::pow(gu, pv) / pv;
        if (uu != 0.0) {
            if (prob.h0 != 0.0) term += prob.h0 * std::pow(uu, pv) / pv;
            const double qv = prob.q_at(r);
            term -= std::pow(uu, qv) / qv;
        }
        acc += w * term;
    }
    return acc;
}

/// J(t v_eps) for the normalized cutoff bubble, by adaptive quadrature over
/// the support (the half line when the cutoff is disabled).
inline double functional_J_ray(const EnergyProblem& prob, double eps, double t,
                               const QuadSpec& spec = {}) {
    if (!(t >= 0.0)) throw std::domain_error("functional_J_ray: requires t >= 0");
    if (t == 0.0) return 0.0;
    const BubbleParams bp(prob.dims, eps, prob.delta);
    const double cnorm = bubble_normalization(prob.dims);
    return detail::integrate_bubble(
        prob, eps,
        [&, cnorm, t](double r) {
            const double v = cnorm * cutoff_bubble_value(bp, r);
            const double dv = cnorm * std::abs(cutoff_bubble_deriv(bp, r));
            if (v == 0.0 && dv == 0.0) return 0.0;
            const double pv = prob.p_at(r);
            double term = 0.0;
            if (dv != 0.0) term += std::pow(t * dv, pv) / pv;
            if (v != 0.0) {
                const double tv = t * v;
                if (prob.h0 != 0.0) term += prob.h0 * std::pow(tv, pv) / pv;
                term -= std::pow(tv, prob.q_at(r)) / prob.q_at(r);
            }
            return term;
        },
        spec);
}

// ============================================================
// the ray maximum
// ============================================================

struct RayMaximum {
    double t_star; // maximizer of t -> J(t v_eps)
    double sup;    // J(t_star v_eps)
    double margin; // sup - (1/n) K(n,p)^{-n}
};

/// Maximizes t -> J(t v_eps): brackets by doubling until the ray goes
/// negative, presamples coarsely, then golden-section refines to
/// |Delta t| <= 1e-8.  Reports the margin against the compactness threshold.
inline RayMaximum sup_over_ray(const EnergyProblem& prob, double eps, const QuadSpec& spec = {}) {
    auto J = [&](double t) { return functional_J_ray(prob, eps, t, spec); };

    double t0 = 1.0;
    for (int k = 0; J(t0) >= 0.0; ++k) {
        // Defensive cap: for the bubble ray the supercritical term always
        // wins eventually, so running off means the problem is mis-specified.
        if (k > 60)
            throw std::runtime_error("sup_over_ray: J never becomes negative along the ray");
        t0 *= 2.0;
    }

    // Coarse scan: the ray leaves 0 at 0, peaks once near the normalized
    // maximizer, then dives; 48 panels bracket the peak robustly.
    const int m = 48;
    int best = 0;
    double best_val = 0.0; // J(0) = 0
    std::vector<double> samples(m + 1, 0.0);
    for (int j = 1; j <= m; ++j) {
        samples[j] = J(t0 * j / m);
        if (samples[j] > best_val) {
            best_val = samples[j];
            best = j;
        }
    }
    double lo = t0 * std::max(0, best - 1) / m;
    double hi = t0 * std::min(m, best + 1) / m;

    // Golden-section ascent on [lo, hi].
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = J(x1), f2 = J(x2);
    while (b - a > 1e-8) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = J(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = J(x1);
        }
    }
    const double t_star = 0.5 * (a + b);
    const double sup = J(t_star);
    return {t_star, sup, sup - compactness_threshold(prob.dims)};
}

// ============================================================
// curvature condition
// ============================================================

struct CondReport {
    double lhs;     // -lap p(0)
    double rhs;     // -lap q(0) * (p/p*)^2 * D(n,p)
    bool satisfied; // strict inequality lhs < rhs
};

/// The curvature condition comparing the Hessian traces through the moment
/// ratio D(n,p):  -lap p(0) < -lap q(0) (p/p*)^2 D(n,p).
inline CondReport cond_check(const EnergyProblem& prob) {
    const double d = moment_ratio(prob.dims); // throws where the ratio diverges
    const double s = prob.dims.p / prob.dims.critical_exponent();
    const double lhs = -prob.p_model.laplacian();
    const double rhs = -prob.q_model.laplacian() * s * s * d;
    return {lhs, rhs, lhs < rhs};
}

// ============================================================
// mountain-pass geometry
// ============================================================

struct GeometryReport {
    double j_at_zero = 0.0;   // J of the zero function (exact)
    int directions = 0;        // random directions probed
    int positive_count = 0;    // directions with J > 0 at the probe radius
    double min_value = 0.0;    // smallest probed J (empirical positivity margin)
    double probe_radius = 0.0; // W-norm the directions are scaled to
    double t_descent = 0.0;    // explicit t with J(t v_eps) < 0
    double j_at_descent = 0.0;
    bool ok() const {
        return j_at_zero == 0.0 && directions > 0 && positive_count == directions &&
               j_at_descent < 0.0;
    }
};

/// Numerical probe of the mountain-pass geometry: J(0) = 0, J > 0 on random
/// smooth directions scaled to a small W-norm (value + gradient Luxemburg
/// norms), and J < 0 at an explicit point beyond the ridge (10 times the ray
/// maximizer).  Directions are cutoff-damped sums of Gaussian bumps, so both
/// the values and the radial derivative are sampled analytically.
inline GeometryReport mp_geometry_check(const EnergyProblem& prob, double eps,
                                        int directions = 100, double probe_radius = 1e-3,
                                        std::uint64_t seed = 20240817,
                                        const QuadSpec& spec = {}) {
    if (directions < 1) throw std::invalid_argument("mp_geometry_check: directions >= 1");
    if (!(probe_radius > 0.0))
        throw std::invalid_argument("mp_geometry_check: probe radius must be positive");
    if (!std::isfinite(prob.delta))
        throw std::invalid_argument("mp_geometry_check: requires a finite cutoff radius");

    const double R = 2.0 * prob.delta;
    const GridPtr grid = make_ball_grid(prob.dims.n, R, 48, 8);
    const ExponentField p_field(grid, [&prob](double r) { return prob.p_at(r); });

    GeometryReport rep;
    rep.directions = directions;
    rep.probe_radius = probe_radius;
    rep.min_value = std::numeric_limits<double>::infinity();

    // J(0) through the same code path as every other probe.
    const DiscreteFunction zero(grid, std::vector<double>(grid->nodes.size(), 0.0));
    rep.j_at_zero = functional_J(zero, zero, prob);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> center(0.0, prob.delta);
    std::uniform_real_distribution<double> width(prob.delta / 6.0, prob.delta / 2.0);

    const int bumps = 5;
    for (int dir = 0; dir < directions; ++dir) {
        std::vector<double> a(bumps), c(bumps), w(bumps);
        for (int j = 0; j < bumps; ++j) {
            a[j] = coef(rng);
            c[j] = center(rng);
            w[j] = width(rng);
        }
        std::vector<double> vals(grid->nodes.size()), ders(grid->nodes.size());
        for (size_t i = 0; i < grid->nodes.size(); ++i) {
            const double r = grid->nodes[i];
            double s = 0.0, ds = 0.0;
            for (int j = 0; j < bumps; ++j) {
                const double z = (r - c[j]) / w[j];
                const double b = a[j] * std::exp(-z * z);
                s += b;
                ds += b * (-2.0 * z / w[j]);
            }
            // The problem's own cutoff confines the direction to the support.
            const double e = cutoff(r, prob.delta);
            const double de = cutoff_deriv(r, prob.delta);
            vals[i] = e * s;
            ders[i] = e * ds + de * s;
        }
        DiscreteFunction u(grid, std::move(vals));
        DiscreteFunction du(grid, std::move(ders));

        const double norm = luxemburg_norm(u, p_field) + luxemburg_norm(du, p_field);
        if (norm == 0.0) continue; // an all-zero draw carries no direction
        const double s = probe_radius / norm;
        const double jv = functional_J(u.scaled(s), du.scaled(s), prob);
        if (jv > 0.0) ++rep.positive_count;
        if (jv < rep.min_value) rep.min_value = jv;
    }

    const RayMaximum peak = sup_over_ray(prob, eps, spec);
    rep.t_descent = 10.0 * peak.t_star;
    rep.j_at_descent = functional_J_ray(prob, eps, rep.t_descent, spec);
    return rep;
}

// ============================================================
// the level report
// ============================================================

struct MPRow {
    double eps;
    double t_star;
    double sup;
    double margin;
    double ratio; // margin / (eps^2 ln eps)  if p >= 2;  margin / eps^p  if p < 2
};

struct MPReport {
    bool second_order_branch = true; // p >= 2: the eps^2 ln(eps) correction rules
    double threshold = 0.0;          // (1/n) K^{-n}
    NormalizedConstants abc{};
    // The correction coefficient the normalized-constant calculus assigns to
    // the branch:  a/p* - b/p  (p >= 2)  or  h0 c / p  (p < 2).
    double predicted_coefficient = 0.0;
    CondReport cond{};
    std::vector<MPRow> rows;
    double fitted_coefficient = std::numeric_limits<double>::quiet_NaN();
    double fit_nuisance = std::numeric_limits<double>::quiet_NaN();
    bool margin_negative_at_smallest = false;
    // Whether the smallest-eps margin sign matches what the branch coefficient
    // predicts through margin ~ coeff * regressor (regressor < 0 on the
    // second-order branch, > 0 on the eps^p branch).  A zero coefficient
    // predicts a margin within the degenerate band |margin| <= band.
    bool sign_as_predicted = false;
    double degenerate_band = 0.0;
};

/// Sweeps sup_over_ray across a strictly decreasing eps-sequence and compares
/// margins against the branch prediction.
inline MPReport run_mountain_pass(const EnergyProblem& prob, const std::vector<double>& eps_seq,
                                  const QuadSpec& spec = {}, double degenerate_rel_band = 1e-6) {
    if (eps_seq.empty()) throw std::invalid_argument("run_mountain_pass: empty eps sequence");
    for (size_t i = 0; i < eps_seq.size(); ++i) {
        if (!(eps_seq[i] > 0.0) || !(eps_seq[i] < 1.0))
            throw std::invalid_argument("run_mountain_pass: eps must lie in (0, 1)");
        if (i > 0 && !(eps_seq[i] < eps_seq[i - 1]))
            throw std::invalid_argument(
                "run_mountain_pass: eps sequence must be strictly decreasing");
    }

    MPReport rep;
    rep.second_order_branch = prob.dims.p >= 2.0;
    rep.threshold = compactness_threshold(prob.dims);
    rep.abc = normalized_abc(prob, spec);
    rep.cond = cond_check(prob);
    const double pst = prob.dims.critical_exponent();
    rep.predicted_coefficient = rep.second_order_branch
                                    ? rep.abc.a / pst - rep.abc.b / prob.dims.p
                                    : prob.h0 * rep.abc.c / prob.dims.p;

    for (double eps : eps_seq) {
        const RayMaximum rm = sup_over_ray(prob, eps, spec);
        MPRow row;
        row.eps = eps;
        row.t_star = rm.t_star;
        row.sup = rm.sup;
        row.margin = rm.margin;
        row.ratio = rep.second_order_branch ? rm.margin / (eps * eps * std::log(eps))
                                            : rm.margin / std::pow(eps, prob.dims.p);
        rep.rows.push_back(row);
    }

    if (rep.second_order_branch && rep.rows.size() >= 2) {
        std::vector<double> eps_v, margin_v;
        for (const MPRow& r : rep.rows) {
            eps_v.push_back(r.eps);
            margin_v.push_back(r.margin);
        }
        const FitResult fit = fit_log_correction(eps_v, margin_v);
        rep.fitted_coefficient = fit.slope;
        rep.fit_nuisance = fit.intercept;
    } else {
        rep.fitted_coefficient = rep.rows.back().ratio;
        rep.fit_nuisance = 0.0;
    }

    const MPRow& last = rep.rows.back();
    rep.margin_negative_at_smallest = last.margin < 0.0;
    rep.degenerate_band = degenerate_rel_band * rep.threshold;
    const double coeff = rep.predicted_coefficient;
    if (coeff == 0.0) {
        rep.sign_as_predicted = std::abs(last.margin) <= rep.degenerate_band;
    } else {
        const double regressor_sign = rep.second_order_branch ? -1.0 : 1.0;
        const double predicted_sign = regressor_sign * (coeff > 0.0 ? 1.0 : -1.0);
        rep.sign_as_predicted = predicted_sign * last.margin > 0.0;
    }
    return rep;
}

} // namespace varsob
