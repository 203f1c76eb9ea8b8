#pragma once

// Deterministic adaptive quadrature.
//
// The 1-D workhorse is a nested Gauss(7)/Kronrod(15) pair with worst-interval
// bisection.  Half-line integrals are mapped onto (0,1) with r = t/(1-t);
// radial integrals over R^n reduce to the half line against the measure
// omega_{n-1} r^{n-1} dr; full quadratic-form integrals int g(|x|) (Ax,x) dx
// use tensor-product panels on a truncated box plus an explicit tail bound.
//
// Everything is deterministic: fixed node tables, fixed refinement order,
// fixed summation order.  Repeated calls with identical inputs return
// bit-identical results.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense_matrix.hpp"
#include "special_functions.hpp"

namespace varsob {

struct QuadSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    // When true, half-line integrals are transformed with r = t/(1-t).
    // When false they are truncated at a large fixed radius instead; only
    // appropriate for integrands with compact effective support.
    bool tail_transform = true;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
};

/// Thrown when the requested accuracy cannot be certified.  Carries the best
/// available estimate so callers can still inspect what was computed.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (QUADPACK dqk15 constants).
inline constexpr double gk15_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
inline constexpr double gk15_wk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278,
};
inline constexpr double gk15_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
};

struct Segment {
    double a, b;
    double value;
    double error;
};

// One Gauss-Kronrod 7/15 application on [a,b] with the QUADPACK error model.
template <class F>
Segment gk15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    double fv[15];
    const double fc = f(mid);
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(mid - half * gk15_x[j]);
        fv[7 + j] = f(mid + half * gk15_x[j]);
    }

    double resk = gk15_wk[7] * fc;
    double resabs = std::abs(resk);
    double resg = gk15_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        resk += gk15_wk[j] * (fv[j] + fv[7 + j]);
        resabs += gk15_wk[j] * (std::abs(fv[j]) + std::abs(fv[7 + j]));
        if (j % 2 == 1) resg += gk15_wg[j / 2] * (fv[j] + fv[7 + j]);
    }
    const double reskh = resk * 0.5;
    double resasc = gk15_wk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += gk15_wk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[7 + j] - reskh));

    resasc *= std::abs(half);
    resabs *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (eps_floor > std::numeric_limits<double>::min()) err = std::max(err, eps_floor);

    return Segment{a, b, resk * half, err};
}

} // namespace detail

/// Adaptive integral of f over the finite interval [a, b].  Optional interior
/// breakpoints seed the initial subdivision (useful for sharply peaked
/// integrands whose scale is known in advance).
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadSpec& spec = {},
                     const std::vector<double>& breakpoints = {}) {
    if (!(a < b)) throw std::domain_error("integrate: requires a < b");

    std::vector<double> edges;
    edges.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) edges.push_back(c);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<detail::Segment> segs;
    segs.reserve(64);
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        segs.push_back(detail::gk15(f, edges[i], edges[i + 1]));

    auto totals = [&segs]() {
        // Fixed left-to-right order keeps the summation deterministic.
        std::sort(segs.begin(), segs.end(),
                  [](const detail::Segment& u, const detail::Segment& v) { return u.a < v.a; });
        double value = 0.0, err = 0.0;
        for (const auto& s : segs) {
            value += s.value;
            err += s.error;
        }
        return std::pair<double, double>(value, err);
    };

    int splits = 0;
    for (;;) {
        auto [value, err] = totals();
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
        if (std::isfinite(value) && err <= target)
            return QuadResult{value, err, splits};
        if (splits >= spec.max_subdivisions)
            throw QuadratureError(
                "integrate: accuracy not reached after " + std::to_string(splits) +
                    " subdivisions (error estimate " + std::to_string(err) + ")",
                value, err);

        // Split the worst segment; ties resolve to the leftmost.
        size_t worst = 0;
        for (size_t i = 1; i < segs.size(); ++i) {
            const bool worse = segs[i].error > segs[worst].error ||
                               (segs[i].error == segs[worst].error && segs[i].a < segs[worst].a);
            if (worse) worst = i;
        }
        const detail::Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(s.a < mid && mid < s.b))
            throw QuadratureError("integrate: interval collapsed below machine resolution",
                                  totals().first, totals().second);
        segs[worst] = detail::gk15(f, s.a, mid);
        segs.push_back(detail::gk15(f, mid, s.b));
        ++splits;
    }
}

/// Adaptive integral of f over [0, inf).  Breakpoints are given in r-space.
template <class F>
QuadResult integrate_halfline(F&& f, const QuadSpec& spec = {},
                              const std::vector<double>& breakpoints = {}) {
    if (!spec.tail_transform) {
        // Truncation mode: only sound for integrands that die off well before
        // the fixed cap; the tail is simply not looked at.
        constexpr double cap = 1e8;
        std::vector<double> br = breakpoints;
        for (double d = 1.0; d < cap; d *= 10.0) br.push_back(d);
        return integrate(f, 0.0, cap, spec, br);
    }
    // The map r = t/(1-t) is evaluated in the complementary variable
    // s = 1-t, putting the tail endpoint at s = 0.  There the floating-point
    // grid is logarithmically dense, so bisection can chase an algebraic
    // tail singularity arbitrarily far; at t = 1 it would stall on the
    // 2^-53 spacing of doubles below 1.
    auto g = [&f](double s) {
        const double r = (1.0 - s) / s;
        const double fr = f(r);
        return fr == 0.0 ? 0.0 : fr / (s * s);
    };
    std::vector<double> br;
    br.reserve(breakpoints.size());
    for (double r : breakpoints)
        if (r > 0.0 && std::isfinite(r)) br.push_back(1.0 / (1.0 + r));
    return integrate(g, 0.0, 1.0, spec, br);
}

/// int_{R^n} g(|x|) dx = omega_{n-1} int_0^{r_max} g(r) r^{n-1} dr.
/// r_max defaults to infinity; pass a finite value for compactly supported g.
template <class G>
QuadResult integrate_radial(int n, G&& g, const QuadSpec& spec = {},
                            double r_max = std::numeric_limits<double>::infinity(),
                            const std::vector<double>& breakpoints = {}) {
    if (n < 1) throw std::domain_error("integrate_radial: requires n >= 1");
    const double omega = sphere_area(n);
    auto integrand = [&g, n](double r) {
        const double gv = g(r);
        // Ordering matters: a zero integrand must not touch pow(r, n-1),
        // which can overflow for the huge radii probed by the tail map.
        return gv == 0.0 ? 0.0 : gv * std::pow(r, n - 1);
    };
    QuadResult q = std::isfinite(r_max)
                       ? integrate(integrand, 0.0, r_max, spec, breakpoints)
                       : integrate_halfline(integrand, spec, breakpoints);
    q.value *= omega;
    q.error_estimate *= omega;
    return q;
}

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_k.
/// k is tiny (<= 32) so recomputing on demand is cheap and stateless.
inline void gauss_legendre(int k, std::vector<double>& x, std::vector<double>& w) {
    x.assign(k, 0.0);
    w.assign(k, 0.0);
    const int m = (k + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (k + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < k; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = k * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[k - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[k - 1 - i] = w[i];
    }
}

// Composite panel nodes covering [-R, R]: geometric panels from a unit-ish
// core outwards, mirrored around zero.  Returns strictly increasing nodes.
inline void symmetric_panel_nodes(double R, int points_per_panel,
                                  std::vector<double>& nodes, std::vector<double>& weights) {
    std::vector<double> edges; // positive side, ascending, starting at 0
    edges.push_back(0.0);
    double e = std::min(0.5, R);
    while (e < R) {
        edges.push_back(e);
        e *= 2.0;
    }
    edges.push_back(R);

    std::vector<double> gx, gw;
    gauss_legendre(points_per_panel, gx, gw);

    std::vector<double> pos_n, pos_w;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int j = 0; j < points_per_panel; ++j) {
            pos_n.push_back(mid + half * gx[j]);
            pos_w.push_back(half * gw[j]);
        }
    }
    nodes.clear();
    weights.clear();
    for (size_t i = pos_n.size(); i-- > 0;) {
        nodes.push_back(-pos_n[i]);
        weights.push_back(pos_w[i]);
    }
    nodes.insert(nodes.end(), pos_n.begin(), pos_n.end());
    weights.insert(weights.end(), pos_w.begin(), pos_w.end());
}

} // namespace detail

/// int_{R^n} g(|x|) (A x, x) dx by tensor-product quadrature on [-R, R]^n.
///
/// Supported for n in {2, 3, 4}.  The truncation radius R is grown until the
/// analytic tail bound  |A|_F * omega_{n-1} * int_R^inf |g| r^{n+1} dr  drops
/// below a tenth of the tolerance budget; slow decay raises QuadratureError.
template <class G>
QuadResult integrate_quadratic_form(int n, G&& g, const DenseMatrix& A,
                                    const QuadSpec& spec = {}) {
    if (n < 2 || n > 4)
        throw std::domain_error("integrate_quadratic_form: supported for n in {2,3,4}");
    if (A.n != n)
        throw std::invalid_argument("integrate_quadratic_form: matrix dimension mismatch");

    // Reference scale: the isotropic second moment (also certifies decay).
    QuadSpec ref_spec = spec;
    ref_spec.rel_tol = std::max(spec.rel_tol, 1e-8);
    const QuadResult ref =
        integrate_radial(n, [&g](double r) { return std::abs(g(r)) * r * r; }, ref_spec);
    const double a_norm = std::max(A.frobenius_norm(), 1e-300);
    const double budget =
        std::max(spec.abs_tol, spec.rel_tol * std::max(ref.value * a_norm, 1e-300)) / 10.0;

    const double omega = sphere_area(n);
    double R = 4.0;
    for (;;) {
        auto tail_integrand = [&g, R, n](double s) {
            const double r = R + s;
            const double gv = std::abs(g(r));
            return gv == 0.0 ? 0.0 : gv * std::pow(r, n + 1);
        };
        QuadSpec tail_spec = spec;
        tail_spec.rel_tol = 1e-6;
        tail_spec.abs_tol = budget * 1e-3 / std::max(omega * a_norm, 1.0);
        double tail;
        try {
            tail = omega * a_norm * integrate_halfline(tail_integrand, tail_spec).value;
        } catch (const QuadratureError& e) {
            tail = omega * a_norm * std::abs(e.best_estimate) + budget * 2.0;
        }
        if (tail <= budget) break;
        R *= 2.0;
        if (R > 1048576.0)
            throw QuadratureError(
                "integrate_quadratic_form: profile decays too slowly for the tail bound",
                ref.value, tail);
    }

    // Pick the densest per-panel rule whose tensor grid stays affordable.
    std::vector<double> nodes, weights;
    size_t m = 0;
    for (int ppp = 12; ppp >= 6; --ppp) {
        detail::symmetric_panel_nodes(R, ppp, nodes, weights);
        m = nodes.size();
        double cost = 1.0;
        for (int d = 0; d < n; ++d) cost *= static_cast<double>(m);
        if (cost <= 2.5e8) break;
        if (ppp == 6)
            throw QuadratureError("integrate_quadratic_form: tensor grid too large", 0.0,
                                  std::numeric_limits<double>::infinity());
    }

    double x[4] = {0, 0, 0, 0};
    double sum = 0.0, abs_sum = 0.0;
    // Fixed-order nested sweep; the innermost axis varies fastest.
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    for (;;) {
        double wprod = 1.0, r2 = 0.0;
        for (int d = 0; d < n; ++d) {
            x[d] = nodes[idx[d]];
            wprod *= weights[idx[d]];
            r2 += x[d] * x[d];
        }
        const double gv = g(std::sqrt(r2));
        if (gv != 0.0) {
            const double term = gv * A.quadratic_form(x) * wprod;
            sum += term;
            abs_sum += std::abs(term);
        }
        int d = n - 1;
        while (d >= 0 && ++idx[d] == m) idx[d--] = 0;
        if (d < 0) break;
    }

    return QuadResult{sum, budget * 10.0 + 1e-14 * abs_sum, 0};
}

} // namespace varsob
