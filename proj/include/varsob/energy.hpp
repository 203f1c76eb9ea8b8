#pragma once

// Quadratic exponent models around a concentration point, the variational
// problem they define, and the cutoff-bubble integrals together with the
// closed-form constants of their small-eps expansions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dense_matrix.hpp"
#include "instanton.hpp"
#include "quadrature.hpp"

namespace varsob {

// ============================================================
// exponent models
// ============================================================

/// Thrown when (n, p) violate the convergence guard of an expansion.
class GuardViolation : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Local model of a smooth exponent near the origin: its value there, a zero
/// gradient (the origin is assumed critical), and the symmetric Hessian.
struct ExponentModel {
    double value0;
    DenseMatrix hessian;

    ExponentModel(double value, DenseMatrix hess) : value0(value), hessian(std::move(hess)) {
        if (!std::isfinite(value0))
            throw std::invalid_argument("ExponentModel: value must be finite");
        if (hessian.n < 1) throw std::invalid_argument("ExponentModel: empty Hessian");
        double scale = 0.0;
        for (double v : hessian.a) {
            if (!std::isfinite(v))
                throw std::invalid_argument("ExponentModel: Hessian entries must be finite");
            scale = std::max(scale, std::abs(v));
        }
        if (!hessian.is_symmetric(1e-12 * std::max(1.0, scale)))
            throw std::invalid_argument("ExponentModel: Hessian must be symmetric");
    }

    static ExponentModel flat(int dim, double value) {
        return ExponentModel(value, DenseMatrix(dim));
    }

    /// Isotropic curvature with the prescribed Laplacian: Hessian = (lap/dim) I.
    static ExponentModel isotropic(int dim, double value, double laplacian) {
        if (dim < 1) throw std::invalid_argument("ExponentModel: dim must be >= 1");
        return ExponentModel(value, DenseMatrix::scaled_identity(dim, laplacian / dim));
    }

    int dim() const { return hessian.n; }
    double laplacian() const { return hessian.trace(); }
};

// ============================================================
// the variational problem
// ============================================================

/// Everything the functional J and the bubble expansions depend on: the
/// dimensions, the p and q models (with q(0) pinned to the critical exponent
/// of p(0)), the zero-order coefficient h0 = h(0), the weight value f0 = f(0)
/// (optionally a full radial weight), and the cutoff plateau radius.
struct EnergyProblem {
    DimParams dims;
    ExponentModel p_model;
    ExponentModel q_model;
    double h0 = 0.0;
    double f0 = 1.0;
    double delta = 1.0; // cutoff plateau radius; +infinity disables the cutoff
    std::function<double(double)> f_rule; // optional radial weight, f_rule(0) == f0

    EnergyProblem(DimParams d, ExponentModel pm, ExponentModel qm, double h0_ = 0.0,
                  double f0_ = 1.0, double delta_ = 1.0,
                  std::function<double(double)> f = {})
        : dims(d), p_model(std::move(pm)), q_model(std::move(qm)), h0(h0_), f0(f0_),
          delta(delta_), f_rule(std::move(f)) {
        if (p_model.dim() != dims.n || q_model.dim() != dims.n)
            throw std::invalid_argument("EnergyProblem: Hessian dimension must equal n");
        if (std::abs(p_model.value0 - dims.p) > 1e-12)
            throw std::invalid_argument("EnergyProblem: p model must take the value p at 0");
        const double q0 = dims.critical_exponent();
        if (std::abs(q_model.value0 - q0) > 1e-12 * q0)
            throw std::invalid_argument(
                "EnergyProblem: q model must take the critical exponent n p/(n-p) at 0");
        if (!std::isfinite(h0) || !std::isfinite(f0))
            throw std::invalid_argument("EnergyProblem: h0 and f0 must be finite");
        if (!(delta > 0.0)) throw std::invalid_argument("EnergyProblem: requires delta > 0");
        if (f_rule && std::abs(f_rule(0.0) - f0) > 1e-12 * std::max(1.0, std::abs(f0)))
            throw std::invalid_argument("EnergyProblem: f_rule(0) must equal f0");
    }

    /// Radial reduction of the quadratic model: averaging (H x, x) over the
    /// sphere |x| = r leaves (tr H / n) r^2.  The profile is clamped to keep
    /// p inside (1, n); the clamp sits far outside the bubble core, where all
    /// the expansion constants are decided.
    double p_at(double r) const {
        const double raw = p_model.value0 + p_model.laplacian() / (2.0 * dims.n) * r * r;
        return std::clamp(raw, 1.0 + 1e-9, dims.n - 1e-6);
    }

    /// Same reduction for q, clamped into (1, p*(p(r))] so the growth never
    /// exceeds the critical rate of the local p.
    double q_at(double r) const {
        const double pr = p_at(r);
        const double raw = q_model.value0 + q_model.laplacian() / (2.0 * dims.n) * r * r;
        return std::clamp(raw, 1.0 + 1e-9, dims.n * pr / (dims.n - pr));
    }

    double f_at(double r) const { return f_rule ? f_rule(r) : f0; }

    // --- convergence guards of the three expansions ---

    /// The q-integral expansion needs p <= n/2.
    void require_lq_guard() const {
        if (!(dims.p <= dims.n / 2.0)) detail_guard_fail("p <= n/2");
    }

    /// The gradient-integral expansion needs p < min{sqrt(n), (n+2)/3}.
    void require_grad_guard() const {
        if (!(dims.p < std::min(std::sqrt(static_cast<double>(dims.n)), (dims.n + 2.0) / 3.0)))
            detail_guard_fail("p < min{sqrt(n), (n+2)/3}");
    }

    /// The p-integral expansion needs p < sqrt(n).
    void require_lp_guard() const {
        if (!(dims.p < std::sqrt(static_cast<double>(dims.n)))) detail_guard_fail("p < sqrt(n)");
    }

  private:
    void detail_guard_fail(const char* bound) const {
        throw GuardViolation("expansion guard: requires " + std::string(bound) +
                             " (n=" + std::to_string(dims.n) +
                             ", p=" + std::to_string(dims.p) + ")");
    }
};

// ============================================================
// measured bubble integrals
// ============================================================

namespace detail {

/// Breakpoints seeding the adaptive subdivision: the bubble core scales and
/// the cutoff plateau edge.
inline std::vector<double> bubble_breakpoints(double eps, double delta, double hi) {
    std::vector<double> pts;
    for (double c : {eps, 4.0 * eps, 16.0 * eps, 128.0 * eps, delta})
        if (c > 0.0 && c < hi && std::isfinite(c)) pts.push_back(c);
    return pts;
}

/// Common driver: integrates density(r) * omega r^(n-1) over the cutoff
/// support [0, 2 delta] (the half line when delta is infinite).
template <class Density>
double integrate_bubble(const EnergyProblem& prob, double eps, Density&& density,
                        const QuadSpec& spec) {
    if (!(eps > 0.0)) throw std::domain_error("bubble integral: requires eps > 0");
    const double hi = 2.0 * prob.delta;
    const double omega = sphere_area(prob.dims.n);
    const int n = prob.dims.n;
    auto integrand = [&density, omega, n](double r) {
        const double g = density(r);
        // A zero density must short-circuit: the tail map can probe radii
        // where pow(r, n-1) alone would overflow.
        return g == 0.0 ? 0.0 : omega * g * std::pow(r, n - 1);
    };
    const std::vector<double> pts = bubble_breakpoints(eps, prob.delta, hi);
    return std::isfinite(hi) ? integrate(integrand, 0.0, hi, spec, pts).value
                             : integrate_halfline(integrand, spec, pts).value;
}

} // namespace detail

/// int f(x) (eta u_eps)^{q(x)} dx for the (unnormalized) cutoff bubble.
inline double measured_lq(const EnergyProblem& prob, double eps, const QuadSpec& spec = {}) {
    const BubbleParams bp(prob.dims, eps, prob.delta);
    return detail::integrate_bubble(
        prob, eps,
        [&](double r) {
            const double u = cutoff_bubble_value(bp, r);
            if (u == 0.0) return 0.0;
            const double w = std::pow(u, prob.q_at(r));
            return w == 0.0 ? 0.0 : prob.f_at(r) * w;
        },
        spec);
}

/// int f(x) |grad(eta u_eps)|^{p(x)} dx.
inline double measured_grad(const EnergyProblem& prob, double eps, const QuadSpec& spec = {}) {
    const BubbleParams bp(prob.dims, eps, prob.delta);
    return detail::integrate_bubble(
        prob, eps,
        [&](double r) {
            const double g = std::abs(cutoff_bubble_deriv(bp, r));
            if (g == 0.0) return 0.0;
            const double w = std::pow(g, prob.p_at(r));
            return w == 0.0 ? 0.0 : prob.f_at(r) * w;
        },
        spec);
}

/// int f(x) (eta u_eps)^{p(x)} dx.
inline double measured_lp(const EnergyProblem& prob, double eps, const QuadSpec& spec = {}) {
    const BubbleParams bp(prob.dims, eps, prob.delta);
    return detail::integrate_bubble(
        prob, eps,
        [&](double r) {
            const double u = cutoff_bubble_value(bp, r);
            if (u == 0.0) return 0.0;
            const double w = std::pow(u, prob.p_at(r));
            return w == 0.0 ? 0.0 : prob.f_at(r) * w;
        },
        spec);
}

// ============================================================
// closed expansion constants
// ============================================================

/// Small-eps behaviour of the q-integral:
///   int f (eta u_eps)^{q(x)} = leading + correction * eps^2 ln(eps) + o(eps^2 ln eps).
/// The eps^2 ln(eps) term comes from the eps-power of the bubble meeting the
/// second-order Taylor variation of q; the spherical reduction of 1/2 (H x, x)
/// produces the 1/(2 p*) prefactor on the Laplacian.
struct LqConstants {
    double leading;    // f0 * int U^{p*}
    double correction; // -(f0 / (2 p*)) * lap q(0) * int |x|^2 U^{p*}
};

inline LqConstants lq_expansion_constants(const EnergyProblem& prob) {
    prob.require_lq_guard();
    const double pst = prob.dims.critical_exponent();
    return {prob.f0 * moment_lq(prob.dims),
            -(prob.f0 / (2.0 * pst)) * prob.q_model.laplacian() * moment_lq_r2(prob.dims)};
}

/// Small-eps behaviour of the gradient integral:
///   int f |grad(eta u_eps)|^{p(x)} = leading + correction * eps^2 ln(eps) + o(...).
struct GradConstants {
    double leading;    // f0 * int |grad U|^p
    double correction; // -(f0 / (2 p)) * lap p(0) * int |x|^2 |grad U|^p
};

inline GradConstants grad_expansion_constants(const EnergyProblem& prob) {
    prob.require_grad_guard();
    return {prob.f0 * moment_grad(prob.dims),
            -(prob.f0 / (2.0 * prob.dims.p)) * prob.p_model.laplacian() *
                moment_grad_r2(prob.dims)};
}

/// Small-eps behaviour of the p-integral:  int f (eta u_eps)^{p(x)} =
/// leading * eps^p + o(eps^p).
struct LpConstants {
    double leading; // f0 * int U^p
};

inline LpConstants lp_expansion_constants(const EnergyProblem& prob, const QuadSpec& spec = {}) {
    prob.require_lp_guard();
    return {prob.f0 * moment_lp(prob.dims, spec)};
}

// ============================================================
// normalized-bubble constants
// ============================================================

/// Expansion constants of the same three integrals for the normalized bubble
/// v_eps (gradient and critical integrals pinned to K^{-n} at leading order):
///   int |v_eps|^{q(x)}        = K^{-n} + a * eps^2 ln(eps) + o(...)
///   int |grad v_eps|^{p(x)}   = K^{-n} + b * eps^2 ln(eps) + o(...)
///   int |v_eps|^{p(x)}        = c * eps^p + o(eps^p)
struct NormalizedConstants {
    double a; // -(lap q(0) / (2 p*)) K^{-n} (int |x|^2 U^{p*}) / (int U^{p*})
    double b; // -(lap p(0) / (2 p))  K^{-n} (int |x|^2 |grad U|^p) / (int |grad U|^p)
    double c; //                      K^{-n} (int U^p) / (int |grad U|^p)
};

inline NormalizedConstants normalized_abc(const EnergyProblem& prob, const QuadSpec& spec = {}) {
    prob.require_lq_guard();
    prob.require_grad_guard();
    prob.require_lp_guard();
    const DimParams& d = prob.dims;
    const double kn = std::pow(sobolev_constant(d), -static_cast<double>(d.n));
    const double a = -(prob.q_model.laplacian() / (2.0 * d.critical_exponent())) * kn *
                     moment_lq_r2(d) / moment_lq(d);
    const double b =
        -(prob.p_model.laplacian() / (2.0 * d.p)) * kn * moment_grad_r2(d) / moment_grad(d);
    const double c = kn * moment_lp(d, spec) / moment_grad(d);
    return {a, b, c};
}

} // namespace varsob
