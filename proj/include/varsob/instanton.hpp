#pragma once

// The radial Sobolev extremal  U(r) = (1 + r^(p/(p-1)))^(-(n-p)/p)  on R^n,
// its rescalings, smooth cutoffs, moment integrals (closed Beta forms plus
// quadrature oracles), the best constant K(n,p), the gradient-threshold
// coefficient C_p, and the moment ratio D(n,p).

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "quadrature.hpp"
#include "special_functions.hpp"

namespace varsob {

struct DimParams {
    int n;
    double p;

    DimParams(int n_, double p_) : n(n_), p(p_) {
        if (n < 2) throw std::domain_error("DimParams: requires n >= 2");
        if (!(p > 1.0) || !(p < static_cast<double>(n)))
            throw std::domain_error("DimParams: requires 1 < p < n");
    }

    double critical_exponent() const { return n * p / (n - p); }
};

struct BubbleParams {
    DimParams dims;
    double eps = 1.0;
    double delta = 1.0; // plateau radius of the cutoff; support radius 2*delta

    BubbleParams(DimParams d, double eps_ = 1.0, double delta_ = 1.0)
        : dims(d), eps(eps_), delta(delta_) {
        if (!(eps > 0.0)) throw std::domain_error("BubbleParams: requires eps > 0");
        if (!(delta > 0.0)) throw std::domain_error("BubbleParams: requires delta > 0");
    }
};

/// Thrown when a requested moment integral does not converge for these (n,p).
class MomentDivergence : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// ============================================================
// profile and rescalings
// ============================================================

/// U(r) = (1 + r^(p/(p-1)))^(-(n-p)/p), the extremal profile normalized to
/// U(0) = 1.  Evaluated in log space so huge radii cannot overflow.
inline double instanton_profile(const DimParams& d, double r) {
    if (r < 0.0) throw std::domain_error("instanton_profile: requires r >= 0");
    if (r == 0.0) return 1.0;
    const double pp = d.p / (d.p - 1.0);
    return std::exp(-(d.n - d.p) / d.p * std::log1p(std::pow(r, pp)));
}

/// dU/dr = -((n-p)/(p-1)) r^(1/(p-1)) (1 + r^(p/(p-1)))^(-n/p).
inline double instanton_profile_deriv(const DimParams& d, double r) {
    if (r < 0.0) throw std::domain_error("instanton_profile_deriv: requires r >= 0");
    if (r == 0.0) return 0.0;
    if (std::isinf(r)) return 0.0;
    const double pp = d.p / (d.p - 1.0);
    const double rpp = std::pow(r, pp);
    // when r^pp overflows, log1p(r^pp) is pp*log(r) exactly at double precision
    const double log_tail = std::isinf(rpp) ? pp * std::log(r) : std::log1p(rpp);
    const double log_mag = std::log(r) / (d.p - 1.0) - d.n / d.p * log_tail;
    return -(d.n - d.p) / (d.p - 1.0) * std::exp(log_mag);
}

/// Rescaled bubble  eps^(-(n-p)/p) U(r/eps); its L^{p*} norm is eps-free.
inline double bubble_value(const BubbleParams& bp, double r) {
    const auto& d = bp.dims;
    return std::pow(bp.eps, -(d.n - d.p) / d.p) * instanton_profile(d, r / bp.eps);
}

/// Signed radial derivative of the bubble: eps^(-n/p) U'(r/eps).
inline double bubble_deriv(const BubbleParams& bp, double r) {
    const auto& d = bp.dims;
    return std::pow(bp.eps, -d.n / d.p) * instanton_profile_deriv(d, r / bp.eps);
}

/// |grad of the bubble| — the profile is radial and decreasing, so this is
/// simply the magnitude of the radial derivative.
inline double bubble_gradient_magnitude(const BubbleParams& bp, double r) {
    return std::abs(bubble_deriv(bp, r));
}

// ============================================================
// gradient threshold
// ============================================================

/// C_p = ((n-p)/(p-1))^((p-1)/(n-1)): beyond radius C_p eps^((n-p)/(p(n-1)))
/// the bubble's gradient magnitude drops below 1.
inline double grad_threshold_coefficient(const DimParams& d) {
    return std::pow((d.n - d.p) / (d.p - 1.0), (d.p - 1.0) / (d.n - 1.0));
}

inline double grad_threshold_radius(const BubbleParams& bp) {
    const auto& d = bp.dims;
    return grad_threshold_coefficient(d) *
           std::pow(bp.eps, (d.n - d.p) / (d.p * (d.n - 1.0)));
}

// ============================================================
// smooth cutoff
// ============================================================

namespace detail {
// phi(t) = exp(-1/t) for t > 0, else 0; the standard smooth step ingredient.
inline double smooth_phi(double t) { return t > 1e-12 ? std::exp(-1.0 / t) : 0.0; }
inline double smooth_phi_deriv(double t) {
    return t > 1e-12 ? std::exp(-1.0 / t) / (t * t) : 0.0;
}
} // namespace detail

/// eta(r): 1 on [0, delta], 0 on [2*delta, inf), smooth monotone bridge in
/// between.  delta = +infinity gives the constant function 1.
inline double cutoff(double r, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("cutoff: requires delta > 0");
    if (r <= delta) return 1.0;
    if (r >= 2.0 * delta) return 0.0;
    const double f1 = detail::smooth_phi(2.0 - r / delta);
    const double f2 = detail::smooth_phi(r / delta - 1.0);
    return f1 / (f1 + f2);
}

inline double cutoff_deriv(double r, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("cutoff_deriv: requires delta > 0");
    if (r <= delta || r >= 2.0 * delta) return 0.0;
    const double t1 = 2.0 - r / delta;
    const double t2 = r / delta - 1.0;
    const double f1 = detail::smooth_phi(t1);
    const double f2 = detail::smooth_phi(t2);
    const double den = f1 + f2;
    return -(detail::smooth_phi_deriv(t1) * f2 + f1 * detail::smooth_phi_deriv(t2)) /
           (delta * den * den);
}

/// Cutoff bubble  u(r) = eta(r) * bubble(r)  and its radial derivative.
inline double cutoff_bubble_value(const BubbleParams& bp, double r) {
    const double e = cutoff(r, bp.delta);
    return e == 0.0 ? 0.0 : e * bubble_value(bp, r);
}

inline double cutoff_bubble_deriv(const BubbleParams& bp, double r) {
    const double e = cutoff(r, bp.delta);
    const double de = cutoff_deriv(r, bp.delta);
    double out = 0.0;
    if (e != 0.0) out += e * bubble_deriv(bp, r);
    if (de != 0.0) out += de * bubble_value(bp, r);
    return out;
}

// ============================================================
// moments
// ============================================================

/// The five moment integrals of the profile over R^n.  The conditional ones
/// are present only when their convergence guard holds.
struct InstantonMoments {
    double lq;                     // int U^{p*}
    double grad;                   // int |grad U|^p
    std::optional<double> lq_r2;   // int |x|^2 U^{p*}      (needs p < (n+2)/2)
    std::optional<double> grad_r2; // int |x|^2 |grad U|^p  (needs p < (n+2)/3)
    std::optional<double> lp;      // int U^p               (needs p^2 < n)
};

namespace detail {
// Shared prefactor from the substitution u = r^(p/(p-1)) in the radial form.
inline double moment_prefactor(const DimParams& d) {
    return sphere_area(d.n) * (d.p - 1.0) / d.p;
}
inline double moment_order(const DimParams& d) { return d.n * (d.p - 1.0) / d.p; }
} // namespace detail

/// int U^{p*} dx — always finite for 1 < p < n.
inline double moment_lq(const DimParams& d) {
    return detail::moment_prefactor(d) * ipq_integral(d.n, detail::moment_order(d));
}

/// int |x|^2 U^{p*} dx — finite iff p < (n+2)/2.
inline double moment_lq_r2(const DimParams& d) {
    if (!(d.p < (d.n + 2.0) / 2.0))
        throw MomentDivergence("moment lq_r2 diverges: requires p < (n+2)/2");
    return detail::moment_prefactor(d) *
           ipq_integral(d.n, detail::moment_order(d) - 2.0 / d.p + 2.0);
}

/// int |grad U|^p dx — always finite for 1 < p < n.
inline double moment_grad(const DimParams& d) {
    return detail::moment_prefactor(d) * std::pow((d.n - d.p) / (d.p - 1.0), d.p) *
           ipq_integral(d.n, detail::moment_order(d) + 1.0);
}

/// int |x|^2 |grad U|^p dx — finite iff p < (n+2)/3.
inline double moment_grad_r2(const DimParams& d) {
    if (!(d.p < (d.n + 2.0) / 3.0))
        throw MomentDivergence("moment grad_r2 diverges: requires p < (n+2)/3");
    return detail::moment_prefactor(d) * std::pow((d.n - d.p) / (d.p - 1.0), d.p) *
           ipq_integral(d.n, detail::moment_order(d) - 2.0 / d.p + 3.0);
}

/// int U^p dx — finite iff p^2 < n.  No closed form is used here; the value
/// is defined by adaptive quadrature.
inline double moment_lp(const DimParams& d, const QuadSpec& spec = {}) {
    if (!(d.p * d.p < static_cast<double>(d.n)))
        throw MomentDivergence("moment lp diverges: requires p^2 < n");
    return integrate_radial(
               d.n, [&d](double r) { return std::pow(instanton_profile(d, r), d.p); },
               spec)
        .value;
}

inline InstantonMoments instanton_moments(const DimParams& d, const QuadSpec& spec = {}) {
    InstantonMoments m{moment_lq(d), moment_grad(d), {}, {}, {}};
    if (d.p < (d.n + 2.0) / 2.0) m.lq_r2 = moment_lq_r2(d);
    if (d.p < (d.n + 2.0) / 3.0) m.grad_r2 = moment_grad_r2(d);
    if (d.p * d.p < static_cast<double>(d.n)) m.lp = moment_lp(d, spec);
    return m;
}

// Quadrature counterparts evaluated from the profile itself, used to
// cross-check the Beta closed forms through an unrelated code path.

inline double moment_lq_quadrature(const DimParams& d, const QuadSpec& spec = {}) {
    const double q = d.critical_exponent();
    return integrate_radial(
               d.n, [&d, q](double r) { return std::pow(instanton_profile(d, r), q); },
               spec)
        .value;
}

inline double moment_lq_r2_quadrature(const DimParams& d, const QuadSpec& spec = {}) {
    if (!(d.p < (d.n + 2.0) / 2.0))
        throw MomentDivergence("moment lq_r2 diverges: requires p < (n+2)/2");
    const double q = d.critical_exponent();
    return integrate_radial(
               d.n,
               [&d, q](double r) {
                   // decaying factor first: r*r*0 would be NaN at r = inf
                   const double uq = std::pow(instanton_profile(d, r), q);
                   return uq == 0.0 ? 0.0 : r * r * uq;
               },
               spec)
        .value;
}

inline double moment_grad_quadrature(const DimParams& d, const QuadSpec& spec = {}) {
    return integrate_radial(
               d.n,
               [&d](double r) {
                   return std::pow(std::abs(instanton_profile_deriv(d, r)), d.p);
               },
               spec)
        .value;
}

inline double moment_grad_r2_quadrature(const DimParams& d, const QuadSpec& spec = {}) {
    if (!(d.p < (d.n + 2.0) / 3.0))
        throw MomentDivergence("moment grad_r2 diverges: requires p < (n+2)/3");
    return integrate_radial(
               d.n,
               [&d](double r) {
                   const double gp =
                       std::pow(std::abs(instanton_profile_deriv(d, r)), d.p);
                   return gp == 0.0 ? 0.0 : r * r * gp;
               },
               spec)
        .value;
}

// ============================================================
// best constant, threshold, moment ratio
// ============================================================

/// K(n,p) = (int U^{p*})^{1/p*} / (int |grad U|^p)^{1/p}: the best constant
/// of the Sobolev inequality on R^n, attained by U.
inline double sobolev_constant(const DimParams& d) {
    return std::pow(moment_lq(d), 1.0 / d.critical_exponent()) /
           std::pow(moment_grad(d), 1.0 / d.p);
}

/// (1/n) K(n,p)^{-n}: the energy level below which compactness is restored.
inline double compactness_threshold(const DimParams& d) {
    return std::pow(sobolev_constant(d), -static_cast<double>(d.n)) / d.n;
}

/// D(n,p) = n/(n-p) * ((n-p) - 2(p-1)) / (n+2), the closed evaluation of the
/// moment ratio below.  Defined (and positive) for p < (n+2)/3.
inline double moment_ratio(const DimParams& d) {
    if (!(d.p < (d.n + 2.0) / 3.0))
        throw MomentDivergence("moment ratio diverges: requires p < (n+2)/3");
    return d.n / (d.n - d.p) * ((d.n - d.p) - 2.0 * (d.p - 1.0)) / (d.n + 2.0);
}

/// The same ratio (grad * lq_r2) / (lq * grad_r2) from quadrature moments.
inline double moment_ratio_oracle(const DimParams& d, const QuadSpec& spec = {}) {
    return moment_grad_quadrature(d, spec) * moment_lq_r2_quadrature(d, spec) /
           (moment_lq_quadrature(d, spec) * moment_grad_r2_quadrature(d, spec));
}

// ============================================================
// normalized bubble
// ============================================================

/// The constant c with  V = c U  solving  -div(|grad V|^{p-2} grad V) = V^{p*-1},
/// normalized so that  int |grad V|^p = int V^{p*} = K(n,p)^{-n}.
inline double bubble_normalization(const DimParams& d) {
    return std::pow(sobolev_constant(d), -(d.n - d.p) / d.p) /
           std::pow(moment_lq(d), 1.0 / d.critical_exponent());
}

/// Normalized cutoff bubble  v(r) = c * eta(r) * bubble(r)  and derivative.
inline double normalized_bubble_value(const BubbleParams& bp, double r) {
    return bubble_normalization(bp.dims) * cutoff_bubble_value(bp, r);
}

inline double normalized_bubble_deriv(const BubbleParams& bp, double r) {
    return bubble_normalization(bp.dims) * cutoff_bubble_deriv(bp, r);
}

} // namespace varsob
