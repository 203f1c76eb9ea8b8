#pragma once

// Gamma-family special functions used throughout the library: gamma, log-gamma,
// beta, the half-line kernel integral ipq, and surface areas of unit spheres.
// Everything here is deterministic double-precision arithmetic with no state.

#include <cmath>
#include <stdexcept>
#include <string>

namespace varsob {

inline constexpr double pi = 3.141592653589793238462643383279502884;

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.  Relative accuracy is about
// 1e-14 over the argument range this library ever touches (x <= ~60).
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline double lanczos_series(double x) {
    // x >= 0.5 assumed; series is evaluated at the unshifted argument.
    double a = lanczos_c[0];
    for (int k = 1; k < 9; ++k) a += lanczos_c[k] / (x - 1.0 + k);
    return a;
}

} // namespace detail

/// Gamma function for strictly positive real arguments.
inline double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("gamma_fn: requires finite x > 0, got x = " + std::to_string(x));
    if (x < 0.5) {
        // Reflection keeps the Lanczos series in its sweet spot.
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    }
    const double t = x + detail::lanczos_g - 0.5;
    const double a = detail::lanczos_series(x);
    return std::sqrt(2.0 * pi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

/// log(Gamma(x)) for x > 0; safe where gamma_fn itself would overflow.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("log_gamma: requires finite x > 0, got x = " + std::to_string(x));
    if (x < 0.5)
        return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
    const double t = x + detail::lanczos_g - 0.5;
    return 0.5 * std::log(2.0 * pi) + (x - 0.5) * std::log(t) - t + std::log(detail::lanczos_series(x));
}

/// Euler beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0.
inline double beta_fn(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw std::domain_error("beta_fn: requires x > 0 and y > 0");
    if (x + y < 100.0)
        return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y);
    return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

/// ipq_integral(p, q) = \int_0^inf t^{q-1} (1+t)^{-p} dt = B(q, p - q).
/// Finite exactly when 0 < q < p; anything else is a divergent integral.
inline double ipq_integral(double p, double q) {
    if (!(q > 0.0) || !(q < p))
        throw std::domain_error(
            "ipq_integral: divergent unless 0 < q < p (got p = " + std::to_string(p) +
            ", q = " + std::to_string(q) + ")");
    return beta_fn(q, p - q);
}

/// Surface area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
inline double sphere_area(int n) {
    if (n < 1) throw std::domain_error("sphere_area: requires n >= 1");
    return 2.0 * std::pow(pi, 0.5 * n) / gamma_fn(0.5 * n);
}

} // namespace varsob
