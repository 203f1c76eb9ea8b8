#include <varsob/quadrature.hpp>

#include <cmath>

#include "test_helpers.hpp"

using namespace varsob;

// ============================================================
// finite intervals
// ============================================================

TEST_CASE("finite-interval quadrature reproduces elementary integrals") {
    auto q1 = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK_REL(q1.value, 1.0 / 3.0, 1e-14);

    auto q2 = integrate([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK_REL(q2.value, 2.0, 1e-13);

    auto q3 = integrate([](double x) { return std::exp(-x); }, 0.0, 30.0);
    CHECK_REL(q3.value, 1.0 - std::exp(-30.0), 1e-13);
}

TEST_CASE("quadrature resolves a sharp peak, with or without a seeded breakpoint") {
    const double eps = 1e-4;
    auto f = [eps](double x) { return eps / (x * x + eps * eps); };
    const double want = std::atan(1.0 / eps);

    auto plain = integrate(f, 0.0, 1.0);
    CHECK_REL(plain.value, want, 1e-12);

    auto seeded = integrate(f, 0.0, 1.0, {}, {eps, 10 * eps});
    CHECK_REL(seeded.value, want, 1e-12);
    CHECK(seeded.subdivisions <= plain.subdivisions);
}

TEST_CASE("quadrature handles an integrable endpoint singularity") {
    auto q = integrate([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; }, 0.0, 1.0);
    CHECK_REL(q.value, 2.0, 1e-9);
}

TEST_CASE("error estimate brackets the true error on a nontrivial integral") {
    auto q = integrate([](double x) { return std::log(1.0 + x) / (1.0 + x * x); }, 0.0, 1.0);
    // Known closed form: (pi/8) ln 2.
    const double want = pi / 8.0 * std::log(2.0);
    CHECK(std::abs(q.value - want) <= std::max(q.error_estimate, 1e-14));
    CHECK_REL(q.value, want, 1e-13);
}

TEST_CASE("quadrature reports failure with the best estimate attached") {
    QuadSpec strict;
    strict.abs_tol = 1e-300;
    strict.rel_tol = 1e-300;
    strict.max_subdivisions = 3;
    bool thrown = false;
    try {
        integrate([](double x) { return std::sin(100.0 * x) / (1e-3 + x); }, 0.0, 1.0, strict);
    } catch (const QuadratureError& e) {
        thrown = true;
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.error_estimate > 0.0);
    }
    CHECK(thrown);
}

TEST_CASE("quadrature rejects an empty interval") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0), std::domain_error);
}

TEST_CASE("repeated evaluation is bit-identical") {
    auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    auto a = integrate(f, 0.0, 5.0, {}, {0.3, 1.7});
    auto b = integrate(f, 0.0, 5.0, {}, {0.3, 1.7});
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    CHECK(a.subdivisions == b.subdivisions);
}

// ============================================================
// half line
// ============================================================

TEST_CASE("half-line quadrature reproduces classical integrals") {
    auto q1 = integrate_halfline([](double r) { return std::exp(-r); });
    CHECK_REL(q1.value, 1.0, 1e-12);

    auto q2 = integrate_halfline([](double r) { return std::exp(-r * r); });
    CHECK_REL(q2.value, 0.5 * std::sqrt(pi), 1e-12);

    auto q3 = integrate_halfline([](double r) { return 1.0 / (1.0 + r * r); });
    CHECK_REL(q3.value, 0.5 * pi, 1e-12);
}

TEST_CASE("half-line quadrature resolves a bubble-scale concentration peak") {
    // Profile concentrated at scale 2^-9, the sharpest scale used anywhere.
    const double eps = 1.0 / 512.0;
    auto f = [eps](double r) {
        const double s = r / eps;
        return s * s * s / std::pow(1.0 + s * s, 3.0) / eps;
    };
    // Substituting s = r/eps gives int_0^inf s^3 (1+s^2)^-3 ds = 1/4.
    auto q = integrate_halfline(f, {}, {eps, 16 * eps});
    CHECK_REL(q.value, 0.25, 1e-11);
}

// ============================================================
// radial integrals over R^n
// ============================================================

TEST_CASE("radial quadrature matches beta-function closed forms") {
    // int_{R^4} (1+|x|^2)^-4 dx = pi^2/6.
    auto q4 = integrate_radial(4, [](double r) { return std::pow(1.0 + r * r, -4.0); });
    CHECK_REL(q4.value, pi * pi / 6.0, 1e-11);

    // int_{R^5} |x|^2 (1+|x|^2)^-5 dx = 5 pi^3 / 96.
    auto q5 = integrate_radial(5, [](double r) { return r * r * std::pow(1.0 + r * r, -5.0); });
    CHECK_REL(q5.value, 5.0 * pi * pi * pi / 96.0, 1e-11);
}

TEST_CASE("radial Gaussian integrals equal pi^(n/2)") {
    for (int n = 2; n <= 8; ++n) {
        auto q = integrate_radial(n, [](double r) { return std::exp(-r * r); });
        CHECK_REL(q.value, std::pow(pi, 0.5 * n), 1e-11);
    }
}

TEST_CASE("radial quadrature over a finite ball gives the ball volume") {
    auto q = integrate_radial(3, [](double) { return 1.0; }, {}, 1.0);
    CHECK_REL(q.value, 4.0 * pi / 3.0, 1e-13);
}

TEST_CASE("compactly supported integrands survive the tail transform") {
    // Zero beyond r=2; the half-line map probes huge radii where r^(n-1)
    // would overflow if evaluated before the support check.
    auto q = integrate_radial(8, [](double r) { return r < 2.0 ? 1.0 : 0.0; }, {},
                              std::numeric_limits<double>::infinity(), {2.0});
    const double want = std::pow(pi, 4.0) / gamma_fn(5.0) * std::pow(2.0, 8.0); // ball volume
    CHECK_REL(q.value, want, 1e-9);
}

// ============================================================
// quadratic-form integrals
// ============================================================

TEST_CASE("isotropic quadratic-form integral matches the Gaussian moment") {
    // int_{R^3} exp(-|x|^2) |x|^2 dx = (3/2) pi^(3/2).
    auto g = [](double r) { return std::exp(-r * r); };
    auto q = integrate_quadratic_form(3, g, DenseMatrix::identity(3));
    CHECK_REL(q.value, 1.5 * std::pow(pi, 1.5), 1e-9);
}

TEST_CASE("anisotropic quadratic form reduces to the trace identity") {
    // For radial g, int g(|x|) (Ax,x) dx = (tr A / n) int g(|x|) |x|^2 dx.
    DenseMatrix A(3);
    A.at(0, 0) = 2.0;  A.at(0, 1) = 0.5;  A.at(0, 2) = 0.0;
    A.at(1, 0) = 0.5;  A.at(1, 1) = 1.0;  A.at(1, 2) = -0.3;
    A.at(2, 0) = 0.0;  A.at(2, 1) = -0.3; A.at(2, 2) = 1.5;
    auto g = [](double r) { return std::pow(1.0 + r * r, -5.0); };

    auto tensor = integrate_quadratic_form(3, g, A);
    auto radial = integrate_radial(3, [&g](double r) { return g(r) * r * r; });
    const double want = A.trace() / 3.0 * radial.value;
    CHECK_REL(tensor.value, want, 1e-7);
}

TEST_CASE("quadratic-form integral works in dimension four") {
    auto g = [](double r) { return std::exp(-r * r); };
    auto q = integrate_quadratic_form(4, g, DenseMatrix::scaled_identity(4, 2.0));
    // 2 * (4/2) pi^2 = 4 pi^2.
    CHECK_REL(q.value, 4.0 * pi * pi, 1e-8);
}

TEST_CASE("quadratic-form integral validates its inputs") {
    auto g = [](double r) { return std::exp(-r * r); };
    CHECK_THROWS_AS(integrate_quadratic_form(5, g, DenseMatrix::identity(5)), std::domain_error);
    CHECK_THROWS_AS(integrate_quadratic_form(3, g, DenseMatrix::identity(2)),
                    std::invalid_argument);
}

// ============================================================
// dense matrix helpers
// ============================================================

TEST_CASE("dense matrix basics") {
    DenseMatrix A(2);
    A.at(0, 0) = 1.0; A.at(0, 1) = 2.0;
    A.at(1, 0) = 2.0; A.at(1, 1) = -3.0;
    CHECK(A.trace() == -2.0);
    CHECK(A.is_symmetric());
    CHECK_REL(A.frobenius_norm(), std::sqrt(1.0 + 4.0 + 4.0 + 9.0), 1e-15);
    const double x[2] = {1.0, 2.0};
    CHECK(A.quadratic_form(x) == 1.0 + 2.0 * 2.0 * 2.0 - 3.0 * 4.0);
    CHECK_THROWS_AS(DenseMatrix(0), std::invalid_argument);

    DenseMatrix B = DenseMatrix::identity(3);
    B.at(0, 2) = 1e-3;
    CHECK_FALSE(B.is_symmetric());
    CHECK(B.is_symmetric(1e-2));
}
