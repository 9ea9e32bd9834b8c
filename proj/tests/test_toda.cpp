#include <cmath>
#include <complex>

#include "doctest.h"
#include "nmm/laurent.hpp"
#include "nmm/rng.hpp"
#include "nmm/toda.hpp"

using nmm::cplx;
using nmm::LaurentSeries;
using nmm::SeriesStencil;

TEST_CASE("laurent series arithmetic basics") {
    LaurentSeries f;
    f.set_coeff(-2, cplx(1.0, 1.0));
    f.set_coeff(1, 2.0);
    LaurentSeries g = LaurentSeries::monomial(3.0, 1);

    LaurentSeries product = f * g;
    CHECK(std::abs(product.coeff(-1) - cplx(3.0, 3.0)) < 1e-15);
    CHECK(std::abs(product.coeff(2) - cplx(6.0)) < 1e-15);

    LaurentSeries wd = f.w_d_dw();
    CHECK(std::abs(wd.coeff(-2) - cplx(-2.0, -2.0)) < 1e-15);
    CHECK(std::abs(wd.coeff(1) - cplx(2.0)) < 1e-15);

    LaurentSeries mirror = f.conj_mirror();
    CHECK(std::abs(mirror.coeff(2) - cplx(1.0, -1.0)) < 1e-15);
    CHECK(std::abs(mirror.coeff(-1) - cplx(2.0)) < 1e-15);

    LaurentSeries clipped = f;
    double discarded = clipped.clip(-1, 2);
    CHECK(discarded == doctest::Approx(std::abs(cplx(1.0, 1.0))));
    CHECK(clipped.coeff(-2) == cplx(0.0));

    // Projections split the series exactly.
    LaurentSeries sum = f.part_plus() + f.part_zero() + f.part_minus();
    for (int k = -3; k <= 3; ++k) CHECK(std::abs(sum.coeff(k) - f.coeff(k)) < 1e-15);
}

TEST_CASE("laurent data of the reference curves") {
    auto [zc, ztc] = nmm::laurent_of_curve({0.5, {}});
    CHECK(std::abs(zc.coeff(1) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(ztc.coeff(-1) - cplx(0.5)) < 1e-15);
    CHECK(zc.coeff(0) == cplx(0.0));

    auto [ze, zte] = nmm::laurent_of_curve({0.5, {0.0, 0.2}});
    CHECK(std::abs(ze.coeff(-1) - cplx(0.2)) < 1e-15);
    CHECK(std::abs(zte.coeff(1) - cplx(0.2)) < 1e-15);

    auto [zh, zth] = nmm::laurent_of_curve({0.3, {0.0, 0.0, 0.027}});
    CHECK(std::abs(zth.coeff(2) - cplx(0.027)) < 1e-15);
}

TEST_CASE("toda hamiltonians from hand expansions") {
    auto [zc, ztc] = nmm::laurent_of_curve({0.5, {}});
    LaurentSeries m1 = nmm::toda_hamiltonian(zc, 1);
    CHECK(std::abs(m1.coeff(1) - cplx(0.5)) < 1e-15);
    CHECK(m1.coeff(0) == cplx(0.0));

    // z = 0.5 w + 0.2 / w: z^2 = 0.25 w^2 + 0.2 + 0.04 w^{-2}.
    auto [ze, zte] = nmm::laurent_of_curve({0.5, {0.0, 0.2}});
    LaurentSeries m2 = nmm::toda_hamiltonian(ze, 2);
    CHECK(std::abs(m2.coeff(2) - cplx(0.25)) < 1e-15);
    CHECK(std::abs(m2.coeff(0) - cplx(0.1)) < 1e-15);
    CHECK(m2.coeff(-2) == cplx(0.0));

    // Real-coefficient family: M~_k is the conjugate mirror of M_k.
    LaurentSeries m2t = nmm::toda_hamiltonian_tilde(zte, 2);
    LaurentSeries mirrored = m2.conj_mirror();
    for (int k = -4; k <= 4; ++k) CHECK(std::abs(m2t.coeff(k) - mirrored.coeff(k)) < 1e-15);
}

TEST_CASE("poisson bracket algebra") {
    nmm::Rng rng(77);
    auto random_linear_stencil = [&rng](double eps) {
        // t0-linear series: the central difference is exact, so algebraic
        // identities hold to roundoff.
        LaurentSeries a, b;
        for (int k = -3; k <= 3; ++k) {
            a.set_coeff(k, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
            b.set_coeff(k, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
        }
        SeriesStencil s;
        s.eps = eps;
        s.base = a;
        s.minus = a - eps * b;
        s.plus = a + eps * b;
        return s;
    };

    double eps = 1e-3;
    for (int trial = 0; trial < 10; ++trial) {
        SeriesStencil f = random_linear_stencil(eps);
        SeriesStencil g = random_linear_stencil(eps);
        SeriesStencil h = random_linear_stencil(eps);

        // Antisymmetry.
        LaurentSeries self = nmm::poisson_bracket(f, f);
        CHECK(self.max_abs() < 1e-12);
        LaurentSeries fg = nmm::poisson_bracket(f, g);
        LaurentSeries gf = nmm::poisson_bracket(g, f);
        CHECK((fg + gf).max_abs() < 1e-12);

        // Leibniz: {f, g h} = {f, g} h + g {f, h}.
        SeriesStencil gh;
        gh.eps = eps;
        gh.base = g.base * h.base;
        gh.minus = g.minus * h.minus;
        gh.plus = g.plus * h.plus;
        LaurentSeries left = nmm::poisson_bracket(f, gh);
        LaurentSeries right = nmm::poisson_bracket(f, g) * h.base +
                              g.base * nmm::poisson_bracket(f, h);
        // The discrete product derivative differs at O(eps^2).
        CHECK((left - right).max_abs() < 5.0 * eps * eps * 50.0);
    }

    // {w, c(t0)} = w c'(t0).
    SeriesStencil w_stencil;
    w_stencil.eps = eps;
    w_stencil.base = LaurentSeries::monomial(1.0, 1);
    w_stencil.minus = w_stencil.base;
    w_stencil.plus = w_stencil.base;
    SeriesStencil c;
    c.eps = eps;
    c.base = LaurentSeries::constant(2.0);
    c.minus = LaurentSeries::constant(2.0 - 3.0 * eps);
    c.plus = LaurentSeries::constant(2.0 + 3.0 * eps);
    LaurentSeries bracket = nmm::poisson_bracket(w_stencil, c);
    CHECK(std::abs(bracket.coeff(1) - cplx(3.0)) < 1e-12);
}

TEST_CASE("string equation via the moment-space stencil") {
    // Exactly solvable circle family: z = sqrt(t0) w gives {z, z~} = 1 with
    // only the central-difference error.
    nmm::HarmonicMoments circle{0.25, {}};
    CHECK(nmm::verify_string_equation(circle, 1e-4) < 1e-10);

    nmm::HarmonicMoments ellipse{0.21, {0.0, 0.2}};
    CHECK(nmm::verify_string_equation(ellipse, 1e-4) < 1e-7);

    nmm::HarmonicMoments hypotrochoid{0.088542, {0.0, 0.0, 0.1}};
    CHECK(nmm::verify_string_equation(hypotrochoid, 1e-4) < 1e-7);
}

TEST_CASE("string residual shrinks as O(eps^2)") {
    nmm::HarmonicMoments ellipse{0.21, {0.0, 0.2}};
    double coarse = nmm::string_residual_series(ellipse, 2e-3).max_abs();
    double fine = nmm::string_residual_series(ellipse, 1e-3).max_abs();
    CHECK(coarse / fine > 2.5);
    CHECK(coarse / fine < 6.0);
}

TEST_CASE("flow stencil inversions stay within the newton budget") {
    nmm::HarmonicMoments ellipse{0.1, {0.0, 0.1}};
    auto stencil = nmm::make_flow_stencil(ellipse, 2, 1e-4);
    CHECK(stencil.max_newton_residual <= 1e-11);
    CHECK(stencil.flow_index == 2);
    CHECK_THROWS_AS(nmm::make_flow_stencil(ellipse, 5, 1e-4), std::invalid_argument);
}

TEST_CASE("toda flows hold on the three reference families") {
    // k = 1 on the circle family.
    nmm::HarmonicMoments circle{0.25, {0.0}};
    auto flow1 = nmm::verify_flow(circle, 1, 1e-4);
    CHECK(flow1.residual_z <= 1e-7);
    CHECK(flow1.residual_ztilde <= 1e-7);
    CHECK(flow1.residual_conj_z <= 1e-7);
    CHECK(flow1.residual_conj_ztilde <= 1e-7);

    // k = 2 on the ellipse family.
    nmm::HarmonicMoments ellipse{0.1, {0.0, 0.1}};
    auto flow2 = nmm::verify_flow(ellipse, 2, 1e-4);
    CHECK(flow2.residual_z <= 1e-6);
    CHECK(flow2.residual_ztilde <= 1e-6);
    CHECK(flow2.residual_conj_z <= 1e-6);
    CHECK(flow2.string_residual <= 1e-6);

    // k = 3 on the hypotrochoid family.
    nmm::HarmonicMoments hypo{0.05, {0.0, 0.0, 0.05}};
    auto flow3 = nmm::verify_flow(hypo, 3, 1e-4);
    CHECK(flow3.residual_z <= 1e-6);
    CHECK(flow3.residual_ztilde <= 1e-6);
    CHECK(flow3.residual_conj_z <= 1e-6);
}

TEST_CASE("flow residuals halve like a second-order scheme") {
    nmm::HarmonicMoments ellipse{0.1, {0.0, 0.1}};
    auto coarse = nmm::flow_residuals_raw(ellipse, 2, 2e-3);
    auto fine = nmm::flow_residuals_raw(ellipse, 2, 1e-3);
    CHECK(coarse.residual_z / fine.residual_z > 2.5);
    CHECK(coarse.residual_z / fine.residual_z < 6.0);
}
