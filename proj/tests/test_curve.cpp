#include <cmath>
#include <complex>

#include "doctest.h"
#include "nmm/curve.hpp"
#include "nmm/rng.hpp"

using nmm::cplx;
using nmm::PolynomialCurve;

namespace {

PolynomialCurve circle(double r) { return {r, {}}; }
PolynomialCurve ellipse_05_02() { return {0.5, {0.0, 0.2}}; }
PolynomialCurve hypotrochoid_03() { return {0.3, {0.0, 0.0, 0.027}}; }

}  // namespace

TEST_CASE("eval_map matches hand values") {
    CHECK(nmm::eval_map(circle(0.5), 1.0) == cplx(0.5, 0.0));
    CHECK(nmm::eval_map(ellipse_05_02(), 1.0) == cplx(0.7, 0.0));

    // h(i) = 0.3 i + 0.027 i^{-2} = -0.027 + 0.3 i
    cplx v = nmm::eval_map(hypotrochoid_03(), cplx(0.0, 1.0));
    CHECK(std::abs(v - cplx(-0.027, 0.3)) < 1e-15);

    CHECK_THROWS_AS(nmm::eval_map(ellipse_05_02(), cplx(0.0)), std::domain_error);
}

TEST_CASE("critical radius closed forms") {
    CHECK(nmm::critical_radius(circle(0.5)) == 0.0);
    CHECK(nmm::critical_radius(ellipse_05_02()) ==
          doctest::Approx(std::sqrt(0.2 / 0.5)).epsilon(1e-12));
    CHECK(nmm::critical_radius(hypotrochoid_03()) ==
          doctest::Approx(std::cbrt(2.0 * 0.027 / 0.3)).epsilon(1e-12));
}

TEST_CASE("validate_curve verdicts") {
    auto ok_circle = nmm::validate_curve(circle(1.0));
    CHECK(ok_circle.valid);
    CHECK(ok_circle.tangent_winding == 1);
    CHECK(ok_circle.encircles_origin);

    CHECK(nmm::validate_curve(ellipse_05_02()).valid);

    // a_1 = r makes the tangent vanish on the unit circle.
    auto degenerate = nmm::validate_curve(PolynomialCurve{0.5, {0.0, 0.5}});
    CHECK_FALSE(degenerate.valid);
    CHECK(degenerate.critical_radius == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(nmm::validate_curve(ellipse_05_02(), 4), std::invalid_argument);
}

TEST_CASE("forward moments of the three reference curves") {
    auto mc = nmm::moments_of_curve(circle(0.5), 6);
    CHECK(mc.t0 == doctest::Approx(0.25).epsilon(1e-14));
    for (const auto& tk : mc.t) CHECK(std::abs(tk) < 1e-13);

    auto me = nmm::moments_of_curve(ellipse_05_02(), 4);
    CHECK(me.t0 == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(std::abs(me.tk(1)) < 1e-13);
    CHECK(me.tk(2).real() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(me.tk(2).imag()) < 1e-13);

    auto mh = nmm::moments_of_curve(hypotrochoid_03(), 5);
    CHECK(mh.t0 == doctest::Approx(0.088542).epsilon(1e-10));
    CHECK(mh.tk(3).real() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(mh.tk(1)) < 1e-13);
    CHECK(std::abs(mh.tk(2)) < 1e-13);
}

TEST_CASE("contour and residue-series moment routes agree") {
    for (const auto& curve :
         {ellipse_05_02(), hypotrochoid_03(), PolynomialCurve{0.4, {0.03, 0.05, -0.01, 0.02}}}) {
        auto contour = nmm::moments_of_curve(curve, 6);
        auto series = nmm::moments_of_curve_series(curve, 6);
        CHECK(contour.t0 == doctest::Approx(series.t0).epsilon(1e-12));
        for (int k = 1; k <= 6; ++k)
            CHECK(std::abs(contour.tk(k) - series.tk(k)) < 1e-12);
    }
}

TEST_CASE("area consistency and trapezoid auto-doubling report") {
    auto report = nmm::moments_of_curve_report(hypotrochoid_03(), 4);
    CHECK(std::abs(report.t0_contour - report.t0_closed_form) < 1e-10);
    CHECK(report.nodes_used >= 512);

    // Doubling past the reported node count changes nothing at 1e-12.
    nmm::MomentOptions finer;
    finer.min_nodes = 2 * report.nodes_used;
    auto refined = nmm::moments_of_curve(hypotrochoid_03(), 4, finer);
    for (int k = 1; k <= 4; ++k)
        CHECK(std::abs(refined.tk(k) - report.moments.tk(k)) < 1e-12);
}

TEST_CASE("vanishing tail beyond degree d+1") {
    for (const auto& curve : {ellipse_05_02(), hypotrochoid_03()}) {
        int d = curve.degree();
        auto moments = nmm::moments_of_curve(curve, 2 * d + 4);
        for (int k = d + 2; k <= 2 * d + 4; ++k) CHECK(std::abs(moments.tk(k)) < 1e-12);
    }
}

TEST_CASE("scaling the curve scales the moments with weight 2 - k") {
    PolynomialCurve base{0.35, {0.02, 0.04, 0.01}};
    auto m0 = nmm::moments_of_curve(base, 5);
    for (double lambda : {0.5, 2.0}) {
        PolynomialCurve scaled{lambda * base.r, base.a};
        for (auto& aj : scaled.a) aj *= lambda;
        auto m1 = nmm::moments_of_curve(scaled, 5);
        CHECK(m1.t0 == doctest::Approx(lambda * lambda * m0.t0).epsilon(1e-12));
        for (int k = 1; k <= 5; ++k)
            CHECK(std::abs(m1.tk(k) - std::pow(lambda, 2 - k) * m0.tk(k)) <
                  1e-12 * std::max(1.0, std::abs(m0.tk(k))));
    }
}

TEST_CASE("interior moments: circle, symmetry, and a raster oracle") {
    auto vc = nmm::interior_moments(circle(0.5), 5);
    for (const auto& vk : vc.v) CHECK(std::abs(vk) < 1e-14);

    auto ve = nmm::interior_moments(ellipse_05_02(), 4);
    CHECK(std::abs(ve.v[0]) < 1e-14);  // odd symmetry kills v_1

    // Brute-force area oracle: v_k = (1/pi) int_{D+} z^k over a 2000^2 raster
    // of the bounding box with a point-in-region test.
    auto polyline = nmm::boundary_polyline(ellipse_05_02(), 4096);
    nmm::RasterGrid grid;
    grid.x0 = -0.75;
    grid.y0 = -0.35;
    grid.nx = grid.ny = 2000;
    grid.dx = 1.5 / grid.nx;
    grid.dy = 0.7 / grid.ny;
    auto mask = nmm::interior_mask(polyline, grid);
    cplx v2_oracle = 0.0;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            if (mask[static_cast<std::size_t>(iy) * grid.nx + ix]) {
                cplx z = grid.cell_center(ix, iy);
                v2_oracle += z * z;
            }
    v2_oracle *= grid.dx * grid.dy / nmm::pi;
    CHECK(std::abs(ve.v[1] - v2_oracle) < 1e-6);

    // Closed form for the axis-aligned ellipse: v_2 = b1 b2 (b1^2 - b2^2) / 4.
    CHECK(ve.v[1].real() == doctest::Approx(0.021).epsilon(1e-10));
}

TEST_CASE("curve_from_moments reference inversions") {
    nmm::HarmonicMoments circle_target{0.25, {}};
    auto c = nmm::curve_from_moments(circle_target);
    CHECK(c.r == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.a.empty());

    nmm::HarmonicMoments ellipse_target{0.21, {0.0, 0.2}};
    auto e = nmm::curve_from_moments(ellipse_target, 1e-12, 100);
    CHECK(e.r == doctest::Approx(0.5).epsilon(1e-10));
    REQUIRE(e.a.size() == 2);
    CHECK(std::abs(e.a[0]) < 1e-10);
    CHECK(std::abs(e.a[1] - cplx(0.2)) < 1e-10);

    nmm::HarmonicMoments hypo_target{0.088542, {0.0, 0.0, 0.1}};
    auto h = nmm::curve_from_moments(hypo_target, 1e-12, 100);
    CHECK(h.r == doctest::Approx(0.3).epsilon(1e-10));
    REQUIRE(h.a.size() == 3);
    CHECK(std::abs(h.a[2] - cplx(0.027)) < 1e-10);

    nmm::HarmonicMoments bad{0.1, {0.0, 0.6}};
    CHECK_THROWS_AS(nmm::curve_from_moments(bad), nmm::NewtonError);
}

TEST_CASE("moment map round trip on random valid curves") {
    nmm::Rng rng(20240817);
    int accepted = 0;
    while (accepted < 40) {
        int d = accepted % 4;
        PolynomialCurve curve;
        curve.r = rng.uniform(0.05, 0.5);
        curve.a.resize(d + 1);
        for (int j = 0; j <= d; ++j) {
            double mag = (j == d && d > 0) ? rng.uniform(0.05, 0.2) : rng.uniform(0.0, 0.2);
            curve.a[j] = std::polar(mag * curve.r, rng.uniform(0.0, 2.0 * nmm::pi));
        }
        if (d == 0) curve.a[0] *= 0.5;  // keep the origin inside the shifted circle

        auto validation = nmm::validate_curve(curve, 512);
        if (!validation.valid || !validation.encircles_origin) continue;
        ++accepted;

        auto moments = nmm::moments_of_curve(curve, d + 1);
        auto fit = nmm::fit_curve_from_moments(moments, 1e-12, 100);
        REQUIRE(fit.converged);
        CHECK(std::abs(fit.curve.r - curve.r) < 1e-8);
        REQUIRE(fit.curve.a.size() == curve.a.size());
        for (int j = 0; j <= d; ++j) CHECK(std::abs(fit.curve.a[j] - curve.a[j]) < 1e-8);
    }
}

TEST_CASE("interior mask agrees with the pointwise winding test") {
    auto polyline = nmm::boundary_polyline(hypotrochoid_03(), 2048);
    nmm::RasterGrid grid;
    grid.x0 = grid.y0 = -0.4;
    grid.nx = grid.ny = 101;
    grid.dx = grid.dy = 0.8 / grid.nx;
    auto mask = nmm::interior_mask(polyline, grid);
    nmm::Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        int ix = static_cast<int>(rng.uniform(0.0, grid.nx));
        int iy = static_cast<int>(rng.uniform(0.0, grid.ny));
        cplx z = grid.cell_center(ix, iy);
        bool direct = nmm::point_in_polyline(polyline, z);
        CHECK(direct == (mask[static_cast<std::size_t>(iy) * grid.nx + ix] != 0));
    }
    CHECK(nmm::point_in_curve(hypotrochoid_03(), cplx(0.0)));
    CHECK_FALSE(nmm::point_in_curve(hypotrochoid_03(), cplx(1.0)));
}
