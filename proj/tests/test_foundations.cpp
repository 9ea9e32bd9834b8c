#include <cmath>
#include <complex>

#include "doctest.h"
#include "nmm/dd.hpp"
#include "nmm/poly_roots.hpp"
#include "nmm/quadrature.hpp"
#include "nmm/rng.hpp"

using nmm::cplx;

TEST_CASE("double-double arithmetic keeps bits plain double loses") {
    nmm::DD a(1.0);
    nmm::DD tiny(1e-25);
    nmm::DD sum = a + tiny + (-a);
    CHECK(static_cast<double>(sum) == doctest::Approx(1e-25).epsilon(1e-10));

    nmm::DD p = nmm::DD(1e8 + 1.0) * nmm::DD(1e8 - 1.0);
    CHECK(static_cast<double>(p - nmm::DD(1e16)) == doctest::Approx(-1.0));

    nmm::DD q = nmm::DD(2.0) / nmm::DD(3.0);
    nmm::DD back = q * nmm::DD(3.0) - nmm::DD(2.0);
    CHECK(std::abs(static_cast<double>(back)) < 1e-30);

    nmm::DD s = nmm::dd_sqrt(nmm::DD(2.0));
    nmm::DD err = s * s - nmm::DD(2.0);
    CHECK(std::abs(static_cast<double>(err)) < 1e-30);
}

TEST_CASE("rng streams are deterministic and well scaled") {
    nmm::Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    nmm::Rng c(7);
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double g = c.normal();
        mean += g;
        var += g * g;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));

    nmm::Rng s1 = nmm::Rng::split(9, 0), s2 = nmm::Rng::split(9, 1);
    CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("poly_roots solves quadratics and clustered products") {
    // (z - 1)(z - 2i)(z + 3)
    std::vector<cplx> c = {cplx(0, 6), cplx(-3, -4), cplx(2, -2), cplx(1, 0)};
    auto roots = nmm::poly_roots(c);
    REQUIRE(roots.size() == 3);
    auto contains = [&](cplx target) {
        for (const auto& r : roots)
            if (std::abs(r - target) < 1e-10) return true;
        return false;
    };
    CHECK(contains(cplx(1, 0)));
    CHECK(contains(cplx(0, 2)));
    CHECK(contains(cplx(-3, 0)));
}

TEST_CASE("poly_roots splits exact zeros at the origin") {
    // z^3 (z - 5)
    std::vector<cplx> c = {0.0, 0.0, 0.0, -5.0, 1.0};
    auto roots = nmm::poly_roots(c);
    REQUIRE(roots.size() == 4);
    int zero_count = 0;
    bool has_five = false;
    for (const auto& r : roots) {
        if (std::abs(r) == 0.0) ++zero_count;
        if (std::abs(r - 5.0) < 1e-10) has_five = true;
    }
    CHECK(zero_count == 3);
    CHECK(has_five);
}

TEST_CASE("poly_roots recovers degree-40 semicircle-node products accurately") {
    // prod (z - x_k) with the x_k at semicircle-law quantiles on [-1.4, 1.4],
    // the root layout orthogonal-polynomial zeros have (sparse at the edges).
    double c = 1.4;
    auto cdf = [c](double x) {
        return 0.5 + (x * std::sqrt(c * c - x * x) + c * c * std::asin(x / c)) /
                         (nmm::pi * c * c);
    };
    std::vector<double> targets(40);
    for (int k = 0; k < 40; ++k) {
        double want = (k + 0.5) / 40.0, lo = -c, hi = c;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (cdf(mid) < want ? lo : hi) = mid;
        }
        targets[k] = 0.5 * (lo + hi);
    }
    std::vector<cplx> coeffs = {1.0};
    for (double t : targets) {
        std::vector<cplx> next(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i + 1] += coeffs[i];
            next[i] -= coeffs[i] * t;
        }
        coeffs = next;
    }
    auto roots = nmm::poly_roots(coeffs);
    REQUIRE(roots.size() == 40);
    std::vector<double> re;
    for (const auto& r : roots) {
        CHECK(std::abs(r.imag()) < 1e-8);  // real coefficients keep simple roots real
        re.push_back(r.real());
    }
    // Positions match to the monomial representation's conditioning.
    std::sort(re.begin(), re.end());
    for (int k = 0; k < 40; ++k)
        CHECK(re[k] == doctest::Approx(targets[k]).epsilon(1e-4).scale(1.0));
}

TEST_CASE("gauss-legendre integrates high-degree polynomials exactly") {
    auto [x, w] = nmm::gauss_legendre(20);
    double integral = 0.0;
    for (int i = 0; i < 20; ++i) integral += w[i] * std::pow(x[i], 38);
    CHECK(integral == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("polar grid weight sum is the disc area") {
    auto grid = nmm::build_grid(1.0, 32, 64);
    CHECK(grid.weight_sum() == doctest::Approx(nmm::pi).epsilon(1e-13));

    auto grid2 = nmm::build_grid(2.5, 48, 32);
    CHECK(grid2.weight_sum() == doctest::Approx(nmm::pi * 6.25).epsilon(1e-13));

    // int |z|^2 over the unit disc = pi/2; int z = 0 by symmetry.
    double zz = 0.0;
    cplx z1 = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        zz += grid.weights[i] * std::norm(grid.nodes[i]);
        z1 += grid.weights[i] * grid.nodes[i];
    }
    CHECK(zz == doctest::Approx(nmm::pi / 2.0).epsilon(1e-12));
    CHECK(std::abs(z1) < 1e-14);

    CHECK_THROWS_AS(nmm::build_grid(1.0, 8, 64), std::invalid_argument);
}

TEST_CASE("adaptive simpson reaches tight tolerances") {
    double val = nmm::adaptive_simpson([](double x) { return std::sqrt(1.0 - x * x); },
                                       -1.0, 1.0, 1e-11);
    CHECK(val == doctest::Approx(nmm::pi / 2.0).epsilon(1e-8));
}
