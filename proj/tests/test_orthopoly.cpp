#include <cmath>
#include <complex>

#include "doctest.h"
#include "nmm/orthopoly.hpp"
#include "nmm/rng.hpp"

using nmm::cplx;
using nmm::PotentialSpec;

namespace {

// pi t0^{n+1} n! / N^{n+1}: norms of the monomials under the radial weight.
double monomial_norm(double t0, int N, int n) {
    return nmm::pi * std::exp((n + 1.0) * std::log(t0 / N) + std::lgamma(n + 1.0));
}

PotentialSpec radial_potential(double t0, int N) { return {t0, {}, N}; }
PotentialSpec gaussian_potential(double t0, double t2, int N) { return {t0, {0.0, t2}, N}; }
PotentialSpec cubic_potential(double t0, double t3, int N) { return {t0, {0.0, 0.0, t3}, N}; }

}  // namespace

TEST_CASE("potential value and symmetry detection") {
    auto gauss = gaussian_potential(0.1, 0.2, 8);
    cplx z(0.3, 0.4);
    double expect = (std::norm(z) - 2.0 * (0.2 * (z * z)).real()) / 0.1;
    CHECK(gauss(z) == doctest::Approx(expect).epsilon(1e-14));

    CHECK(radial_potential(1.0, 4).symmetry_period() == 0);
    CHECK(gauss.symmetry_period() == 2);
    CHECK(cubic_potential(0.05, 0.05, 8).symmetry_period() == 3);
    CHECK(PotentialSpec{1.0, {0.1, 0.2}, 4}.symmetry_period() == 1);
}

TEST_CASE("weighted inner products against Gaussian integrals") {
    double t0 = 0.3;
    int N = 4;
    auto pot = radial_potential(t0, N);
    auto grid = nmm::build_grid(6.0 * std::sqrt(t0), 160, 64);

    std::vector<cplx> one = {1.0};
    auto ip = nmm::inner_product(one, one, 1.0, pot, grid);
    CHECK(ip.real() == doctest::Approx(nmm::pi * t0 / N).epsilon(1e-10));
    CHECK(std::abs(ip.imag()) < 1e-16);

    // Angular orthogonality of distinct monomials.
    std::vector<cplx> z1 = {0.0, 1.0}, z2 = {0.0, 0.0, 1.0};
    CHECK(std::abs(nmm::inner_product(z1, z2, 1.0, pot, grid)) < 1e-14);

    // (z, z) at N = 1 is pi t0^2.
    auto pot1 = radial_potential(t0, 1);
    auto grid1 = nmm::build_grid(8.0 * std::sqrt(t0), 200, 64);
    CHECK(nmm::inner_product(z1, z1, 1.0, pot1, grid1).real() ==
          doctest::Approx(nmm::pi * t0 * t0).epsilon(1e-10));

    auto checked = nmm::inner_product_checked(one, one, 1.0, pot, grid);
    CHECK(checked.converged);
}

TEST_CASE("radial weight gives monomials with closed-form norms") {
    double t0 = 0.1;
    int N = 16, n_max = 12;
    auto pot = radial_potential(t0, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), 160, 64);
    auto family = nmm::build_family(pot, grid, n_max);

    REQUIRE(family.n_max == n_max);
    CHECK_FALSE(family.truncated);
    for (int n = 0; n <= n_max; ++n) {
        CHECK(family.norms[n] == doctest::Approx(monomial_norm(t0, N, n)).epsilon(1e-9));
        // p_n = z^n exactly: the off-diagonal scaled coefficients vanish.
        for (int m = 0; m < n; ++m) CHECK(std::abs(family.coeff[n][m]) < 1e-12);
        CHECK(std::abs(family.coeff[n][n] - std::pow(family.scale, n)) < 1e-12);
    }

    // Monic normalisation is exact by construction in z.
    cplx probe(0.21, -0.07);
    CHECK(std::abs(family.eval_p(5, probe) - std::pow(probe, 5)) < 1e-12);
}

TEST_CASE("orthogonality holds on the build grid") {
    auto pot = gaussian_potential(0.1, 0.2, 24);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, 20), 200, 128);
    auto family = nmm::build_family(pot, grid, 20);
    REQUIRE(family.n_max == 20);

    for (int m = 0; m <= 20; ++m) {
        for (int n = m; n <= 20; ++n) {
            auto ip = nmm::inner_product(family.coeff[m], family.coeff[n], family.scale, pot,
                                         grid);
            if (m == n)
                CHECK(ip.real() == doctest::Approx(family.norms[n]).epsilon(1e-8));
            else
                CHECK(std::abs(ip) <= 1e-8 * std::sqrt(family.norms[m] * family.norms[n]));
        }
    }

    // Partition function stays finite: log Z = log N! + sum log h_n.
    double log_z = std::lgamma(pot.N + 1.0);
    for (int n = 0; n <= family.n_max; ++n) log_z += std::log(family.norms[n]);
    CHECK(std::isfinite(log_z));
}

TEST_CASE("symmetry selection rule zeroes off-class coefficients") {
    auto pot = cubic_potential(0.05, 0.05, 18);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, 15), 160, 128);
    auto family = nmm::build_family(pot, grid, 15);
    REQUIRE(family.n_max == 15);
    for (int n = 0; n <= 15; ++n)
        for (int m = 0; m <= n; ++m)
            if ((n - m) % 3 != 0) CHECK(std::abs(family.coeff[n][m]) < 1e-10);
}

TEST_CASE("gaussian recursion coefficients match the explicit solution") {
    double t0 = 0.1, t2 = 0.2;
    int N = 32, n_max = 26;
    auto pot = gaussian_potential(t0, t2, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), 200, 256);
    auto family = nmm::build_family(pot, grid, n_max);
    REQUIRE(family.n_max == n_max);

    auto recursion = nmm::recursion_coefficients(family);
    for (int n = 1; n <= 24; ++n) {
        double expected = std::sqrt(t0 * n / (N * (1.0 - 4.0 * t2 * t2)));
        CHECK(recursion.r[n] == doctest::Approx(expected).epsilon(1e-5));
        CHECK(recursion.r[n] > 0.0);
    }
    // a_n = 2 t2 r_{n+1} for the quadratic coupling.
    for (int n = 0; n + 1 <= 24; ++n)
        CHECK(std::abs(recursion.a[n] - 2.0 * t2 * recursion.r[n + 1]) < 1e-6);
    CHECK(recursion.residual_coupling < 1e-6);
    CHECK(recursion.residual_norm_chain < 1e-6);

    CHECK_THROWS_AS(nmm::recursion_coefficients(nmm::build_family(
                        PotentialSpec{0.1, {0.01, 0.05}, 12},
                        nmm::build_grid(2.0, 64, 64), 8)),
                    std::invalid_argument);
}

TEST_CASE("cubic recursion residuals stay at the quadrature level") {
    double t0 = 0.05, t3 = 0.05;
    int N = 24, n_max = 20;
    auto pot = cubic_potential(t0, t3, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), 200, 128);
    auto family = nmm::build_family(pot, grid, n_max);
    auto recursion = nmm::recursion_coefficients(family);
    CHECK(recursion.residual_coupling < 1e-4);
    CHECK(recursion.residual_norm_chain < 1e-4);
}

TEST_CASE("kernel identities: trace, projection, and the closed form") {
    double t0 = 0.1;
    int N = 16;
    auto pot = radial_potential(t0, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, N), 200, 96);
    auto family = nmm::build_family(pot, grid, N - 1);

    double trace = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
        trace += grid.weights[i] * nmm::kernel(family, grid.nodes[i], grid.nodes[i]).real();
    CHECK(trace == doctest::Approx(static_cast<double>(N)).epsilon(1e-6));

    nmm::Rng rng(3);
    for (int pair = 0; pair < 10; ++pair) {
        cplx w = std::polar(rng.uniform(0.0, 0.4), rng.uniform(0.0, 2 * nmm::pi));
        cplx z = std::polar(rng.uniform(0.0, 0.4), rng.uniform(0.0, 2 * nmm::pi));
        cplx projected = 0.0;
        for (std::size_t i = 0; i < grid.nodes.size(); ++i)
            projected += grid.weights[i] * nmm::kernel(family, w, grid.nodes[i]) *
                         nmm::kernel(family, grid.nodes[i], z);
        cplx direct = nmm::kernel(family, w, z);
        CHECK(std::abs(projected - direct) <= 1e-6 * std::abs(direct));
    }

    // (1/N) K_N(z, z) against the partial exponential sum.
    for (double radius : {0.0, 0.15, 0.3, 0.4}) {
        cplx z(radius, 0.1 * radius);
        CHECK(nmm::one_point_density(family, z) ==
              doctest::Approx(nmm::gaussian_density_closed_form(t0, N, z)).epsilon(1e-8));
    }
}

TEST_CASE("closed-form density: centre, exterior decay, boundary ratio") {
    double t0 = 0.1;
    double centre = 1.0 / (nmm::pi * t0);
    CHECK(nmm::gaussian_density_closed_form(t0, 64, 0.0) ==
          doctest::Approx(centre).epsilon(1e-12));
    CHECK(nmm::gaussian_density_closed_form(t0, 64, 1.3 * std::sqrt(t0)) <= 1e-3 * centre);

    double ratio = nmm::gaussian_density_closed_form(t0, 256, std::sqrt(t0)) / centre;
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);
}

TEST_CASE("multiplication operator: shift form, band structure, bound") {
    double t0 = 0.1;
    int N = 16, n_max = 12;
    auto pot = radial_potential(t0, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), 200, 96);
    auto family = nmm::build_family(pot, grid, n_max);
    auto ops = nmm::operator_matrices(family);

    for (int n = 0; n < n_max; ++n) {
        double expected = std::sqrt(t0 * (n + 1.0) / N);
        CHECK(std::abs(ops.L(n + 1, n) - cplx(expected)) < 1e-9);
    }
    for (int m = 0; m <= n_max; ++m)
        for (int n = 0; n <= n_max; ++n) {
            if (m >= n + 2) CHECK(std::abs(ops.L(m, n)) <= 1e-8);
            CHECK(std::abs(ops.L(m, n)) <= grid.cutoff_radius);
        }
    // A = d/dz annihilates degree 0 and lowers the shift.
    for (int n = 0; n <= n_max; ++n) CHECK(std::abs(ops.A(n, 0)) < 1e-10);
}

TEST_CASE("operator identity L* = (t0/N) A + sum k t_k L^{k-1}") {
    {
        auto pot = radial_potential(0.1, 16);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, 12), 200, 96);
        auto report = nmm::check_operator_identity(nmm::build_family(pot, grid, 12));
        CHECK(report.max_residual <= 1e-8);
        CHECK(report.boundary_estimate < 1e-12);
    }
    {
        auto pot = gaussian_potential(0.1, 0.2, 32);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, 24), 200, 128);
        auto report = nmm::check_operator_identity(nmm::build_family(pot, grid, 24));
        CHECK(report.max_residual <= 1e-6);
    }
    {
        auto pot = cubic_potential(0.05, 0.05, 32);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, 24), 200, 128);
        auto report = nmm::check_operator_identity(nmm::build_family(pot, grid, 24));
        CHECK(report.max_residual <= 1e-6);
    }
}

TEST_CASE("finite-N string equation on the truncated commutator") {
    {
        double t0 = 0.1, t2 = 0.2;
        int N = 24;
        auto pot = gaussian_potential(t0, t2, N);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, N), 200, 128);
        auto family = nmm::build_family(pot, grid, N);
        auto report = nmm::check_string_equation(family);
        CHECK(report.target == doctest::Approx(t0 / N));
        CHECK(report.max_diag_deviation <= 1e-6);
        CHECK(report.max_offdiag <= 1e-6);
    }
    {
        double t0 = 0.05, t3 = 0.05;
        int N = 24;
        auto pot = cubic_potential(t0, t3, N);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, N), 200, 128);
        auto family = nmm::build_family(pot, grid, N);
        auto report = nmm::check_string_equation(family);
        CHECK(report.max_diag_deviation <= 1e-5);
        CHECK(report.max_offdiag <= 1e-5);
    }
}

TEST_CASE("zeros: monomial degeneracy, realness, support, rays") {
    {
        // |z|^2 potential: p_n = z^n has an n-fold zero at the origin.
        auto pot = radial_potential(0.1, 12);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, 10), 160, 64);
        auto family = nmm::build_family(pot, grid, 10);
        auto zeros = nmm::polynomial_zeros(family, 7);
        REQUIRE(zeros.size() == 7);
        for (const auto& z : zeros) CHECK(std::abs(z) < 1e-10);
    }
    {
        double t0 = 0.1, t2 = 0.2;
        int N = 20, n = 20;
        auto pot = gaussian_potential(t0, t2, N);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, n), 200, 128);
        auto family = nmm::build_family(pot, grid, n);
        auto zeros = nmm::polynomial_zeros(family, n);
        REQUIRE(zeros.size() == static_cast<std::size_t>(n));
        double x = static_cast<double>(n) / N;
        double c = std::sqrt(8.0 * t2 * x * t0 / (1.0 - 4.0 * t2 * t2));
        for (const auto& z : zeros) {
            CHECK(std::abs(z.imag()) <= 1e-8);
            CHECK(std::abs(z.real()) <= c + 0.05);
        }
        CHECK(nmm::zero_symmetry_defect(zeros, 2) < 1e-8);
    }
    {
        double t0 = 0.05, t3 = 0.05;
        int N = 24, n = 18;
        auto pot = cubic_potential(t0, t3, N);
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, n), 200, 128);
        auto family = nmm::build_family(pot, grid, n);
        auto zeros = nmm::polynomial_zeros(family, n);
        for (const auto& z : zeros) {
            if (std::abs(z) < 1e-9) continue;
            // On the three rays: z^3 is real and non-negative.
            cplx cube = z * z * z;
            CHECK(std::abs(cube.imag()) <= 1e-6 * std::abs(cube));
            CHECK(cube.real() > 0.0);
        }
        CHECK(nmm::zero_symmetry_defect(zeros, 3) < 1e-7);
    }
}

TEST_CASE("reduced zeros are real, positive, distinct, interlacing") {
    double t0 = 0.05, t3 = 0.05;
    int N = 30, n_max = 30;
    auto pot = cubic_potential(t0, t3, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), 220, 160);
    auto family = nmm::build_family(pot, grid, n_max);
    REQUIRE(family.n_max == n_max);

    std::vector<std::vector<double>> reduced(n_max + 1);
    for (int n = 3; n <= n_max; ++n) reduced[n] = nmm::reduced_zeros(family, n);

    for (int n = 4; n <= n_max; ++n) {
        const auto& prev = reduced[n - 1];
        const auto& cur = reduced[n];
        if (cur.empty() || prev.empty()) continue;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) CHECK(cur[i] < cur[i + 1]);
        CHECK(nmm::zeros_interlace(prev, cur));
    }
}

TEST_CASE("KS statistics for the Gaussian zeros shrink with n") {
    double t0 = 0.1, t2 = 0.2;
    int N = 40;
    auto pot = gaussian_potential(t0, t2, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, N), 220, 192);
    auto family = nmm::build_family(pot, grid, N);
    REQUIRE(family.n_max == N);

    auto law_at = [&](int n) {
        double x = static_cast<double>(n) / N;
        double b1 = std::sqrt((1.0 + 2.0 * t2) / (1.0 - 2.0 * t2) * x * t0);
        double b2 = std::sqrt((1.0 - 2.0 * t2) / (1.0 + 2.0 * t2) * x * t0);
        return nmm::ZeroDensityLaw::ellipse(b1, b2, x);
    };

    auto ks40 = nmm::zero_statistics(nmm::polynomial_zeros(family, 40), law_at(40));
    CHECK(ks40.ks <= 0.12);
    CHECK(ks40.off_support == 0);

    auto ks10 = nmm::zero_statistics(nmm::polynomial_zeros(family, 10), law_at(10));
    CHECK(ks40.ks < ks10.ks);
}

TEST_CASE("cubic per-branch zero counts are n/3 within one") {
    double t0 = 0.05, t3 = 0.05;
    int N = 30, n = 30;
    auto pot = cubic_potential(t0, t3, N);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, n), 220, 160);
    auto family = nmm::build_family(pot, grid, n);
    auto zeros = nmm::polynomial_zeros(family, n);

    int counts[3] = {0, 0, 0};
    for (const auto& z : zeros) {
        if (std::abs(z) < 1e-9) continue;
        double angle = std::arg(z);
        int branch = static_cast<int>(std::lround(angle / (2.0 * nmm::pi / 3.0)));
        counts[(branch + 3) % 3] += 1;
    }
    for (int b = 0; b < 3; ++b) CHECK(std::abs(counts[b] - n / 3) <= 1);
}

TEST_CASE("family truncates on requested degrees past the cap or N") {
    auto pot = radial_potential(0.1, 8);
    auto grid = nmm::build_grid(nmm::default_cutoff(pot, 8), 64, 64);
    CHECK_THROWS_AS(nmm::build_family(pot, grid, 9), std::invalid_argument);
    CHECK_THROWS_AS(nmm::build_family(PotentialSpec{0.1, {}, 64}, grid, 49),
                    std::invalid_argument);
}
