#include "nmm/poly_roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nmm/rng.hpp"

namespace nmm {

void poly_eval(std::span<const cplx> coeffs, cplx z, cplx& p, cplx& dp) {
    p = cplx(0.0);
    dp = cplx(0.0);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + coeffs[k];
    }
}

std::vector<cplx> poly_roots(std::span<const cplx> coeffs, double tol, int max_sweeps) {
    // Trim the true degree.
    std::size_t deg = coeffs.size();
    while (deg > 0 && std::abs(coeffs[deg - 1]) == 0.0) --deg;
    if (deg == 0) throw std::invalid_argument("poly_roots: zero polynomial");
    if (deg == 1) return {};

    double max_mag = 0.0;
    for (std::size_t k = 0; k < deg; ++k) max_mag = std::max(max_mag, std::abs(coeffs[k]));

    // Split off exact roots at the origin.
    std::size_t lead_zeros = 0;
    while (lead_zeros + 1 < deg && std::abs(coeffs[lead_zeros]) <= 1e-300 * max_mag)
        ++lead_zeros;

    std::vector<cplx> work(coeffs.begin() + lead_zeros, coeffs.begin() + deg);
    std::size_t n = work.size() - 1;
    std::vector<cplx> roots(lead_zeros, cplx(0.0));
    if (n == 0) return roots;

    cplx lead = work.back();
    for (auto& c : work) c /= lead;

    // Fujiwara bound for the starting ring, with deterministic jitter to
    // break symmetric stalls.
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double term = std::abs(work[n - 1 - k]);
        if (k + 1 == n) term *= 0.5;
        radius = std::max(radius, std::pow(term, 1.0 / (k + 1.0)));
    }
    radius = std::max(2.0 * radius, 1e-8);

    Rng jitter(0x9c0ffee0u ^ static_cast<std::uint64_t>(n));
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double angle = 2.0 * pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n) + 0.35;
        double rho = radius * (1.0 + 0.05 * (jitter.uniform() - 0.5));
        x[i] = std::polar(rho, angle + 0.02 * (jitter.uniform() - 0.5));
    }

    // Horner roundoff floor: |p(x)| below eps * sum |c_k| |x|^k cannot be
    // distinguished from zero, so such roots count as converged.
    auto noise_floor = [&work](cplx z) {
        double bound = 0.0, zp = 1.0, az = std::abs(z);
        for (const auto& c : work) {
            bound += std::abs(c) * zp;
            zp *= az;
        }
        return 8.0 * 2.22e-16 * bound;
    };

    bool settled = false;
    for (int sweep = 0; sweep < max_sweeps && !settled; ++sweep) {
        settled = true;
        for (std::size_t i = 0; i < n; ++i) {
            cplx p, dp;
            poly_eval(work, x[i], p, dp);
            if (std::abs(p) <= noise_floor(x[i])) continue;
            cplx newton = (dp == cplx(0.0)) ? cplx(0.0) : p / dp;
            cplx repulsion(0.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                cplx diff = x[i] - x[j];
                if (std::abs(diff) < 1e-300) diff = cplx(1e-12, 1e-12);
                repulsion += 1.0 / diff;
            }
            cplx denom = 1.0 - newton * repulsion;
            cplx step = (std::abs(denom) < 1e-300) ? newton : newton / denom;
            x[i] -= step;
            if (std::abs(step) > tol * (1.0 + std::abs(x[i]))) settled = false;
        }
    }
    if (!settled) throw std::runtime_error("poly_roots: Aberth iteration did not converge");

    // Newton polish.
    for (auto& root : x) {
        for (int it = 0; it < 3; ++it) {
            cplx p, dp;
            poly_eval(work, root, p, dp);
            if (std::abs(dp) == 0.0 || std::abs(p) <= noise_floor(root)) break;
            root -= p / dp;
        }
    }

    roots.insert(roots.end(), x.begin(), x.end());
    return roots;
}

}
