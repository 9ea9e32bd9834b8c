#include "nmm/level_spacing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nmm {

std::vector<double> gaussian_level_spacing_table(double t0, int N, double x) {
    if (!(t0 > 0.0)) throw std::invalid_argument("gaussian_level_spacing: t0 must be positive");
    if (N < 1) throw std::invalid_argument("gaussian_level_spacing: N must be positive");
    if (x < 0.0) throw std::invalid_argument("gaussian_level_spacing: x must be non-negative");

    double lambda = x / t0;

    // log Sigma_i = log sum_{j<i} e^{-lambda} lambda^j / j!, i = 1..N.
    std::vector<double> sigma(N + 1, 0.0);
    double running = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= N; ++i) {
        double term = (lambda > 0.0)
                          ? -lambda + (i - 1) * std::log(lambda) - std::lgamma(i)
                          : (i == 1 ? 0.0 : -std::numeric_limits<double>::infinity());
        double hi = std::max(running, term);
        running = (hi == -std::numeric_limits<double>::infinity())
                      ? hi
                      : hi + std::log(std::exp(running - hi) + std::exp(term - hi));
        sigma[i] = std::exp(std::min(running, 0.0));
        if (sigma[i] > 1.0) sigma[i] = 1.0;
    }

    // f_n^(i) = Sigma_i f_n^(i-1) + (1 - Sigma_i) f_{n-1}^(i-1), which is the
    // elementary-symmetric recurrence with the prod Sigma_i factor absorbed.
    std::vector<double> f(N + 1, 0.0);
    f[0] = 1.0;
    for (int i = 1; i <= N; ++i) {
        double keep = sigma[i];
        double move = 1.0 - sigma[i];
        for (int n = i; n >= 1; --n) f[n] = keep * f[n] + move * f[n - 1];
        f[0] = keep * f[0];
    }
    return f;
}

double gaussian_level_spacing(double t0, int N, double x, int n) {
    if (n < 0 || n > N) throw std::invalid_argument("gaussian_level_spacing: n out of range");
    return gaussian_level_spacing_table(t0, N, x)[n];
}

}
