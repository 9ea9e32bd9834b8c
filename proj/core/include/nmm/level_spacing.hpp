#ifndef NMM_LEVEL_SPACING_HPP
#define NMM_LEVEL_SPACING_HPP

#include <vector>

namespace nmm {

/// A_N(n): probability of exactly n eigenvalues of the Gaussian |z|^2/t0
/// ensemble in the disc of radius sqrt(x/N) around the origin. Evaluated
/// with log-space partial sums Sigma_i and the elementary-symmetric
/// recurrence in its absorbed (division-free) form, so Sigma_i = 0 is
/// handled without special casing.
std::vector<double> gaussian_level_spacing_table(double t0, int N, double x);

double gaussian_level_spacing(double t0, int N, double x, int n);

}

#endif
