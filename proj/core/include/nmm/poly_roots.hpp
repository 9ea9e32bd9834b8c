#ifndef NMM_POLY_ROOTS_HPP
#define NMM_POLY_ROOTS_HPP

#include <span>
#include <vector>

#include "nmm/util.hpp"

namespace nmm {

/// All complex roots of sum_k coeffs[k] z^k by Aberth-Ehrlich simultaneous
/// iteration with a Newton polish. Exact zero roots (vanishing low-order
/// coefficients) are split off before iterating. The starting ring is
/// deterministically jittered, so results are reproducible.
///
/// Throws std::invalid_argument on an empty or identically-zero polynomial
/// and std::runtime_error if the iteration fails to settle.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs,
                             double tol = 1e-13,
                             int max_sweeps = 500);

/// Horner evaluation of p and p' at z.
void poly_eval(std::span<const cplx> coeffs, cplx z, cplx& p, cplx& dp);

}

#endif
