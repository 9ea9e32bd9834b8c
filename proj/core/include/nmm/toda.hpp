#ifndef NMM_TODA_HPP
#define NMM_TODA_HPP

#include <utility>

#include "nmm/curve.hpp"
#include "nmm/laurent.hpp"

namespace nmm {

/// z(w) = h(w) and z~(w) = h̄(1/w) as Laurent data.
std::pair<LaurentSeries, LaurentSeries> laurent_of_curve(const PolynomialCurve& curve);

/// M_k = (z^k)_+ + (z^k)_0 / 2.
LaurentSeries toda_hamiltonian(const LaurentSeries& z, int k);
/// M~_k = (z~^k)_- + (z~^k)_0 / 2.
LaurentSeries toda_hamiltonian_tilde(const LaurentSeries& z_tilde, int k);

/// Values of one series at t0 - eps, t0, t0 + eps; the bracket takes its
/// t0-derivative by the central difference.
struct SeriesStencil {
    LaurentSeries minus, base, plus;
    double eps = 0.0;

    LaurentSeries d_dt0() const;
};

/// {f, g} = w f_w g_{t0} - w f_{t0} g_w. Antisymmetric and exact in the
/// w-derivative; the only discretisation is the t0 central difference.
LaurentSeries poisson_bracket(const SeriesStencil& f, const SeriesStencil& g);

/// Curves solved at the perturbed moment sets a flow check needs. The t_k
/// perturbations come in real and imaginary pairs so the holomorphic and
/// conjugate flows can be separated.
struct FlowStencil {
    HarmonicMoments base_moments;
    int flow_index = 0;
    double eps = 0.0;
    PolynomialCurve base;
    PolynomialCurve t0_minus, t0_plus;
    PolynomialCurve tk_re_minus, tk_re_plus;
    PolynomialCurve tk_im_minus, tk_im_plus;
    double max_newton_residual = 0.0;
};

/// All stencil inversions must converge with residual <= newton_tol.
FlowStencil make_flow_stencil(const HarmonicMoments& moments, int k, double eps,
                              double newton_tol = 1e-12);

/// {z, z~} - 1 at a single step size (no extrapolation).
LaurentSeries string_residual_series(const HarmonicMoments& moments, double eps);

/// Richardson-extrapolated max |{z, z~} - 1| coefficient.
double verify_string_equation(const HarmonicMoments& moments, double eps = 1e-4);

struct FlowReport {
    int flow_index = 0;
    double eps = 0.0;
    double residual_z = 0.0;        // dz/dt_k - {M_k, z}
    double residual_ztilde = 0.0;   // dz~/dt_k - {M_k, z~}
    double residual_conj_z = 0.0;   // dz/dt̄_k - {z, M~_k}
    double residual_conj_ztilde = 0.0;
    double string_residual = 0.0;
};

/// Flow residuals at a single step size (no extrapolation).
FlowReport flow_residuals_raw(const HarmonicMoments& moments, int k, double eps);

/// Central differences through the Newton inversion on both sides of the
/// flow equations, Richardson-extrapolated over (eps, eps/2).
FlowReport verify_flow(const HarmonicMoments& moments, int k, double eps = 0.0);

}

#endif
