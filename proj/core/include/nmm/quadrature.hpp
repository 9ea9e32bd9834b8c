#ifndef NMM_QUADRATURE_HPP
#define NMM_QUADRATURE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "nmm/util.hpp"

namespace nmm {

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Polar tensor grid on the disc |z| <= cutoff_radius: Gauss-Legendre in the
/// radius, uniform (trapezoid) in the angle. Weights contain the Jacobian,
/// so sum(weights) equals the disc area.
struct QuadratureGrid {
    double cutoff_radius = 1.0;
    int n_r = 0;
    int n_theta = 0;
    std::vector<double> r_nodes;
    std::vector<double> r_weights;      // includes rho * dr
    std::vector<cplx> nodes;            // size n_r * n_theta, ring-major
    std::vector<double> weights;

    double weight_sum() const;
};

/// Throws std::invalid_argument if n_r < 16 or n_theta < 16.
QuadratureGrid build_grid(double cutoff_radius, int n_r, int n_theta);

/// Adaptive Simpson quadrature for 1D densities (law CDFs, branch masses).
double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b,
                        double tol = 1e-12, int max_depth = 48);

}

#endif
