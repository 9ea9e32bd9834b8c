#include "nmm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nmm {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    std::vector<double> x(n), w(n);
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        double weight = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    return {x, w};
}

double QuadratureGrid::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

QuadratureGrid build_grid(double cutoff_radius, int n_r, int n_theta) {
    if (cutoff_radius <= 0.0) throw std::invalid_argument("build_grid: cutoff must be positive");
    if (n_r < 16 || n_theta < 16) throw std::invalid_argument("build_grid: need n_r, n_theta >= 16");

    QuadratureGrid grid;
    grid.cutoff_radius = cutoff_radius;
    grid.n_r = n_r;
    grid.n_theta = n_theta;

    auto [x, w] = gauss_legendre(n_r);
    grid.r_nodes.resize(n_r);
    grid.r_weights.resize(n_r);
    for (int i = 0; i < n_r; ++i) {
        double rho = 0.5 * cutoff_radius * (x[i] + 1.0);
        grid.r_nodes[i] = rho;
        grid.r_weights[i] = 0.5 * cutoff_radius * w[i] * rho;
    }

    double dtheta = 2.0 * pi / n_theta;
    grid.nodes.resize(static_cast<std::size_t>(n_r) * n_theta);
    grid.weights.resize(grid.nodes.size());
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_theta; ++j) {
            std::size_t idx = static_cast<std::size_t>(i) * n_theta + j;
            grid.nodes[idx] = std::polar(grid.r_nodes[i], dtheta * j);
            grid.weights[idx] = grid.r_weights[i] * dtheta;
        }
    }
    return grid;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}
