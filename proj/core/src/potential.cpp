#include "nmm/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace nmm {

double PotentialSpec::operator()(cplx z) const {
    double harmonic = 0.0;
    cplx zp = z;
    for (const auto& coefficient : tk) {
        harmonic += (coefficient * zp).real();
        zp *= z;
    }
    return (std::norm(z) - 2.0 * harmonic) / t0;
}

int PotentialSpec::symmetry_period() const {
    int nonzero_index = 0;
    int count = 0;
    for (std::size_t i = 0; i < tk.size(); ++i) {
        if (tk[i] != cplx(0.0)) {
            ++count;
            nonzero_index = static_cast<int>(i) + 1;
        }
    }
    if (count == 0) return 0;
    if (count == 1) return nonzero_index;
    return 1;
}

HarmonicMoments PotentialSpec::moments() const {
    return {t0, tk};
}

double default_cutoff(const PotentialSpec& potential, int n_max) {
    double cutoff = 6.0 * std::sqrt(potential.t0 * std::max(1, n_max) / potential.N);
    CurveFit fit = fit_curve_from_moments(potential.moments(), 1e-10, 100);
    if (fit.converged) cutoff = std::max(cutoff, 3.0 * outer_radius(fit.curve));
    return cutoff;
}

void check_potential_on_grid(const PotentialSpec& potential, const QuadratureGrid& grid) {
    if (!(potential.t0 > 0.0)) throw std::invalid_argument("PotentialSpec: t0 must be positive");
    if (potential.N < 1) throw std::invalid_argument("PotentialSpec: N must be positive");
    if (potential.tk.size() >= 2 && !(std::abs(potential.tk[1]) < 0.5))
        throw std::invalid_argument("PotentialSpec: |t2| must be below 1/2");
    double origin_scale = 1e-3 * grid.cutoff_radius;
    for (const auto& z : grid.nodes) {
        if (std::abs(z) <= origin_scale) continue;
        if (!(potential(z) > 0.0))
            throw std::invalid_argument("PotentialSpec: V is not positive on the cut-off");
    }
}

}
