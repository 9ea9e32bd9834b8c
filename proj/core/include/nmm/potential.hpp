#ifndef NMM_POTENTIAL_HPP
#define NMM_POTENTIAL_HPP

#include <vector>

#include "nmm/curve.hpp"
#include "nmm/quadrature.hpp"

namespace nmm {

/// V(z) = (1/t0) (|z|^2 - 2 Re sum_{k=1}^{d+1} t_k z^k) at inverse
/// temperature N. tk[k-1] holds t_k.
struct PotentialSpec {
    double t0 = 1.0;
    std::vector<cplx> tk;
    int N = 1;

    int degree() const { return static_cast<int>(tk.size()) - 1; }

    double operator()(cplx z) const;

    /// Rotation symmetry: 0 when V depends on |z| only, p = k0 when the only
    /// harmonic is t_{k0} (V invariant under z -> e^{2 pi i / p} z),
    /// 1 otherwise.
    int symmetry_period() const;

    /// Harmonic moments (t0, t_1..t_{d+1}) this potential targets.
    HarmonicMoments moments() const;
};

/// e^{-N V} mass outside this radius is negligible at working precision:
/// max(6 sqrt(t0 n_max / N), 3 outer radius of the droplet curve when the
/// moment inversion converges).
double default_cutoff(const PotentialSpec& potential, int n_max);

/// Throws when V is not positive on the grid away from the origin or when
/// |t2| >= 1/2.
void check_potential_on_grid(const PotentialSpec& potential, const QuadratureGrid& grid);

}

#endif
