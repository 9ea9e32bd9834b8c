#ifndef NMM_GAS_HPP
#define NMM_GAS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nmm/curve.hpp"
#include "nmm/potential.hpp"

namespace nmm {

/// Coulomb-gas energy I(delta_z) = (1/N) sum V + (1/N^2) sum_{i != j}
/// log 1/|z_i - z_j|. Coincident points return +infinity.
double gas_energy(std::span<const cplx> positions, const PotentialSpec& potential);

/// log of the unnormalised sampling weight: -N sum V + 2 sum_{i<j} log|z_i - z_j|.
double gas_log_weight(std::span<const cplx> positions, const PotentialSpec& potential);

struct GasOptions {
    long sweeps = 200000;        // one sweep = N single-site proposals
    long burn_in = 20000;
    std::uint64_t seed = 1;
    double proposal_scale = 0.0;  // 0: start from 0.3 sqrt(t0), adapt in burn-in
    double cutoff_radius = 0.0;   // 0: default_cutoff of the potential
    int histogram_bins = 100;
    int thin = 10;                // sample every `thin` sweeps after burn-in
    int moment_count = 0;         // 0: d + 3
    int energy_trace_points = 64; // I(delta_z) samples over the burn-in window
};

struct GasState {
    std::vector<cplx> positions;
    double log_weight = 0.0;
    long steps = 0;     // proposals attempted
    long accepted = 0;
    std::uint64_t seed = 0;
    double proposal_scale = 0.0;
};

struct EmpiricalMeasure {
    RasterGrid grid;   // bounding box of the cut-off disc
    std::vector<double> mass;  // normalised to 1
    long samples = 0;
};

struct MomentEstimate {
    cplx mean;           // hat m_k = (t0/N) mean of sum_i z_i^k
    double se_re = 0.0;  // batch-means standard errors
    double se_im = 0.0;
};

struct GasRun {
    GasState state;
    EmpiricalMeasure histogram;
    std::vector<MomentEstimate> moments;  // k = 1..moment_count
    double acceptance_rate = 0.0;
    std::vector<double> energy_trace;     // burn-in I(delta_z) series
    std::string rng_algorithm;
    double log_weight_drift = 0.0;        // worst incremental-vs-recomputed gap
};

/// Single-site Metropolis on the eigenvalue law e^{-N sum V} |Delta|^2
/// restricted to the cut-off disc. Identical inputs give bitwise identical
/// output.
GasRun mcmc_run(const PotentialSpec& potential, const GasOptions& options);

struct DensityCompareReport {
    double interior_mass = 0.0;          // histogram mass inside the curve
    double interior_mean_density = 0.0;  // over bins fully inside, off the layer
    double target_density = 0.0;         // 1 / (pi t0)
    double relative_deviation = 0.0;
    double exterior_far_mass = 0.0;      // beyond half a diameter from the curve
    int interior_bins = 0;
};
DensityCompareReport density_compare(const EmpiricalMeasure& measure,
                                     const PolynomialCurve& curve,
                                     double boundary_margin);

/// E(z) = V(z) + (2 / pi t0) int_{D+} log |z/zeta - 1|^{-1} over the curve
/// interior, on a midpoint raster with closed-form cells at the two
/// logarithmic singularities.
class EffectiveField {
public:
    EffectiveField(const PolynomialCurve& curve, const PotentialSpec& potential,
                   int cells_per_side = 1200);

    double value(cplx z) const;
    /// Exterior identity |d/dz̄ E - (z - rho(z)) / t0| with the derivative by
    /// central differences of value().
    double gradient_residual(cplx z, double step = 2e-3) const;

    const RasterGrid& grid() const { return grid_; }

private:
    PolynomialCurve curve_;
    PotentialSpec potential_;
    RasterGrid grid_;
    std::vector<std::uint8_t> mask_;
    double cell_area_ = 0.0;
    double log_zeta_integral_ = 0.0;  // int_{D+} log|zeta|
};

struct LevelSpacingMcReport {
    std::vector<double> probability;  // empirical A_N(n), sums to 1 exactly
    std::vector<double> standard_error;
    long samples = 0;
};

/// Counts eigenvalues in the disc of radius sqrt(x/N) about 0 across thinned
/// Metropolis samples. Rotationally symmetric (Gaussian) potentials only.
LevelSpacingMcReport level_spacing_mc(double t0, int N, double x, const GasOptions& options);

}

#endif
