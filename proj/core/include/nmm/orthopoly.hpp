#ifndef NMM_ORTHOPOLY_HPP
#define NMM_ORTHOPOLY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nmm/potential.hpp"
#include "nmm/quadrature.hpp"
#include "nmm/schwarz.hpp"

namespace nmm {

/// Monic orthogonal polynomials p_0..p_{n_max} of the weighted inner product
/// (f, g) = int conj(f) g e^{-N V} over the cut-off disc. Coefficients are
/// stored in the scaled monomial basis (z/s)^m; rows are monic in z.
struct OrthogonalFamily {
    PotentialSpec potential;
    QuadratureGrid grid;
    double scale = 1.0;
    int n_max = 0;
    std::vector<std::vector<cplx>> coeff;  // coeff[n][m]
    std::vector<double> norms;             // h_n > 0
    bool truncated = false;
    std::string warning;

    cplx eval_p(int n, cplx z) const;
    cplx eval_q(int n, cplx z) const { return eval_p(n, z) / std::sqrt(norms[n]); }
    double half_weight(cplx z) const;  // e^{-N V(z) / 2}
};

/// Weighted inner product of two polynomials given by scaled-basis
/// coefficients.
cplx inner_product(std::span<const cplx> f, std::span<const cplx> g, double scale,
                   const PotentialSpec& potential, const QuadratureGrid& grid);

struct InnerProductCheck {
    cplx value;
    cplx refined;  // doubled grid
    bool converged = false;
};
InnerProductCheck inner_product_checked(std::span<const cplx> f, std::span<const cplx> g,
                                        double scale, const PotentialSpec& potential,
                                        const QuadratureGrid& grid,
                                        double rel_tol = 1e-9);

/// Gram-matrix route: moment matrix in the scaled basis, Cholesky per
/// symmetry block (indices tied mod d+1 for a single-harmonic potential),
/// with double-double accumulation above degree 24. Loss of positivity
/// truncates the family and sets the warning.
OrthogonalFamily build_family(const PotentialSpec& potential, const QuadratureGrid& grid,
                              int n_max);

/// K_N(w, z); requires n_max >= N - 1.
cplx kernel(const OrthogonalFamily& family, cplx w, cplx z);
double one_point_density(const OrthogonalFamily& family, cplx z);

/// det(K_N(z_i, z_j)): the k-point correlation function.
double correlation_determinant(const OrthogonalFamily& family, std::span<const cplx> points);

/// Closed-form one-point density of the |z|^2 potential (partial
/// exponential sum), stable for desk-scale N.
double gaussian_density_closed_form(double t0, int N, cplx z);

struct OperatorMatrices {
    Eigen::MatrixXcd L;      // multiplication by z in the orthonormal basis
    Eigen::MatrixXcd Lstar;  // adjoint
    Eigen::MatrixXcd A;      // d/dz
};
OperatorMatrices operator_matrices(const OrthogonalFamily& family);

struct OperatorIdentityReport {
    double max_residual = 0.0;      // L* - (t0/N) A - sum k t_k L^{k-1} on the safe block
    double boundary_estimate = 0.0; // contour estimate of the discarded boundary term
    int block = 0;
};
OperatorIdentityReport check_operator_identity(const OrthogonalFamily& family);

struct StringEquationReport {
    double target = 0.0;  // t0 / N
    double max_diag_deviation = 0.0;
    double max_offdiag = 0.0;
    int block = 0;
};
/// Commutator block of the truncated multiplication operator; requires
/// n_max >= N and the potential degree d >= 1.
StringEquationReport check_string_equation(const OrthogonalFamily& family);

struct RecursionReport {
    std::vector<double> r;  // r[n] = L_{n+1,n}, n = 0..
    std::vector<cplx> a;    // a[n] = L_{n,n+d}
    double residual_coupling = 0.0;    // conj(a_n) vs (d+1) t_{d+1} prod r
    double residual_norm_chain = 0.0;  // |a_n|^2 chain vs (t0/N)(n+1)
};
/// Single-harmonic potentials only.
RecursionReport recursion_coefficients(const OrthogonalFamily& family);

/// Roots of p_n by Aberth-Ehrlich on the scaled coefficients.
std::vector<cplx> polynomial_zeros(const OrthogonalFamily& family, int n);

/// Largest deviation of the zero multiset from its rotation by
/// e^{2 pi i / period}.
double zero_symmetry_defect(std::span<const cplx> zeros, int period);

/// Zeros of the reduced polynomial q~ in u = z^{d+1} for a single-harmonic
/// family: p_n(z) = z^{n mod (d+1)} q~(z^{d+1}). Checks realness and
/// positivity within tol and returns them sorted ascending.
std::vector<double> reduced_zeros(const OrthogonalFamily& family, int n, double tol = 1e-8);

/// Strict interlacing of sorted zero lists: either equal lengths with a
/// strict shift, or previous interleaves between consecutive new zeros.
bool zeros_interlace(std::span<const double> previous, std::span<const double> current);

struct KsReport {
    double ks = 1.0;
    int off_support = 0;
    int count = 0;
};
/// Kolmogorov-Smirnov distance between the projected empirical zeros and the
/// law's CDF. Projection: Re z for the ellipse law, |z| for the hypotrochoid.
KsReport zero_statistics(std::span<const cplx> zeros, const ZeroDensityLaw& law);

}

#endif
