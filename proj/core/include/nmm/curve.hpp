#ifndef NMM_CURVE_HPP
#define NMM_CURVE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmm/util.hpp"

namespace nmm {

/// Area parameter t0 (interior area / pi) and exterior harmonic moments
/// t_1..t_{d+1}. t[k-1] holds t_k.
struct HarmonicMoments {
    double t0 = 0.0;
    std::vector<cplx> t;

    int degree() const { return static_cast<int>(t.size()) - 1; }
    cplx tk(int k) const {
        return (k >= 1 && k <= static_cast<int>(t.size())) ? t[k - 1] : cplx(0.0);
    }
};

/// Interior harmonic moments v_1..v_K; v[k-1] holds v_k.
struct InteriorMoments {
    std::vector<cplx> v;
};

/// Conformal coefficients of h(w) = r w + sum_{j=0}^{d} a_j w^{-j} on |w|=1.
struct PolynomialCurve {
    double r = 1.0;
    std::vector<cplx> a;

    int degree() const { return a.empty() ? 0 : static_cast<int>(a.size()) - 1; }
};

/// Drops trailing near-zero a_j (lowers the degree). a_0 alone is kept.
PolynomialCurve normalized(PolynomialCurve curve, double tol = 1e-14);

cplx eval_map(const PolynomialCurve& curve, cplx w);
cplx eval_map_derivative(const PolynomialCurve& curve, cplx w);
/// Conjugate-coefficient map: h̄(w) = r w + sum conj(a_j) w^{-j}.
cplx eval_map_conj(const PolynomialCurve& curve, cplx w);

/// Largest modulus of a zero of h' away from the origin; 0 for a circle.
double critical_radius(const PolynomialCurve& curve);

/// max_{|w|=1} |h(w)|, sampled.
double outer_radius(const PolynomialCurve& curve, int samples = 512);

struct CurveValidation {
    bool valid = false;
    double critical_radius = 0.0;
    double min_secant_ratio = 0.0;  // min |h(w_i)-h(w_j)| / |w_i-w_j|
    int tangent_winding = 0;
    bool encircles_origin = false;
    std::string failure;
};

/// Numerical check that h parametrises a positively oriented simple curve:
/// critical radius < 1, tangent winding +1, and no secant collapse on
/// `samples` unit-circle nodes. samples must be at least 8 (d+1); 0 picks a
/// default. Failures are reported in the result, not thrown.
CurveValidation validate_curve(const PolynomialCurve& curve, int samples = 0);

struct MomentOptions {
    bool shifted = false;          // origin not enclosed: use the algebraic route
    int min_nodes = 512;
    int max_nodes = 1 << 16;
    double contour_radius = 1.25;
    double node_doubling_tol = 1e-12;
    double t0_agreement_tol = 1e-10;
};

struct MomentReport {
    HarmonicMoments moments;
    int nodes_used = 0;
    double t0_contour = 0.0;
    double t0_closed_form = 0.0;
};

/// Forward map: t0 from the closed-form area and t_1..t_{k_max} from the
/// trapezoid contour integral of h̄(1/w) h'(w) h(w)^{-k}, with node count
/// auto-doubled until stable. Requires a valid curve that encircles the
/// origin unless options.shifted is set.
HarmonicMoments moments_of_curve(const PolynomialCurve& curve, int k_max,
                                 const MomentOptions& options = {});
MomentReport moments_of_curve_report(const PolynomialCurve& curve, int k_max,
                                     const MomentOptions& options = {});

/// Same map evaluated by expanding the residue at infinity; exact up to
/// roundoff, valid with or without the origin enclosed.
HarmonicMoments moments_of_curve_series(const PolynomialCurve& curve, int k_max);

/// v_k = contour integral of h(w)^k h̄(1/w) h'(w) on |w| = 1.
InteriorMoments interior_moments(const PolynomialCurve& curve, int k_max,
                                 int min_nodes = 512);

struct NewtonError : std::runtime_error {
    NewtonError(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

struct CurveFit {
    bool converged = false;
    PolynomialCurve curve;
    double residual = 0.0;  // max moment-component mismatch
    int iterations = 0;
    std::string message;
};

/// Damped Newton inversion of the moment map in the scaled coordinates
/// (rho, alpha_j) = (r^2, r^-j a_j), seeded with rho = t0/(1-4|t2|^2),
/// alpha_j = (j+1) conj(t_{j+1}). Jacobian by central differences.
CurveFit fit_curve_from_moments(const HarmonicMoments& target, double tol = 1e-12,
                                int max_iter = 100);

/// Throwing wrapper: NewtonError carries the last residual on failure.
PolynomialCurve curve_from_moments(const HarmonicMoments& target, double tol = 1e-12,
                                   int max_iter = 100);

/// h(e^{2 pi i k / nodes}) for k = 0..nodes-1.
std::vector<cplx> boundary_polyline(const PolynomialCurve& curve, int nodes = 4096);

/// Winding-number point location with respect to a closed polyline.
bool point_in_polyline(std::span<const cplx> polyline, cplx z);
bool point_in_curve(const PolynomialCurve& curve, cplx z, int nodes = 4096);

/// Cell-centred rectangular raster; mask[iy*nx+ix] is 1 when the centre of
/// cell (ix, iy) is inside. Row-by-row signed crossing count of the same
/// boundary polyline the pointwise test uses.
struct RasterGrid {
    double x0 = 0.0, y0 = 0.0;  // lower-left corner of the box
    double dx = 1.0, dy = 1.0;
    int nx = 0, ny = 0;

    cplx cell_center(int ix, int iy) const {
        return {x0 + (ix + 0.5) * dx, y0 + (iy + 0.5) * dy};
    }
};
std::vector<std::uint8_t> interior_mask(std::span<const cplx> polyline, const RasterGrid& grid);

}

#endif
