#ifndef NMM_SCHWARZ_HPP
#define NMM_SCHWARZ_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nmm/curve.hpp"

namespace nmm {

struct AnnulusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BranchCutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchwarzEvaluation {
    cplx value;           // S(z)
    cplx branch_witness;  // w = h^{-1}(z) with |w| > critical radius
};

/// Inverts h at z by Newton from w0 = z/r, falling back to restarts on
/// |w| = 1.5. Throws AnnulusError when no preimage with |w| > R is found.
cplx invert_map(const PolynomialCurve& curve, cplx z);

/// S(z) = h̄(1/h^{-1}(z)) on the analyticity annulus and its exterior.
SchwarzEvaluation schwarz_eval(const PolynomialCurve& curve, cplx z);

/// Schwarz reflection conj(S(z)).
cplx schwarz_reflection(const PolynomialCurve& curve, cplx z);

struct LaurentTail {
    double t0 = 0.0;
    std::vector<cplx> t;  // t[k-1] ~ t_k, k = 1..d+1
    std::vector<cplx> v;  // v[k-1] ~ v_k, k = 1..k_max
    int nodes_used = 0;
};

/// Laurent data of S around infinity, extracted by trapezoid contour
/// integration on |z| = radius_factor * max_{|w|=1} |h(w)|.
LaurentTail laurent_tail(const PolynomialCurve& curve, int k_max, double radius_factor = 2.5);

/// Closed-form Schwarz function of the axis-aligned ellipse with half-axes
/// b1 > b2 > 0; branch fixed by S(b1) = b1, cut on the focal segment.
cplx ellipse_schwarz(double b1, double b2, cplx z);

/// Branch jump of the ellipse Schwarz function (difference of the two sheets),
/// defined off the foci.
cplx ellipse_schwarz_branch_difference(double b1, double b2, cplx z);

/// Zero-density law on the focal segment: 2 sqrt(c^2 - y^2) / (pi c^2).
double ellipse_zero_density(double b1, double b2, double y);
double ellipse_zero_cdf(double b1, double b2, double y);

/// Hypotrochoid h(w) = r w + a w^{-2} with 0 < 2a < r.
cplx hypotrochoid_schwarz(double r, double a, cplx z);

/// Endpoint of each density branch: |z| = (27/4 a r^2)^{1/3}.
double hypotrochoid_branch_end(double r, double a);

/// Line density of zeros along one branch of {z : z^3 in (0, 27/4 a r^2)},
/// in the arclength coordinate s = |z|.
double hypotrochoid_zero_density(double r, double a, double s);

/// Max violation of Re(deltaS * tangent) along a candidate cut polyline.
/// deltaS[i] is the sampled branch jump at cut[i].
double branch_cut_check(std::span<const cplx> delta_s, std::span<const cplx> cut);

/// Samples the two-sided jump of `f` across a polyline: f(z + i eta tau) -
/// f(z - i eta tau), with tau the local unit tangent.
std::vector<cplx> sample_jump_across(const std::function<cplx(cplx)>& f,
                                     std::span<const cplx> cut, double eta = 1e-7);

/// Unit tangents of a polyline by centred differences.
std::vector<cplx> polyline_tangents(std::span<const cplx> cut);

/// Density-law descriptor used by the zero statistics.
struct ZeroDensityLaw {
    enum class Family { gaussian_ellipse, cubic_hypotrochoid };
    Family family = Family::gaussian_ellipse;
    // ellipse: p1 = b1, p2 = b2; hypotrochoid: p1 = r, p2 = a.
    double p1 = 1.0;
    double p2 = 0.5;
    double fill_fraction = 1.0;

    static ZeroDensityLaw ellipse(double b1, double b2, double x);
    static ZeroDensityLaw hypotrochoid(double r, double a, double x);

    /// 1D support coordinate range [lo, hi].
    double support_lo() const;
    double support_hi() const;
    double density(double s) const;
    /// CDF by adaptive quadrature, normalised over the support.
    double cdf(double s) const;
};

}

#endif
