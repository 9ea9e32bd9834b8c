#include "nmm/schwarz.hpp"

#include <algorithm>
#include <cmath>

#include "nmm/quadrature.hpp"

namespace nmm {

namespace {

bool newton_invert(const PolynomialCurve& curve, cplx z, cplx w0, double tol, cplx& out) {
    cplx w = w0;
    for (int it = 0; it < 64; ++it) {
        if (std::abs(w) < 1e-12) return false;
        cplx f = eval_map(curve, w) - z;
        if (std::abs(f) <= tol) {
            out = w;
            return true;
        }
        cplx df = eval_map_derivative(curve, w);
        if (std::abs(df) < 1e-300) return false;
        w -= f / df;
    }
    cplx f = eval_map(curve, w) - z;
    if (std::abs(f) <= tol) {
        out = w;
        return true;
    }
    return false;
}

}  // namespace

cplx invert_map(const PolynomialCurve& curve, cplx z) {
    double radius = critical_radius(curve);
    double tol = 1e-13 * (1.0 + std::abs(z));
    cplx w;
    if (newton_invert(curve, z, z / curve.r, tol, w) && std::abs(w) > radius) return w;
    for (int k = 0; k < 32; ++k) {
        double angle = 2.0 * pi * k / 32.0 + 0.21;
        if (newton_invert(curve, z, std::polar(1.5, angle), tol, w) && std::abs(w) > radius)
            return w;
    }
    throw AnnulusError("invert_map: no preimage outside the critical radius; "
                       "z lies inside the analyticity annulus");
}

SchwarzEvaluation schwarz_eval(const PolynomialCurve& curve, cplx z) {
    cplx w = invert_map(curve, z);
    return {eval_map_conj(curve, 1.0 / w), w};
}

cplx schwarz_reflection(const PolynomialCurve& curve, cplx z) {
    return std::conj(schwarz_eval(curve, z).value);
}

LaurentTail laurent_tail(const PolynomialCurve& curve, int k_max, double radius_factor) {
    if (radius_factor <= 1.0)
        throw std::invalid_argument("laurent_tail: radius_factor must exceed 1");
    int d = normalized(curve).degree();
    double rho = radius_factor * outer_radius(curve);

    // Coefficients c_j of S for j in [-k_max-1, d]; c_j = mean S(z) z^{-j}.
    int j_lo = -k_max - 1, j_hi = d;
    std::vector<cplx> current;
    int nodes = 512;
    for (;; nodes *= 2) {
        std::vector<cplx> estimate(j_hi - j_lo + 1, cplx(0.0));
        for (int i = 0; i < nodes; ++i) {
            cplx z = std::polar(rho, 2.0 * pi * i / nodes);
            cplx s = schwarz_eval(curve, z).value;  // AnnulusError propagates
            cplx zp = std::pow(z, -j_lo);
            cplx zinv = 1.0 / z;
            for (int j = j_lo; j <= j_hi; ++j) {
                estimate[j - j_lo] += s * zp;
                zp *= zinv;
            }
        }
        for (auto& e : estimate) e /= static_cast<double>(nodes);
        if (!current.empty()) {
            double change = 0.0;
            for (std::size_t i = 0; i < estimate.size(); ++i)
                change = std::max(change, std::abs(estimate[i] - current[i]));
            current = std::move(estimate);
            if (change < 1e-12 || nodes >= (1 << 15)) break;
        } else {
            current = std::move(estimate);
        }
    }

    LaurentTail tail;
    tail.nodes_used = nodes;
    tail.t0 = current[-1 - j_lo].real();
    tail.t.resize(d + 1);
    for (int k = 1; k <= d + 1; ++k)
        tail.t[k - 1] = current[(k - 1) - j_lo] / static_cast<double>(k);
    tail.v.resize(k_max);
    for (int k = 1; k <= k_max; ++k) tail.v[k - 1] = current[(-k - 1) - j_lo];
    return tail;
}

cplx ellipse_schwarz(double b1, double b2, cplx z) {
    if (!(b1 > b2 && b2 > 0.0))
        throw std::invalid_argument("ellipse_schwarz: need b1 > b2 > 0");
    double c2 = b1 * b1 - b2 * b2;
    double c = std::sqrt(c2);
    if (z.imag() == 0.0 && std::abs(z.real()) < c)
        throw BranchCutError("ellipse_schwarz: z on the focal segment");
    cplx root = std::sqrt(1.0 - c2 / (z * z));
    // Principal branch: continuous off [-c, c] and equal to +b2/b1 at z = b1,
    // which fixes S(b1) = b1.
    return ((b1 * b1 + b2 * b2) * z - 2.0 * b1 * b2 * z * root) / c2;
}

cplx ellipse_schwarz_branch_difference(double b1, double b2, cplx z) {
    double c2 = b1 * b1 - b2 * b2;
    return 4.0 * b1 * b2 * z * std::sqrt(1.0 - c2 / (z * z)) / c2;
}

double ellipse_zero_density(double b1, double b2, double y) {
    double c2 = b1 * b1 - b2 * b2;
    double under = c2 - y * y;
    if (under <= 4.0 * 2.22e-16 * c2) return 0.0;  // support edge, roundoff-safe
    return 2.0 * std::sqrt(under) / (c2 * pi);
}

double ellipse_zero_cdf(double b1, double b2, double y) {
    double c = std::sqrt(b1 * b1 - b2 * b2);
    if (y <= -c) return 0.0;
    if (y >= c) return 1.0;
    double c2 = c * c;
    return 0.5 + (y * std::sqrt(c2 - y * y) + c2 * std::asin(y / c)) / (pi * c2);
}

double hypotrochoid_branch_end(double r, double a) {
    return std::cbrt(27.0 / 4.0 * a * r * r);
}

cplx hypotrochoid_schwarz(double r, double a, cplx z) {
    if (!(a > 0.0 && 2.0 * a < r))
        throw std::invalid_argument("hypotrochoid_schwarz: need 0 < 2a < r");
    cplx zeta = z / (3.0 * r);
    cplx y = 4.0 * r * zeta * zeta * zeta / a;
    if (y.imag() == 0.0 && y.real() >= 0.0 && y.real() <= 1.0)
        throw BranchCutError("hypotrochoid_schwarz: z on a branch cut");
    cplx s = std::sqrt(1.0 - y);
    cplx third(1.0 / 3.0);
    cplx omega = std::pow(1.0 - (2.0 / y) * (1.0 + s), third) +
                 std::pow(1.0 - (2.0 / y) * (1.0 - s), third);
    return ((a * a - r * r) * omega * omega + (2.0 * a * a + r * r) * omega + a * a +
            2.0 * r * r) *
           zeta * zeta / a;
}

double hypotrochoid_zero_density(double r, double a, double s) {
    double end = hypotrochoid_branch_end(r, a);
    if (s <= 0.0 || s >= end) return 0.0;
    double zeta = s / (3.0 * r);
    double y = 4.0 * r * zeta * zeta * zeta / a;
    y = std::min(y, 1.0);
    double root = std::sqrt(1.0 - y);
    double wp = std::cbrt(2.0 / y * (1.0 + root) - 1.0);
    double wm = std::cbrt(2.0 / y * (1.0 - root) - 1.0);
    double rho = ((wp * wp - wm * wm) * (r * r - a * a) - (wp - wm) * (r * r + 2.0 * a * a)) *
                 std::sqrt(3.0) / (2.0 * pi * (r * r - 2.0 * a * a));
    return rho * zeta * zeta / a;
}

std::vector<cplx> polyline_tangents(std::span<const cplx> cut) {
    std::size_t n = cut.size();
    std::vector<cplx> tangents(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx diff;
        if (i == 0)
            diff = cut[1] - cut[0];
        else if (i + 1 == n)
            diff = cut[n - 1] - cut[n - 2];
        else
            diff = cut[i + 1] - cut[i - 1];
        double len = std::abs(diff);
        tangents[i] = (len > 0.0) ? diff / len : cplx(1.0);
    }
    return tangents;
}

double branch_cut_check(std::span<const cplx> delta_s, std::span<const cplx> cut) {
    if (delta_s.size() != cut.size() || cut.size() < 2)
        throw std::invalid_argument("branch_cut_check: mismatched or short samples");
    auto tangents = polyline_tangents(cut);
    double violation = 0.0;
    for (std::size_t i = 0; i < cut.size(); ++i)
        violation = std::max(violation, std::abs((delta_s[i] * tangents[i]).real()));
    return violation;
}

std::vector<cplx> sample_jump_across(const std::function<cplx(cplx)>& f,
                                     std::span<const cplx> cut, double eta) {
    auto tangents = polyline_tangents(cut);
    std::vector<cplx> jump(cut.size());
    for (std::size_t i = 0; i < cut.size(); ++i) {
        cplx normal = cplx(0.0, 1.0) * tangents[i];
        jump[i] = f(cut[i] + eta * normal) - f(cut[i] - eta * normal);
    }
    return jump;
}

ZeroDensityLaw ZeroDensityLaw::ellipse(double b1, double b2, double x) {
    if (!(b1 > b2 && b2 > 0.0)) throw std::invalid_argument("ZeroDensityLaw: need b1 > b2 > 0");
    return {Family::gaussian_ellipse, b1, b2, x};
}

ZeroDensityLaw ZeroDensityLaw::hypotrochoid(double r, double a, double x) {
    if (!(a > 0.0 && 2.0 * a < r)) throw std::invalid_argument("ZeroDensityLaw: need 0 < 2a < r");
    return {Family::cubic_hypotrochoid, r, a, x};
}

double ZeroDensityLaw::support_lo() const {
    if (family == Family::gaussian_ellipse)
        return -std::sqrt(p1 * p1 - p2 * p2);
    return 0.0;
}

double ZeroDensityLaw::support_hi() const {
    if (family == Family::gaussian_ellipse)
        return std::sqrt(p1 * p1 - p2 * p2);
    return hypotrochoid_branch_end(p1, p2);
}

double ZeroDensityLaw::density(double s) const {
    if (family == Family::gaussian_ellipse) return ellipse_zero_density(p1, p2, s);
    return hypotrochoid_zero_density(p1, p2, s);
}

double ZeroDensityLaw::cdf(double s) const {
    double lo = support_lo(), hi = support_hi();
    if (s <= lo) return 0.0;
    if (s >= hi) return 1.0;
    if (family == Family::gaussian_ellipse) return ellipse_zero_cdf(p1, p2, s);
    double mass = adaptive_simpson([this](double u) { return density(u); }, lo, s, 1e-11);
    double total = adaptive_simpson([this](double u) { return density(u); }, lo, hi, 1e-11);
    return mass / total;
}

}
