#include "nmm/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "nmm/laurent.hpp"
#include "nmm/poly_roots.hpp"

namespace nmm {

namespace {

constexpr double critical_radius_margin = 1e-8;
constexpr double secant_ratio_floor = 1e-3;  // relative to r

int winding_of_samples(const std::vector<cplx>& values) {
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        cplx cur = values[i];
        cplx nxt = values[(i + 1) % values.size()];
        if (std::abs(cur) == 0.0 || std::abs(nxt) == 0.0)
            return std::numeric_limits<int>::min();
        total += std::arg(nxt / cur);
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

}  // namespace

PolynomialCurve normalized(PolynomialCurve curve, double tol) {
    while (curve.a.size() > 1 && std::abs(curve.a.back()) <= tol * curve.r)
        curve.a.pop_back();
    if (curve.a.size() == 1 && std::abs(curve.a[0]) == 0.0) curve.a.clear();
    return curve;
}

cplx eval_map(const PolynomialCurve& curve, cplx w) {
    if (w == cplx(0.0) && !curve.a.empty())
        throw std::domain_error("eval_map: w = 0 is a pole of h");
    cplx sum = curve.r * w;
    cplx winv = (curve.a.empty()) ? cplx(0.0) : 1.0 / w;
    cplx wp = 1.0;
    for (const auto& aj : curve.a) {
        sum += aj * wp;
        wp *= winv;
    }
    return sum;
}

cplx eval_map_conj(const PolynomialCurve& curve, cplx w) {
    if (w == cplx(0.0) && !curve.a.empty())
        throw std::domain_error("eval_map_conj: w = 0 is a pole");
    cplx sum = curve.r * w;
    cplx winv = (curve.a.empty()) ? cplx(0.0) : 1.0 / w;
    cplx wp = 1.0;
    for (const auto& aj : curve.a) {
        sum += std::conj(aj) * wp;
        wp *= winv;
    }
    return sum;
}

cplx eval_map_derivative(const PolynomialCurve& curve, cplx w) {
    if (w == cplx(0.0) && !curve.a.empty())
        throw std::domain_error("eval_map_derivative: w = 0 is a pole");
    cplx sum = curve.r;
    if (curve.a.size() > 1) {
        cplx winv = 1.0 / w;
        cplx wp = winv * winv;
        for (std::size_t j = 1; j < curve.a.size(); ++j) {
            sum -= static_cast<double>(j) * curve.a[j] * wp;
            wp *= winv;
        }
    }
    return sum;
}

double critical_radius(const PolynomialCurve& raw) {
    PolynomialCurve curve = normalized(raw);
    int d = curve.degree();
    if (curve.a.size() <= 1) return 0.0;  // circle, possibly shifted
    // Zeros of h' away from 0 are the roots of r w^{d+1} - sum_j j a_j w^{d-j}.
    std::vector<cplx> coeffs(d + 2, cplx(0.0));
    coeffs[d + 1] = curve.r;
    for (int j = 1; j <= d; ++j) coeffs[d - j] = -static_cast<double>(j) * curve.a[j];
    double radius = 0.0;
    for (const auto& root : poly_roots(coeffs))
        radius = std::max(radius, std::abs(root));
    return radius;
}

double outer_radius(const PolynomialCurve& curve, int samples) {
    double m = 0.0;
    for (int i = 0; i < samples; ++i)
        m = std::max(m, std::abs(eval_map(curve, std::polar(1.0, 2.0 * pi * i / samples))));
    return m;
}

CurveValidation validate_curve(const PolynomialCurve& raw, int samples) {
    PolynomialCurve curve = normalized(raw);
    int d = curve.degree();
    int min_samples = 8 * (d + 1);
    if (samples == 0) samples = std::max(256, min_samples);
    if (samples < min_samples)
        throw std::invalid_argument("validate_curve: need at least 8 (d+1) samples");

    CurveValidation report;
    if (curve.r <= 0.0) {
        report.failure = "r must be positive";
        return report;
    }

    report.critical_radius = critical_radius(curve);

    std::vector<cplx> h_vals(samples), tangent(samples);
    for (int i = 0; i < samples; ++i) {
        cplx w = std::polar(1.0, 2.0 * pi * i / samples);
        h_vals[i] = eval_map(curve, w);
        tangent[i] = cplx(0.0, 1.0) * w * eval_map_derivative(curve, w);
    }

    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        cplx wi = std::polar(1.0, 2.0 * pi * i / samples);
        for (int j = i + 1; j < samples; ++j) {
            cplx wj = std::polar(1.0, 2.0 * pi * j / samples);
            min_ratio = std::min(min_ratio, std::abs(h_vals[i] - h_vals[j]) / std::abs(wi - wj));
        }
    }
    report.min_secant_ratio = min_ratio;
    report.tangent_winding = winding_of_samples(tangent);
    report.encircles_origin = winding_of_samples(h_vals) == 1;

    if (report.critical_radius >= 1.0 - critical_radius_margin)
        report.failure = "critical radius reaches the unit circle";
    else if (report.tangent_winding != 1)
        report.failure = "tangent winding is not +1";
    else if (!(min_ratio > secant_ratio_floor * curve.r))
        report.failure = "secant collapse: curve is not simple at sampling resolution";
    else
        report.valid = true;
    return report;
}

namespace {

// Laurent expansions of the factors of h̄(1/w) h'(w) h(w)^{-k} around
// infinity. h(w)^{-k} = (r w)^{-k} (1+u)^{-k} with u = sum_j (a_j/r) w^{-j-1};
// the binomial tail is cut once it can no longer reach the w^{-1} residue.
struct SeriesFactors {
    LaurentSeries hbar_inv;  // h̄(1/w)
    LaurentSeries dh;        // h'(w)
    LaurentSeries u;         // (h - r w) / (r w)
};

SeriesFactors series_factors(const PolynomialCurve& curve) {
    SeriesFactors f;
    f.hbar_inv.set_coeff(-1, curve.r);
    for (std::size_t j = 0; j < curve.a.size(); ++j)
        f.hbar_inv.set_coeff(static_cast<int>(j), std::conj(curve.a[j]));
    f.dh.set_coeff(0, curve.r);
    for (std::size_t j = 1; j < curve.a.size(); ++j)
        f.dh.set_coeff(-static_cast<int>(j) - 1, -static_cast<double>(j) * curve.a[j]);
    for (std::size_t j = 0; j < curve.a.size(); ++j)
        f.u.set_coeff(-static_cast<int>(j) - 1, curve.a[j] / curve.r);
    return f;
}

cplx residue_moment(const SeriesFactors& f, double r, int k, int d) {
    // (1+u)^{-k} truncated at m terms; u^m only reaches powers <= -m, and the
    // other factors reach at most w^{d-k}, so m <= d+2-k suffices (plus slack).
    int m_max = std::max(0, d + 2 - k) + 2;
    LaurentSeries expansion = LaurentSeries::constant(1.0);
    LaurentSeries u_pow = LaurentSeries::constant(1.0);
    double binom = 1.0;
    for (int m = 1; m <= m_max; ++m) {
        u_pow = u_pow * f.u;
        binom *= -(static_cast<double>(k) + m - 1.0) / m;
        expansion += binom * u_pow;
    }
    LaurentSeries integrand = f.hbar_inv * f.dh * expansion;
    // Multiply by (r w)^{-k}: shift powers by -k, scale by r^{-k}.
    return integrand.coeff(k - 1) * std::pow(r, -k);
}

}  // namespace

HarmonicMoments moments_of_curve_series(const PolynomialCurve& raw, int k_max) {
    PolynomialCurve curve = normalized(raw);
    int d = curve.degree();
    SeriesFactors f = series_factors(curve);

    HarmonicMoments result;
    result.t0 = curve.r * curve.r;
    for (std::size_t j = 1; j < curve.a.size(); ++j)
        result.t0 -= static_cast<double>(j) * std::norm(curve.a[j]);
    result.t.assign(k_max, cplx(0.0));
    for (int k = 1; k <= k_max; ++k)
        result.t[k - 1] = residue_moment(f, curve.r, k, d) / static_cast<double>(k);
    return result;
}

MomentReport moments_of_curve_report(const PolynomialCurve& raw, int k_max,
                                     const MomentOptions& options) {
    PolynomialCurve curve = normalized(raw);
    CurveValidation validation = validate_curve(curve);
    if (!validation.valid)
        throw std::domain_error("moments_of_curve: invalid curve: " + validation.failure);
    if (!validation.encircles_origin && !options.shifted)
        throw std::domain_error(
            "moments_of_curve: origin not enclosed; set the shifted-moment flag");

    MomentReport report;
    report.t0_closed_form = curve.r * curve.r;
    for (std::size_t j = 1; j < curve.a.size(); ++j)
        report.t0_closed_form -= static_cast<double>(j) * std::norm(curve.a[j]);

    if (options.shifted) {
        // Moments are defined by the algebraic equation system here.
        report.moments = moments_of_curve_series(curve, k_max);
        report.t0_contour = report.moments.t0;
        return report;
    }

    double rho = options.contour_radius;
    std::vector<cplx> current;
    double t0_contour = 0.0;
    int nodes = options.min_nodes;
    for (;; nodes *= 2) {
        std::vector<cplx> estimate(k_max + 1, cplx(0.0));
        for (int i = 0; i < nodes; ++i) {
            cplx w = std::polar(rho, 2.0 * pi * i / nodes);
            cplx base = eval_map_conj(curve, 1.0 / w) * eval_map_derivative(curve, w) * w;
            cplx h_inv = 1.0 / eval_map(curve, w);
            cplx h_pow = 1.0;
            for (int k = 0; k <= k_max; ++k) {
                estimate[k] += base * h_pow;
                h_pow *= h_inv;
            }
        }
        for (auto& e : estimate) e /= static_cast<double>(nodes);

        if (!current.empty()) {
            double change = 0.0;
            for (int k = 0; k <= k_max; ++k)
                change = std::max(change, std::abs(estimate[k] - current[k]));
            current = std::move(estimate);
            if (change < options.node_doubling_tol || nodes * 2 > options.max_nodes) break;
        } else {
            current = std::move(estimate);
        }
    }
    report.nodes_used = nodes;
    t0_contour = current[0].real();
    report.t0_contour = t0_contour;

    if (std::abs(t0_contour - report.t0_closed_form) >
        options.t0_agreement_tol * std::max(1.0, std::abs(report.t0_closed_form)))
        throw std::runtime_error("moments_of_curve: contour and closed-form t0 disagree");

    report.moments.t0 = report.t0_closed_form;
    report.moments.t.assign(k_max, cplx(0.0));
    for (int k = 1; k <= k_max; ++k)
        report.moments.t[k - 1] = current[k] / static_cast<double>(k);
    return report;
}

HarmonicMoments moments_of_curve(const PolynomialCurve& curve, int k_max,
                                 const MomentOptions& options) {
    return moments_of_curve_report(curve, k_max, options).moments;
}

InteriorMoments interior_moments(const PolynomialCurve& raw, int k_max, int min_nodes) {
    PolynomialCurve curve = normalized(raw);
    CurveValidation validation = validate_curve(curve);
    if (!validation.valid)
        throw std::domain_error("interior_moments: invalid curve: " + validation.failure);

    int d = curve.degree();
    // The integrand is a finite Laurent polynomial of bandwidth
    // ~ k_max (d+1) + 2 (d+1); past that the trapezoid rule is exact.
    int needed = 2 * ((k_max + 2) * (d + 1) + 4);
    int nodes = std::max(min_nodes, needed);

    InteriorMoments result;
    result.v.assign(k_max, cplx(0.0));
    for (int i = 0; i < nodes; ++i) {
        cplx w = std::polar(1.0, 2.0 * pi * i / nodes);
        cplx h = eval_map(curve, w);
        cplx base = eval_map_conj(curve, 1.0 / w) * eval_map_derivative(curve, w) * w;
        cplx h_pow = h;
        for (int k = 1; k <= k_max; ++k) {
            result.v[k - 1] += base * h_pow;
            h_pow *= h;
        }
    }
    for (auto& vk : result.v) vk /= static_cast<double>(nodes);
    return result;
}

namespace {

struct ScaledCoordinates {
    double rho;
    std::vector<cplx> alpha;
};

PolynomialCurve curve_from_scaled(const ScaledCoordinates& s) {
    PolynomialCurve curve;
    curve.r = std::sqrt(s.rho);
    curve.a.resize(s.alpha.size());
    double rj = 1.0;
    for (std::size_t j = 0; j < s.alpha.size(); ++j) {
        curve.a[j] = rj * s.alpha[j];
        rj *= curve.r;
    }
    return curve;
}

Eigen::VectorXd moment_residual(const ScaledCoordinates& coords, const HarmonicMoments& target) {
    int d = target.degree();
    PolynomialCurve curve = curve_from_scaled(coords);
    HarmonicMoments m = moments_of_curve_series(curve, d + 1);
    Eigen::VectorXd f(2 * (d + 1) + 1);
    f(0) = m.t0 - target.t0;
    for (int k = 1; k <= d + 1; ++k) {
        cplx diff = m.t[k - 1] - target.t[k - 1];
        f(2 * k - 1) = diff.real();
        f(2 * k) = diff.imag();
    }
    return f;
}

ScaledCoordinates unpack(const Eigen::VectorXd& x, int d) {
    ScaledCoordinates s;
    s.rho = x(0);
    s.alpha.resize(d + 1);
    for (int j = 0; j <= d; ++j) s.alpha[j] = cplx(x(1 + 2 * j), x(2 + 2 * j));
    return s;
}

}  // namespace

CurveFit fit_curve_from_moments(const HarmonicMoments& target, double tol, int max_iter) {
    CurveFit fit;
    if (!(target.t0 > 0.0)) {
        fit.message = "t0 must be positive";
        return fit;
    }
    int d = target.degree();
    if (d < 0) {  // circle: t list empty
        fit.converged = true;
        fit.curve = PolynomialCurve{std::sqrt(target.t0), {}};
        fit.residual = 0.0;
        return fit;
    }
    cplx t2 = target.tk(2);
    if (!(std::abs(t2) < 0.5)) {
        fit.message = "|t2| >= 1/2 is outside the invertible moment range";
        return fit;
    }

    int dim = 2 * (d + 1) + 1;
    Eigen::VectorXd x(dim);
    x(0) = target.t0 / (1.0 - 4.0 * std::norm(t2));
    for (int j = 0; j <= d; ++j) {
        cplx alpha = static_cast<double>(j + 1) * std::conj(target.t[j]);
        x(1 + 2 * j) = alpha.real();
        x(2 + 2 * j) = alpha.imag();
    }

    Eigen::VectorXd f = moment_residual(unpack(x, d), target);
    double err = f.lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < max_iter; ++iter) {
        fit.iterations = iter;
        if (err <= tol) break;

        Eigen::MatrixXd jac(dim, dim);
        for (int i = 0; i < dim; ++i) {
            double step = 1e-6 * std::max(1.0, std::abs(x(i)));
            Eigen::VectorXd xp = x, xm = x;
            xp(i) += step;
            xm(i) -= step;
            if (i == 0 && xm(0) <= 0.0) xm(0) = 0.5 * x(0);
            jac.col(i) = (moment_residual(unpack(xp, d), target) -
                          moment_residual(unpack(xm, d), target)) /
                         (xp(i) - xm(i));
        }

        Eigen::VectorXd direction = jac.partialPivLu().solve(-f);
        if (!direction.allFinite()) {
            fit.message = "singular Jacobian";
            fit.residual = err;
            return fit;
        }

        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            Eigen::VectorXd trial = x + lambda * direction;
            if (trial(0) <= 0.0) continue;
            Eigen::VectorXd ft = moment_residual(unpack(trial, d), target);
            double et = ft.lpNorm<Eigen::Infinity>();
            if (et < err) {
                x = trial;
                f = ft;
                err = et;
                improved = true;
                break;
            }
        }
        if (!improved) {
            fit.message = "residual stalled";
            fit.residual = err;
            return fit;
        }
    }

    fit.residual = err;
    if (err > tol) {
        fit.message = "no convergence within max_iter";
        return fit;
    }

    fit.curve = curve_from_scaled(unpack(x, d));
    CurveValidation validation = validate_curve(fit.curve);
    if (!validation.valid) {
        fit.message = "converged point fails curve validation (moments outside the "
                      "admissible range): " + validation.failure;
        return fit;
    }
    fit.converged = true;
    return fit;
}

PolynomialCurve curve_from_moments(const HarmonicMoments& target, double tol, int max_iter) {
    CurveFit fit = fit_curve_from_moments(target, tol, max_iter);
    if (!fit.converged)
        throw NewtonError("curve_from_moments: " + fit.message, fit.residual);
    return fit.curve;
}

std::vector<cplx> boundary_polyline(const PolynomialCurve& curve, int nodes) {
    std::vector<cplx> poly(nodes);
    for (int i = 0; i < nodes; ++i)
        poly[i] = eval_map(curve, std::polar(1.0, 2.0 * pi * i / nodes));
    return poly;
}

bool point_in_polyline(std::span<const cplx> polyline, cplx z) {
    double total = 0.0;
    for (std::size_t i = 0; i < polyline.size(); ++i) {
        cplx a = polyline[i] - z;
        cplx b = polyline[(i + 1) % polyline.size()] - z;
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return true;  // on the boundary
        total += std::arg(b / a);
    }
    return std::lround(total / (2.0 * pi)) != 0;
}

bool point_in_curve(const PolynomialCurve& curve, cplx z, int nodes) {
    return point_in_polyline(boundary_polyline(curve, nodes), z);
}

std::vector<std::uint8_t> interior_mask(std::span<const cplx> polyline, const RasterGrid& grid) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
    struct Crossing {
        double x;
        int direction;
    };
    std::vector<Crossing> crossings;
    for (int iy = 0; iy < grid.ny; ++iy) {
        double y = grid.y0 + (iy + 0.5) * grid.dy;
        crossings.clear();
        for (std::size_t i = 0; i < polyline.size(); ++i) {
            cplx a = polyline[i];
            cplx b = polyline[(i + 1) % polyline.size()];
            double ya = a.imag(), yb = b.imag();
            bool up = ya <= y && yb > y;
            bool down = yb <= y && ya > y;
            if (!up && !down) continue;
            double t = (y - ya) / (yb - ya);
            crossings.push_back({a.real() + t * (b.real() - a.real()), up ? 1 : -1});
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
        std::size_t next = 0;
        int winding = 0;
        for (int ix = 0; ix < grid.nx; ++ix) {
            double x = grid.x0 + (ix + 0.5) * grid.dx;
            while (next < crossings.size() && crossings[next].x <= x)
                winding += crossings[next++].direction;
            mask[static_cast<std::size_t>(iy) * grid.nx + ix] = (winding != 0) ? 1 : 0;
        }
    }
    return mask;
}

}
