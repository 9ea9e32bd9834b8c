#include "nmm/toda.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nmm {

std::pair<LaurentSeries, LaurentSeries> laurent_of_curve(const PolynomialCurve& curve) {
    LaurentSeries z;
    z.set_coeff(1, curve.r);
    for (std::size_t j = 0; j < curve.a.size(); ++j)
        z.set_coeff(-static_cast<int>(j), curve.a[j]);
    z.trim();
    return {z, z.conj_mirror()};
}

LaurentSeries toda_hamiltonian(const LaurentSeries& z, int k) {
    if (k < 1) throw std::invalid_argument("toda_hamiltonian: k must be positive");
    LaurentSeries zk = z.pow(k);
    return zk.part_plus() + 0.5 * zk.part_zero();
}

LaurentSeries toda_hamiltonian_tilde(const LaurentSeries& z_tilde, int k) {
    if (k < 1) throw std::invalid_argument("toda_hamiltonian_tilde: k must be positive");
    LaurentSeries zk = z_tilde.pow(k);
    return zk.part_minus() + 0.5 * zk.part_zero();
}

LaurentSeries SeriesStencil::d_dt0() const {
    LaurentSeries diff = plus - minus;
    diff *= 1.0 / (2.0 * eps);
    return diff;
}

LaurentSeries poisson_bracket(const SeriesStencil& f, const SeriesStencil& g) {
    if (f.eps != g.eps || f.eps <= 0.0)
        throw std::invalid_argument("poisson_bracket: stencils must share a positive eps");
    return f.base.w_d_dw() * g.d_dt0() - f.d_dt0() * g.base.w_d_dw();
}

namespace {

PolynomialCurve solve(const HarmonicMoments& moments, double tol, double& worst_residual) {
    CurveFit fit = fit_curve_from_moments(moments, tol, 200);
    if (!fit.converged)
        throw NewtonError("flow stencil inversion failed: " + fit.message, fit.residual);
    worst_residual = std::max(worst_residual, fit.residual);
    return fit.curve;
}

HarmonicMoments shift_t0(HarmonicMoments m, double delta) {
    m.t0 += delta;
    return m;
}

HarmonicMoments shift_tk(HarmonicMoments m, int k, cplx delta) {
    m.t[k - 1] += delta;
    return m;
}

struct FlowSeries {
    LaurentSeries rz, rzt, rcz, rczt, rstring;
};

// Window contract: intermediates are clipped to [-window, window]; any
// discarded mass above 1e-13 grows the window and retries.
int default_window(int d) { return 4 * (d + 1); }

LaurentSeries clipped(LaurentSeries s, int window, bool& overflow) {
    if (s.clip(-window, window) > 1e-13) overflow = true;
    return s;
}

FlowSeries flow_residual_series(const FlowStencil& st, int window, bool& overflow) {
    int k = st.flow_index;
    auto [z0, zt0] = laurent_of_curve(st.base);
    auto [zm, ztm] = laurent_of_curve(st.t0_minus);
    auto [zp, ztp] = laurent_of_curve(st.t0_plus);

    SeriesStencil sz{zm, z0, zp, st.eps};
    SeriesStencil szt{ztm, zt0, ztp, st.eps};
    SeriesStencil sM{toda_hamiltonian(zm, k), toda_hamiltonian(z0, k),
                     toda_hamiltonian(zp, k), st.eps};
    SeriesStencil sMt{toda_hamiltonian_tilde(ztm, k), toda_hamiltonian_tilde(zt0, k),
                      toda_hamiltonian_tilde(ztp, k), st.eps};

    auto [z_re_m, zt_re_m] = laurent_of_curve(st.tk_re_minus);
    auto [z_re_p, zt_re_p] = laurent_of_curve(st.tk_re_plus);
    auto [z_im_m, zt_im_m] = laurent_of_curve(st.tk_im_minus);
    auto [z_im_p, zt_im_p] = laurent_of_curve(st.tk_im_plus);

    double inv2e = 1.0 / (2.0 * st.eps);
    LaurentSeries dre_z = (z_re_p - z_re_m) * cplx(inv2e);
    LaurentSeries dim_z = (z_im_p - z_im_m) * cplx(inv2e);
    LaurentSeries dre_zt = (zt_re_p - zt_re_m) * cplx(inv2e);
    LaurentSeries dim_zt = (zt_im_p - zt_im_m) * cplx(inv2e);

    // Wirtinger split of the moment derivative.
    cplx half(0.5), half_i(0.0, 0.5);
    LaurentSeries dz_dtk = half * dre_z - half_i * dim_z;
    LaurentSeries dz_dtkbar = half * dre_z + half_i * dim_z;
    LaurentSeries dzt_dtk = half * dre_zt - half_i * dim_zt;
    LaurentSeries dzt_dtkbar = half * dre_zt + half_i * dim_zt;

    FlowSeries out;
    out.rz = clipped(dz_dtk - poisson_bracket(sM, sz), window, overflow);
    out.rzt = clipped(dzt_dtk - poisson_bracket(sM, szt), window, overflow);
    out.rcz = clipped(dz_dtkbar - poisson_bracket(sz, sMt), window, overflow);
    out.rczt = clipped(dzt_dtkbar - poisson_bracket(szt, sMt), window, overflow);
    out.rstring =
        clipped(poisson_bracket(sz, szt) - LaurentSeries::constant(1.0), window, overflow);
    return out;
}

}  // namespace

FlowStencil make_flow_stencil(const HarmonicMoments& moments, int k, double eps,
                              double newton_tol) {
    int d = moments.degree();
    if (k < 1 || k > d + 1)
        throw std::invalid_argument("make_flow_stencil: flow index out of range");
    if (eps <= 0.0) throw std::invalid_argument("make_flow_stencil: eps must be positive");

    FlowStencil st;
    st.base_moments = moments;
    st.flow_index = k;
    st.eps = eps;
    st.base = solve(moments, newton_tol, st.max_newton_residual);
    st.t0_minus = solve(shift_t0(moments, -eps), newton_tol, st.max_newton_residual);
    st.t0_plus = solve(shift_t0(moments, eps), newton_tol, st.max_newton_residual);
    st.tk_re_minus = solve(shift_tk(moments, k, -eps), newton_tol, st.max_newton_residual);
    st.tk_re_plus = solve(shift_tk(moments, k, eps), newton_tol, st.max_newton_residual);
    st.tk_im_minus =
        solve(shift_tk(moments, k, cplx(0.0, -eps)), newton_tol, st.max_newton_residual);
    st.tk_im_plus =
        solve(shift_tk(moments, k, cplx(0.0, eps)), newton_tol, st.max_newton_residual);
    return st;
}

LaurentSeries string_residual_series(const HarmonicMoments& moments, double eps) {
    double worst = 0.0;
    PolynomialCurve base = solve(moments, 1e-12, worst);
    PolynomialCurve lo = solve(shift_t0(moments, -eps), 1e-12, worst);
    PolynomialCurve hi = solve(shift_t0(moments, eps), 1e-12, worst);
    auto [z0, zt0] = laurent_of_curve(base);
    auto [zm, ztm] = laurent_of_curve(lo);
    auto [zp, ztp] = laurent_of_curve(hi);
    SeriesStencil sz{zm, z0, zp, eps};
    SeriesStencil szt{ztm, zt0, ztp, eps};
    return poisson_bracket(sz, szt) - LaurentSeries::constant(1.0);
}

double verify_string_equation(const HarmonicMoments& moments, double eps) {
    LaurentSeries coarse = string_residual_series(moments, eps);
    LaurentSeries fine = string_residual_series(moments, 0.5 * eps);
    LaurentSeries extrapolated = (4.0 / 3.0) * fine - (1.0 / 3.0) * coarse;
    return extrapolated.max_abs();
}

FlowReport flow_residuals_raw(const HarmonicMoments& moments, int k, double eps) {
    int window = default_window(moments.degree());
    for (;; window *= 2) {
        bool overflow = false;
        FlowStencil stencil = make_flow_stencil(moments, k, eps);
        FlowSeries r = flow_residual_series(stencil, window, overflow);
        if (overflow) {
            if (window > (1 << 12))
                throw std::runtime_error("flow_residuals_raw: window overflow");
            continue;
        }
        FlowReport report;
        report.flow_index = k;
        report.eps = eps;
        report.residual_z = r.rz.max_abs();
        report.residual_ztilde = r.rzt.max_abs();
        report.residual_conj_z = r.rcz.max_abs();
        report.residual_conj_ztilde = r.rczt.max_abs();
        report.string_residual = r.rstring.max_abs();
        return report;
    }
}

FlowReport verify_flow(const HarmonicMoments& moments, int k, double eps) {
    if (eps <= 0.0) eps = 1e-4 * std::max(1.0, std::abs(moments.tk(k)));
    int window = default_window(moments.degree());

    for (;; window *= 2) {
        bool overflow = false;
        FlowStencil coarse = make_flow_stencil(moments, k, eps);
        FlowStencil fine = make_flow_stencil(moments, k, 0.5 * eps);
        FlowSeries rc = flow_residual_series(coarse, window, overflow);
        FlowSeries rf = flow_residual_series(fine, window, overflow);
        if (overflow) {
            if (window > (1 << 12)) throw std::runtime_error("verify_flow: window overflow");
            continue;
        }
        auto richardson = [](const LaurentSeries& f, const LaurentSeries& c) {
            return ((4.0 / 3.0) * f - (1.0 / 3.0) * c).max_abs();
        };
        FlowReport report;
        report.flow_index = k;
        report.eps = eps;
        report.residual_z = richardson(rf.rz, rc.rz);
        report.residual_ztilde = richardson(rf.rzt, rc.rzt);
        report.residual_conj_z = richardson(rf.rcz, rc.rcz);
        report.residual_conj_ztilde = richardson(rf.rczt, rc.rczt);
        report.string_residual = richardson(rf.rstring, rc.rstring);
        return report;
    }
}

}
