#ifndef NMM_LAURENT_HPP
#define NMM_LAURENT_HPP

#include <vector>

#include "nmm/util.hpp"

namespace nmm {

/// Finite Laurent polynomial f(w) = sum_{k} c_k w^k on an annulus around
/// |w| = 1. Arithmetic keeps the exact support; clip() truncates to a window
/// and reports the discarded coefficient mass so callers can grow their
/// window when it matters.
class LaurentSeries {
public:
    LaurentSeries() = default;
    LaurentSeries(int lowest_power, std::vector<cplx> coeffs);

    static LaurentSeries monomial(cplx c, int power);
    static LaurentSeries constant(cplx c) { return monomial(c, 0); }

    int lowest() const { return lo_; }
    int highest() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    bool empty() const { return c_.empty(); }

    cplx coeff(int power) const;
    void set_coeff(int power, cplx value);

    LaurentSeries& operator+=(const LaurentSeries& other);
    LaurentSeries& operator-=(const LaurentSeries& other);
    LaurentSeries& operator*=(cplx scalar);

    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
    friend LaurentSeries operator*(LaurentSeries a, cplx s) { return a *= s; }
    friend LaurentSeries operator*(cplx s, LaurentSeries a) { return a *= s; }
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

    LaurentSeries pow(int exponent) const;

    /// w * d/dw, exact on coefficients: c_k -> k c_k.
    LaurentSeries w_d_dw() const;

    /// Projections onto positive, constant, and negative powers.
    LaurentSeries part_plus() const;
    LaurentSeries part_zero() const;
    LaurentSeries part_minus() const;

    /// Mirror f(w) -> conj(f(1/conj(w))): c_k -> conj(c_k) at -k.
    LaurentSeries conj_mirror() const;

    /// Truncate to [k_min, k_max]; returns the summed magnitude of the
    /// discarded coefficients.
    double clip(int k_min, int k_max);

    double max_abs() const;
    cplx eval(cplx w) const;

    void trim(double threshold = 0.0);

private:
    int lo_ = 0;
    std::vector<cplx> c_;
};

}

#endif
