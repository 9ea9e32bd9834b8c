#ifndef NMM_DD_HPP
#define NMM_DD_HPP

#include <cmath>

namespace nmm {

/// Double-double scalar: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
/// giving roughly 106 significand bits. Only the operations the extended
/// Cholesky accumulation needs are provided.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double h) : hi(h), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}

inline DD operator+(DD a, DD b) {
    using namespace dd_detail;
    DD s = two_sum(a.hi, b.hi);
    DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    using namespace dd_detail;
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    using namespace dd_detail;
    double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    double q3 = r.hi / b.hi;
    DD q = quick_two_sum(q1, q2);
    return q + DD(q3);
}

/// Newton-polished square root; requires a > 0.
inline DD dd_sqrt(DD a) {
    double y = std::sqrt(a.hi);
    DD yd(y);
    DD r = a - yd * yd;
    return yd + r / (yd + yd);
}

/// Complex double-double, just enough for Hermitian Cholesky.
struct DDComplex {
    DD re, im;

    DDComplex() = default;
    DDComplex(DD r, DD i) : re(r), im(i) {}
    DDComplex(double r, double i = 0.0) : re(r), im(i) {}
};

inline DDComplex operator+(DDComplex a, DDComplex b) { return {a.re + b.re, a.im + b.im}; }
inline DDComplex operator-(DDComplex a, DDComplex b) { return {a.re - b.re, a.im - b.im}; }
inline DDComplex operator*(DDComplex a, DDComplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline DDComplex conj(DDComplex a) { return {a.re, -a.im}; }
inline DDComplex operator/(DDComplex a, DD s) { return {a.re / s, a.im / s}; }
inline DD norm_sq(DDComplex a) { return a.re * a.re + a.im * a.im; }

}

#endif
