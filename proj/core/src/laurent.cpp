#include "nmm/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nmm {

LaurentSeries::LaurentSeries(int lowest_power, std::vector<cplx> coeffs)
    : lo_(lowest_power), c_(std::move(coeffs)) {}

LaurentSeries LaurentSeries::monomial(cplx c, int power) {
    return LaurentSeries(power, {c});
}

cplx LaurentSeries::coeff(int power) const {
    int idx = power - lo_;
    if (idx < 0 || idx >= static_cast<int>(c_.size())) return {};
    return c_[idx];
}

void LaurentSeries::set_coeff(int power, cplx value) {
    if (c_.empty()) {
        lo_ = power;
        c_.assign(1, value);
        return;
    }
    if (power < lo_) {
        c_.insert(c_.begin(), lo_ - power, cplx(0.0));
        lo_ = power;
    } else if (power > highest()) {
        c_.resize(power - lo_ + 1, cplx(0.0));
    }
    c_[power - lo_] = value;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& other) {
    for (int k = other.lo_; k <= other.highest(); ++k)
        set_coeff(k, coeff(k) + other.coeff(k));
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& other) {
    for (int k = other.lo_; k <= other.highest(); ++k)
        set_coeff(k, coeff(k) - other.coeff(k));
    return *this;
}

LaurentSeries& LaurentSeries::operator*=(cplx scalar) {
    for (auto& c : c_) c *= scalar;
    return *this;
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> out(a.c_.size() + b.c_.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == cplx(0.0)) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            out[i + j] += a.c_[i] * b.c_[j];
    }
    return LaurentSeries(a.lo_ + b.lo_, std::move(out));
}

LaurentSeries LaurentSeries::pow(int exponent) const {
    if (exponent < 0) throw std::invalid_argument("LaurentSeries::pow: negative exponent");
    LaurentSeries result = constant(1.0);
    for (int i = 0; i < exponent; ++i) result = result * (*this);
    return result;
}

LaurentSeries LaurentSeries::w_d_dw() const {
    LaurentSeries out = *this;
    for (int k = lo_; k <= highest(); ++k)
        out.c_[k - lo_] *= static_cast<double>(k);
    return out;
}

LaurentSeries LaurentSeries::part_plus() const {
    LaurentSeries out;
    for (int k = std::max(1, lo_); k <= highest(); ++k) out.set_coeff(k, coeff(k));
    return out;
}

LaurentSeries LaurentSeries::part_zero() const {
    return constant(coeff(0));
}

LaurentSeries LaurentSeries::part_minus() const {
    LaurentSeries out;
    for (int k = lo_; k <= std::min(-1, highest()); ++k) out.set_coeff(k, coeff(k));
    return out;
}

LaurentSeries LaurentSeries::conj_mirror() const {
    LaurentSeries out;
    for (int k = lo_; k <= highest(); ++k)
        out.set_coeff(-k, std::conj(coeff(k)));
    return out;
}

double LaurentSeries::clip(int k_min, int k_max) {
    double discarded = 0.0;
    LaurentSeries kept;
    for (int k = lo_; k <= highest(); ++k) {
        if (k < k_min || k > k_max)
            discarded += std::abs(coeff(k));
        else
            kept.set_coeff(k, coeff(k));
    }
    *this = kept;
    return discarded;
}

double LaurentSeries::max_abs() const {
    double m = 0.0;
    for (const auto& c : c_) m = std::max(m, std::abs(c));
    return m;
}

cplx LaurentSeries::eval(cplx w) const {
    cplx sum = 0.0;
    cplx wk = std::pow(w, lo_);
    for (const auto& c : c_) {
        sum += c * wk;
        wk *= w;
    }
    return sum;
}

void LaurentSeries::trim(double threshold) {
    std::size_t front = 0;
    while (front < c_.size() && std::abs(c_[front]) <= threshold) ++front;
    std::size_t back = c_.size();
    while (back > front && std::abs(c_[back - 1]) <= threshold) --back;
    if (front == back) {
        c_.clear();
        lo_ = 0;
        return;
    }
    c_ = std::vector<cplx>(c_.begin() + front, c_.begin() + back);
    lo_ += static_cast<int>(front);
}

}
