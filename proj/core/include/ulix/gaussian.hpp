#pragma once

#include "ulix/numeric.hpp"

namespace ulix {

/// Gaussian integer a + b i.
struct GaussInt {
    Int re{0}, im{0};

    bool is_zero() const { return re == 0 && im == 0; }
    Int norm() const { return re * re + im * im; }
    GaussInt conj() const { return {re, -im}; }

    friend GaussInt operator+(const GaussInt& a, const GaussInt& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussInt operator-(const GaussInt& a, const GaussInt& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussInt operator*(const GaussInt& a, const GaussInt& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussInt& a, const GaussInt& b) {
        return a.re == b.re && a.im == b.im;
    }
};

/// Nearest-quotient division: a = q*b + r with N(r) <= N(b)/2.
GaussInt gauss_divide_round(const GaussInt& a, const GaussInt& b);
GaussInt gauss_gcd(GaussInt a, GaussInt b);

/// Element of Q(i), kept in lowest terms with a Gaussian-integer numerator
/// and a positive rational integer denominator.
struct GaussRat {
    GaussInt num{};
    Int den{1};

    GaussRat() = default;
    GaussRat(const Rat& re, const Rat& im);
    explicit GaussRat(const Rat& re) : GaussRat(re, Rat(0)) {}
    GaussRat(int v) : GaussRat(Rat(v), Rat(0)) {}
    GaussRat(GaussInt n, Int d);

    static GaussRat zero() { return {}; }
    static GaussRat one() { return GaussRat(Rat(1)); }

    bool is_zero() const { return num.is_zero(); }
    bool is_real() const { return num.im == 0; }
    Rat real_part() const { return Rat(num.re, den); }
    Rat imag_part() const { return Rat(num.im, den); }
    GaussRat conj() const { return GaussRat(num.conj(), den); }
    Rat norm() const { return Rat(num.norm(), den * den); }

    Complex to_complex() const;

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b);
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b);
    friend GaussRat operator-(const GaussRat& a);
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b);
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b);
    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.num == b.num && a.den == b.den;
    }

private:
    void normalize();
};

} // namespace ulix
