#include "ulix/gaussian.hpp"

namespace ulix {

namespace {

Int div_round(const Int& a, const Int& b) {
    // nearest integer to a/b, ties toward +infinity
    Int q = (2 * a + b) / (2 * b);
    // C++ integer division truncates; redo with floor semantics for negatives
    Int num = 2 * a + b, den = 2 * b;
    q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) q -= 1;
    return q;
}

} // namespace

GaussInt gauss_divide_round(const GaussInt& a, const GaussInt& b) {
    if (b.is_zero()) throw ValidationError("Gaussian division by zero");
    GaussInt num = a * b.conj();
    Int n = b.norm();
    return {div_round(num.re, n), div_round(num.im, n)};
}

GaussInt gauss_gcd(GaussInt a, GaussInt b) {
    while (!b.is_zero()) {
        GaussInt q = gauss_divide_round(a, b);
        GaussInt r = a - q * b;
        a = b;
        b = r;
    }
    // canonical associate: nonzero, re > 0, and im >= 0 when re == 0 handled
    // by rotating through units
    if (a.is_zero()) return a;
    for (int k = 0; k < 4; ++k) {
        if (a.re > 0 && a.im >= 0) break;
        a = a * GaussInt{0, 1};
    }
    return a;
}

GaussRat::GaussRat(const Rat& re, const Rat& im) {
    Int d = lcm(Int(denominator(re)), Int(denominator(im)));
    num.re = Int(numerator(re)) * (d / Int(denominator(re)));
    num.im = Int(numerator(im)) * (d / Int(denominator(im)));
    den = d;
    normalize();
}

GaussRat::GaussRat(GaussInt n, Int d) : num(n), den(d) {
    if (d == 0) throw ValidationError("GaussRat with zero denominator");
    normalize();
}

void GaussRat::normalize() {
    if (num.is_zero()) {
        den = 1;
        return;
    }
    if (den < 0) {
        den = -den;
        num.re = -num.re;
        num.im = -num.im;
    }
    Int g = gcd(gcd(abs(num.re), abs(num.im)), den);
    if (g > 1) {
        num.re /= g;
        num.im /= g;
        den /= g;
    }
}

Complex GaussRat::to_complex() const {
    return Complex(to_real(Rat(num.re, den)), to_real(Rat(num.im, den)));
}

GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    GaussInt n{a.num.re * b.den + b.num.re * a.den, a.num.im * b.den + b.num.im * a.den};
    return GaussRat(n, a.den * b.den);
}

GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    GaussInt n{a.num.re * b.den - b.num.re * a.den, a.num.im * b.den - b.num.im * a.den};
    return GaussRat(n, a.den * b.den);
}

GaussRat operator-(const GaussRat& a) {
    return GaussRat(GaussInt{-a.num.re, -a.num.im}, a.den);
}

GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return GaussRat(a.num * b.num, a.den * b.den);
}

GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    if (b.is_zero()) throw ValidationError("Gaussian division by zero");
    GaussInt n = a.num * b.num.conj();
    Int nb = b.num.norm();
    // (a.num / a.den) * (b.den * conj(b.num) / N(b.num))
    GaussInt full{n.re * b.den, n.im * b.den};
    return GaussRat(full, a.den * nb);
}

} // namespace ulix
