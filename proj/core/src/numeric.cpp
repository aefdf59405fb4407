#include "ulix/numeric.hpp"

namespace ulix {

Real PrecisionContext::pow10(long e) const {
    activate();
    Real ten(10);
    if (e >= 0) return pow(ten, static_cast<unsigned long>(e));
    return 1 / pow(ten, static_cast<unsigned long>(-e));
}

Real pi(const PrecisionContext& ctx) {
    ctx.activate();
    return 4 * atan(Real(1));
}

Int round_to_int(const Real& x) {
    Real r = round(x);
    return r.convert_to<Int>();
}

Int floor_to_int(const Real& x) {
    Real r = floor(x);
    return r.convert_to<Int>();
}

Real to_real(const Rat& r) {
    return Real(r);
}

Real to_real(const Int& n) {
    return Real(n);
}

Complex to_complex(const Rat& r) {
    return Complex(Real(r), Real(0));
}

Real centered_frac(const Real& x) {
    return x - round(x);
}

bool reconstruct_rational(const Real& x, const Int& hmax, const Real& tol, Rat& out) {
    // Continued-fraction expansion of x, stopping at the first convergent
    // within tol or once partial-quotient heights pass hmax.
    Int p0 = 1, q0 = 0;           // p_{-1}/q_{-1}
    Int p1 = floor_to_int(x), q1 = 1;
    Real frac = x - Real(p1);
    for (int iter = 0; iter < 200; ++iter) {
        if (abs(q1) > hmax || abs(p1) > hmax) return false;
        Rat cand(p1, q1);
        if (abs(x - to_real(cand)) < tol) {
            out = cand;
            return true;
        }
        if (abs(frac) < tol) return false; // exhausted expansion, no match
        Real inv = 1 / frac;
        Int a = floor_to_int(inv);
        frac = inv - Real(a);
        Int p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    return false;
}

std::string format_real(const Real& x, unsigned digits) {
    return x.str(digits);
}

std::string format_complex(const Complex& z, unsigned digits) {
    std::string s = z.real().str(digits);
    Real im = z.imag();
    if (im >= 0) s += "+";
    s += im.str(digits) + "i";
    return s;
}

} // namespace ulix
