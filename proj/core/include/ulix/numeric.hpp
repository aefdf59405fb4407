#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/complex_adaptor.hpp>

#include "ulix/errors.hpp"

namespace ulix {

namespace mp = boost::multiprecision;

using Int = mp::mpz_int;
using Rat = mp::mpq_rational;
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using Complex = mp::number<mp::complex_adaptor<mp::mpfr_float_backend<0>>, mp::et_off>;

/// Precision budget for all analytic computations. Values are computed at
/// certify precision; accept/reject decisions are phrased in working digits.
struct PrecisionContext {
    unsigned working_digits;
    unsigned certify_digits;

    PrecisionContext(unsigned working, unsigned certify)
        : working_digits(working), certify_digits(certify) {
        if (working < 30)
            throw ValidationError("working_digits must be >= 30");
        if (certify < 2 * working)
            throw ValidationError("certify_digits must be >= 2*working_digits");
    }

    static PrecisionContext make(unsigned working) {
        return PrecisionContext(working, 2 * working);
    }

    // mpfr default precision is process-global in this Boost version; every
    // public entry point calls activate() so values are always built at
    // certify precision. The complex type shares the mpfr backend default.
    void activate() const {
        if (Real::default_precision() < certify_digits)
            Real::default_precision(certify_digits);
    }

    Real pow10(long e) const;          // 10^e at certify precision
    Real working_tol(int margin = 10) const { return pow10(-(long(working_digits) - margin)); }
    Real accept_tol() const { return pow10(-(long(working_digits) - 15)); }
    Real reject_tol() const { return pow10(-long(working_digits) / 4); }
    Real certify_tol(int margin = 20) const { return pow10(-(long(certify_digits) - margin)); }
};

Real pi(const PrecisionContext& ctx);

inline Complex cplx(const Real& re, const Real& im) { return Complex(re, im); }
inline Complex cplx(const Real& re) { return Complex(re, Real(0)); }
inline Complex imag_unit() { return Complex(Real(0), Real(1)); }

inline Real abs2(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

Int round_to_int(const Real& x);
Int floor_to_int(const Real& x);

Real to_real(const Rat& r);
Real to_real(const Int& n);
Complex to_complex(const Rat& r);

/// Nearest-integer remainder: x - round(x), in [-1/2, 1/2].
Real centered_frac(const Real& x);

/// Continued-fraction rational reconstruction. Returns the first convergent
/// p/q of x with |x - p/q| < tol, restricted to |p|,|q| <= hmax. Empty when
/// no convergent within the height cap approximates x that well.
bool reconstruct_rational(const Real& x, const Int& hmax, const Real& tol, Rat& out);

std::string format_real(const Real& x, unsigned digits);
std::string format_complex(const Complex& z, unsigned digits);

} // namespace ulix
