#pragma once

#include <optional>
#include <variant>

#include "ulix/analytic.hpp"
#include "ulix/gaussian.hpp"
#include "ulix/numeric.hpp"

namespace ulix {

/// Chord-tangent arithmetic on y^2 = x(x-1)(x-lambda) over any field F with
/// +,-,*,/ and ==. The identity is the point at infinity.
template <class F>
struct AffinePoint {
    bool infinity = true;
    F x{}, y{};

    static AffinePoint infinity_point() { return {}; }
    static AffinePoint make(const F& x, const F& y) { return {false, x, y}; }

    friend bool operator==(const AffinePoint& a, const AffinePoint& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

template <class F>
F legendre_rhs(const F& x, const F& lambda) {
    return x * (x - F(1)) * (x - lambda);
}

template <class F>
bool on_curve_exact(const AffinePoint<F>& p, const F& lambda) {
    if (p.infinity) return true;
    return p.y * p.y == legendre_rhs(p.x, lambda);
}

template <class F>
AffinePoint<F> negate_point(const AffinePoint<F>& p) {
    if (p.infinity) return p;
    return AffinePoint<F>::make(p.x, F(0) - p.y);
}

template <class F>
AffinePoint<F> add_points(const AffinePoint<F>& p, const AffinePoint<F>& q, const F& lambda) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    F zero(0), one(1), two(2), three(3);
    if (p.x == q.x) {
        if (p.y == zero - q.y) return AffinePoint<F>::infinity_point();
        // doubling: y^2 = x^3 - (1+lambda) x^2 + lambda x
        F a2 = zero - (one + lambda);
        F num = three * p.x * p.x + two * a2 * p.x + lambda;
        F s = num / (two * p.y);
        F x3 = s * s - a2 - p.x - q.x;
        F y3 = s * (p.x - x3) - p.y;
        return AffinePoint<F>::make(x3, y3);
    }
    F s = (q.y - p.y) / (q.x - p.x);
    F a2 = zero - (one + lambda);
    F x3 = s * s - a2 - p.x - q.x;
    F y3 = s * (p.x - x3) - p.y;
    return AffinePoint<F>::make(x3, y3);
}

template <class F>
AffinePoint<F> scalar_mul_point(Int k, AffinePoint<F> p, const F& lambda) {
    if (k < 0) {
        k = -k;
        p = negate_point(p);
    }
    AffinePoint<F> acc = AffinePoint<F>::infinity_point();
    while (k > 0) {
        if ((k & 1) != 0) acc = add_points(acc, p, lambda);
        p = add_points(p, p, lambda);
        k >>= 1;
    }
    return acc;
}

/// Legendre parameter: exact rational or high-precision complex.
struct LegendreParam {
    std::variant<Rat, Complex> value;

    static LegendreParam exact(const Rat& r);
    static LegendreParam numeric(const Complex& c);

    bool is_exact() const { return std::holds_alternative<Rat>(value); }
    const Rat& rat() const { return std::get<Rat>(value); }
    Complex to_complex() const;

    friend bool operator==(const LegendreParam& a, const LegendreParam& b);
};

/// Projective point [X:Y:Z] on a Legendre curve, normalized to Z = 1 or
/// [0:1:0]; exact and numeric flavors mirror the parameter.
struct CurvePoint {
    std::variant<AffinePoint<Rat>, AffinePoint<Complex>> rep;
    LegendreParam parent;

    static CurvePoint infinity(const LegendreParam& parent);
    static CurvePoint exact(const Rat& x, const Rat& y, const LegendreParam& parent);
    static CurvePoint numeric(const Complex& x, const Complex& y, const LegendreParam& parent);

    bool is_exact() const { return std::holds_alternative<AffinePoint<Rat>>(rep); }
    bool is_infinity() const;
    const AffinePoint<Rat>& exact_rep() const { return std::get<AffinePoint<Rat>>(rep); }
    std::array<Complex, 3> coords() const;

    friend bool operator==(const CurvePoint& a, const CurvePoint& b);
};

/// J(lambda) = 2^8 (lambda^2-lambda+1)^3 / (lambda^2 (lambda-1)^2).
Rat j_invariant(const Rat& lambda);
Complex j_invariant(const Complex& lambda);
std::variant<Rat, Complex> j_invariant(const LegendreParam& lambda);

CurvePoint add(const CurvePoint& p, const CurvePoint& q, const PrecisionContext& ctx);
CurvePoint negate(const CurvePoint& p);
CurvePoint scalar_mul(const Int& k, const CurvePoint& p, const PrecisionContext& ctx);

/// Smallest n <= max_order with nP = O, if any. Exact points only.
std::optional<int> is_torsion(const CurvePoint& p, int max_order, const PrecisionContext& ctx);

} // namespace ulix
