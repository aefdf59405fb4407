#include "ulix/heights.hpp"

namespace ulix {

namespace {

long bit_size(const Int& n) {
    if (n == 0) return 1;
    return long(msb(abs(n))) + 1;
}

Real log_int(const Int& n, const PrecisionContext& ctx) {
    ctx.activate();
    return log(to_real(abs(n)));
}

Real c_lambda(const Rat& lambda, const PrecisionContext& ctx) {
    Real h = weil_height_rational(lambda).value;
    return 12 * std::max(Real(1), h);
}

} // namespace

HeightValue weil_height_rational(const Rat& x) {
    Int p = abs(Int(numerator(x)));
    Int q = Int(denominator(x));
    Int m = p > q ? p : q;
    Real v = m == 0 ? Real(0) : log(to_real(m));
    return {v, Real(0)};
}

Real h1_height(const Rat& x) {
    Int p = abs(Int(numerator(x)));
    Int q = Int(denominator(x));
    return to_real(p > q ? p : q);
}

Real h1_height(const Complex&) {
    return Real(std::numeric_limits<double>::infinity());
}

Real projective_height(const AffinePoint<Rat>& p, const PrecisionContext& ctx) {
    ctx.activate();
    if (p.infinity) return Real(0);
    // [x : y : 1] -> coprime integers via the lcm of denominators
    Int dx = Int(denominator(p.x)), dy = Int(denominator(p.y));
    Int d = lcm(dx, dy);
    Int X = Int(numerator(p.x)) * (d / dx);
    Int Y = Int(numerator(p.y)) * (d / dy);
    Int Z = d;
    Int g = gcd(gcd(abs(X), abs(Y)), abs(Z));
    X /= g; Y /= g; Z /= g;
    Int m = abs(X);
    if (abs(Y) > m) m = abs(Y);
    if (abs(Z) > m) m = abs(Z);
    return log_int(m, ctx);
}

Real projective_height(const AffinePoint<GaussRat>& p, const PrecisionContext& ctx) {
    ctx.activate();
    if (p.infinity) return Real(0);
    // clear denominators to Z[i], divide by the Gaussian gcd, then average
    // log max |sigma(.)| over the two conjugate embeddings (equal values).
    Int d = lcm(p.x.den, p.y.den);
    GaussInt X{p.x.num.re * (d / p.x.den), p.x.num.im * (d / p.x.den)};
    GaussInt Y{p.y.num.re * (d / p.y.den), p.y.num.im * (d / p.y.den)};
    GaussInt Z{d, 0};
    GaussInt g = gauss_gcd(gauss_gcd(X, Y), Z);
    X = gauss_divide_round(X, g);
    Y = gauss_divide_round(Y, g);
    Z = gauss_divide_round(Z, g);
    Int m = X.norm();
    if (Y.norm() > m) m = Y.norm();
    if (Z.norm() > m) m = Z.norm();
    return log_int(m, ctx) / 2; // log sqrt(norm)
}

namespace {

template <class F>
HeightValue neron_tate_impl(AffinePoint<F> p, const F& lambda_f, const Rat& lambda_rat,
                            const PrecisionContext& ctx, const NeronTateOptions& opts,
                            long (*bits)(const AffinePoint<F>&)) {
    if (opts.max_doublings < 1 || opts.max_doublings > 10)
        throw ValidationError("max_doublings must lie in [1,10]");
    int n = 0;
    for (; n < opts.max_doublings; ++n) {
        AffinePoint<F> next = add_points(p, p, lambda_f);
        if (next.infinity) {
            // torsion: the canonical height vanishes exactly
            return {Real(0), Real(0)};
        }
        if (bits(next) > opts.coordinate_bit_cap)
            throw CoordinateBlowup("doubling exceeded the coordinate bit cap");
        p = next;
    }
    Real h = projective_height(p, ctx);
    Real scale = pow(Real(4), n);
    Real tail = c_lambda(lambda_rat, ctx) / scale;
    Real value = h / scale;
    if (value < 0) value = Real(0);
    return {value, tail};
}

long bits_rat(const AffinePoint<Rat>& p) {
    if (p.infinity) return 1;
    long b = bit_size(Int(numerator(p.x)));
    b = std::max(b, bit_size(Int(denominator(p.x))));
    b = std::max(b, bit_size(Int(numerator(p.y))));
    b = std::max(b, bit_size(Int(denominator(p.y))));
    return b;
}

long bits_gauss(const AffinePoint<GaussRat>& p) {
    if (p.infinity) return 1;
    long b = bit_size(p.x.num.re);
    b = std::max(b, bit_size(p.x.num.im));
    b = std::max(b, bit_size(p.x.den));
    b = std::max(b, bit_size(p.y.num.re));
    b = std::max(b, bit_size(p.y.num.im));
    b = std::max(b, bit_size(p.y.den));
    return b;
}

} // namespace

HeightValue neron_tate(const CurvePoint& p, const PrecisionContext& ctx,
                       const NeronTateOptions& opts) {
    ctx.activate();
    if (!p.is_exact())
        throw ValidationError("neron_tate requires an exact rational point");
    if (p.is_infinity()) return {Real(0), Real(0)};
    const Rat& lambda = p.parent.rat();
    return neron_tate_impl<Rat>(p.exact_rep(), lambda, lambda, ctx, opts, &bits_rat);
}

HeightValue neron_tate_gaussian(const AffinePoint<GaussRat>& p, const Rat& lambda,
                                const PrecisionContext& ctx, const NeronTateOptions& opts) {
    ctx.activate();
    if (p.infinity) return {Real(0), Real(0)};
    return neron_tate_impl<GaussRat>(p, GaussRat(lambda), lambda, ctx, opts, &bits_gauss);
}

HeightIdentityResult check_isogeny_height_identity(const CurvePoint& p, const Int& phi_degree,
                                                   const CurvePoint& phi_image,
                                                   const PrecisionContext& ctx,
                                                   const NeronTateOptions& opts) {
    HeightValue h1 = neron_tate(p, ctx, opts);
    HeightValue h2 = neron_tate(phi_image, ctx, opts);
    Real deg = to_real(phi_degree);
    Real residual = abs(h2.value - deg * h1.value);
    Real budget = h2.error_bound + deg * h1.error_bound;
    return {residual, budget};
}

} // namespace ulix
