#pragma once

#include "ulix/curves.hpp"
#include "ulix/gaussian.hpp"
#include "ulix/numeric.hpp"

namespace ulix {

struct HeightValue {
    Real value;       // natural-log units, >= 0
    Real error_bound; // >= 0
};

/// log max(|p|, |q|) for x = p/q in lowest terms.
HeightValue weil_height_rational(const Rat& x);

/// H1 of an exact rational: max(|p|, |q|) as a real. The complex overload is
/// the +infinity sentinel for anything not exactly rational.
Real h1_height(const Rat& x);
Real h1_height(const Complex& x);

struct NeronTateOptions {
    int max_doublings = 8;          // <= 10
    long coordinate_bit_cap = 1L << 23;
};

/// Projective Weil height of an exact point (divisor 3(O) normalization).
Real projective_height(const AffinePoint<Rat>& p, const PrecisionContext& ctx);
Real projective_height(const AffinePoint<GaussRat>& p, const PrecisionContext& ctx);

/// Canonical height 4^{-n} h(2^n P) with a Zimmer-style tail bound
/// c_lambda / 4^n, c_lambda = 12 max(1, h(lambda)).
HeightValue neron_tate(const CurvePoint& p, const PrecisionContext& ctx,
                       const NeronTateOptions& opts = {});

/// Same limit over Q(i); used by the complex-multiplication checks.
HeightValue neron_tate_gaussian(const AffinePoint<GaussRat>& p, const Rat& lambda,
                                const PrecisionContext& ctx,
                                const NeronTateOptions& opts = {});

struct HeightIdentityResult {
    Real residual; // |h2(phi P) - deg phi * h1(P)|
    Real budget;   // combined error bounds
};

/// Isogeny height identity: residual and budget for
/// |hhat(phi_image) - phi_degree * hhat(P)|.
HeightIdentityResult check_isogeny_height_identity(const CurvePoint& p, const Int& phi_degree,
                                                   const CurvePoint& phi_image,
                                                   const PrecisionContext& ctx,
                                                   const NeronTateOptions& opts = {});

} // namespace ulix
