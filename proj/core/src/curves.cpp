#include "ulix/curves.hpp"

namespace ulix {

LegendreParam LegendreParam::exact(const Rat& r) {
    if (r == 0 || r == 1) throw DegenerateLambda("lambda must avoid {0,1}");
    return {r};
}

LegendreParam LegendreParam::numeric(const Complex& c) {
    if (c == Complex(Real(0), Real(0)) || c == Complex(Real(1), Real(0)))
        throw DegenerateLambda("lambda must avoid {0,1}");
    return {c};
}

Complex LegendreParam::to_complex() const {
    if (is_exact()) return ulix::to_complex(rat());
    return std::get<Complex>(value);
}

bool operator==(const LegendreParam& a, const LegendreParam& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (a.is_exact()) return a.rat() == b.rat();
    return std::get<Complex>(a.value) == std::get<Complex>(b.value);
}

CurvePoint CurvePoint::infinity(const LegendreParam& parent) {
    if (parent.is_exact()) return {AffinePoint<Rat>::infinity_point(), parent};
    return {AffinePoint<Complex>::infinity_point(), parent};
}

CurvePoint CurvePoint::exact(const Rat& x, const Rat& y, const LegendreParam& parent) {
    if (!parent.is_exact()) throw ParentMismatch("exact point on a numeric parameter");
    AffinePoint<Rat> p = AffinePoint<Rat>::make(x, y);
    if (!on_curve_exact(p, parent.rat()))
        throw NotOnCurve("exact point fails the Legendre equation");
    return {p, parent};
}

CurvePoint CurvePoint::numeric(const Complex& x, const Complex& y, const LegendreParam& parent) {
    return {AffinePoint<Complex>::make(x, y), parent};
}

bool CurvePoint::is_infinity() const {
    if (is_exact()) return exact_rep().infinity;
    return std::get<AffinePoint<Complex>>(rep).infinity;
}

std::array<Complex, 3> CurvePoint::coords() const {
    Complex zero(Real(0), Real(0)), one(Real(1), Real(0));
    if (is_infinity()) return {zero, one, zero};
    if (is_exact()) {
        const auto& p = exact_rep();
        return {ulix::to_complex(p.x), ulix::to_complex(p.y), one};
    }
    const auto& p = std::get<AffinePoint<Complex>>(rep);
    return {p.x, p.y, one};
}

bool operator==(const CurvePoint& a, const CurvePoint& b) {
    if (a.is_exact() != b.is_exact()) return false;
    if (!(a.parent == b.parent)) return false;
    if (a.is_exact()) return a.exact_rep() == b.exact_rep();
    return std::get<AffinePoint<Complex>>(a.rep) == std::get<AffinePoint<Complex>>(b.rep);
}

Rat j_invariant(const Rat& lambda) {
    if (lambda == 0 || lambda == 1) throw DegenerateLambda("j_invariant at lambda in {0,1}");
    Rat n = lambda * lambda - lambda + 1;
    Rat d = lambda * lambda * (lambda - 1) * (lambda - 1);
    return Rat(256) * n * n * n / d;
}

Complex j_invariant(const Complex& lambda) {
    Complex n = lambda * lambda - lambda + 1;
    Complex d = lambda * lambda * (lambda - 1) * (lambda - 1);
    return 256 * n * n * n / d;
}

std::variant<Rat, Complex> j_invariant(const LegendreParam& lambda) {
    if (lambda.is_exact()) return j_invariant(lambda.rat());
    return j_invariant(std::get<Complex>(lambda.value));
}

CurvePoint add(const CurvePoint& p, const CurvePoint& q, const PrecisionContext& ctx) {
    ctx.activate();
    if (!(p.parent == q.parent)) throw ParentMismatch("points on different curves");
    if (p.is_exact() != q.is_exact()) throw ParentMismatch("mixed exact/numeric points");
    if (p.is_exact()) {
        auto r = add_points(p.exact_rep(), q.exact_rep(), p.parent.rat());
        return {r, p.parent};
    }
    auto r = add_points(std::get<AffinePoint<Complex>>(p.rep),
                        std::get<AffinePoint<Complex>>(q.rep), p.parent.to_complex());
    return {r, p.parent};
}

CurvePoint negate(const CurvePoint& p) {
    if (p.is_exact()) return {negate_point(p.exact_rep()), p.parent};
    return {negate_point(std::get<AffinePoint<Complex>>(p.rep)), p.parent};
}

CurvePoint scalar_mul(const Int& k, const CurvePoint& p, const PrecisionContext& ctx) {
    ctx.activate();
    if (p.is_exact()) return {scalar_mul_point(k, p.exact_rep(), p.parent.rat()), p.parent};
    return {scalar_mul_point(k, std::get<AffinePoint<Complex>>(p.rep), p.parent.to_complex()),
            p.parent};
}

std::optional<int> is_torsion(const CurvePoint& p, int max_order, const PrecisionContext& ctx) {
    ctx.activate();
    if (max_order > 64) throw ValidationError("is_torsion capped at order 64");
    if (!p.is_exact()) throw ValidationError("is_torsion requires an exact point");
    if (p.is_infinity()) return 1;
    const Rat& lambda = p.parent.rat();
    AffinePoint<Rat> acc = p.exact_rep();
    for (int n = 2; n <= max_order; ++n) {
        acc = add_points(acc, p.exact_rep(), lambda);
        if (acc.infinity) return n;
    }
    return std::nullopt;
}

// explicit instantiations used by the CM height path
template struct AffinePoint<GaussRat>;
template AffinePoint<GaussRat> add_points<GaussRat>(const AffinePoint<GaussRat>&,
                                                    const AffinePoint<GaussRat>&,
                                                    const GaussRat&);
template AffinePoint<GaussRat> scalar_mul_point<GaussRat>(Int, AffinePoint<GaussRat>,
                                                          const GaussRat&);

} // namespace ulix
