#pragma once

#include <array>
#include <optional>
#include <utility>

#include "ulix/numeric.hpp"
#include "ulix/qseries.hpp"

namespace ulix {

/// Element of SL2(Z) with exact integer entries.
struct Unimodular {
    Int a{1}, b{0}, c{0}, d{1};

    static Unimodular identity() { return {}; }
    static Unimodular S() { return {0, -1, 1, 0}; }
    static Unimodular T(const Int& n = 1) { return {1, n, 0, 1}; }

    Int det() const { return a * d - b * c; }
    Unimodular inverse() const { return {d, -b, -c, a}; }
    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

    friend Unimodular operator*(const Unimodular& l, const Unimodular& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend bool operator==(const Unimodular& l, const Unimodular& r) {
        return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
    }
};

Complex moebius(const Unimodular& g, const Complex& tau);

enum class DomainTag { StandardSL2Z, SixFoldB, Unreduced };

/// A point of the upper half-plane together with its reduction witness:
/// tau = coset * tau_std with tau_std in the standard SL2(Z) domain and
/// coset one of the six Gamma(2)-coset representatives.
struct PeriodPoint {
    Complex tau;
    DomainTag tag = DomainTag::Unreduced;
    Unimodular coset = Unimodular::identity();

    static PeriodPoint unreduced(const Complex& t) {
        return {t, DomainTag::Unreduced, Unimodular::identity()};
    }
};

struct HalfPeriodValues {
    Complex e1, e2, e3;
    Complex g2() const { return -4 * (e1 * e2 + e1 * e3 + e2 * e3); }
    Complex g3() const { return 4 * e1 * e2 * e3; }
};

struct EllipticLogarithm {
    Complex z;
    PeriodPoint tau;
};

/// The six coset representatives of SL2(Z)/Gamma(2): I, S, T, ST, TS, STS.
const std::array<Unimodular, 6>& gamma2_coset_reps();

/// Reduce tau_raw into the standard fundamental domain. Returns the reduced
/// point and g in SL2(Z) with g*tau_raw equal to it (exact integer matrix).
std::pair<PeriodPoint, Unimodular> reduce_to_fundamental(const Complex& tau_raw,
                                                         const PrecisionContext& ctx);

/// Values of the Weierstrass p-function at the half-periods of Z + Z tau.
HalfPeriodValues half_periods(const PeriodPoint& tau, const PrecisionContext& ctx);

/// Weierstrass p and p' on the lattice Z + Z tau.
std::pair<Complex, Complex> weierstrass_p(const Complex& z, const PeriodPoint& tau,
                                          const PrecisionContext& ctx);

/// The Legendre lambda function L(tau) = (e2-e1)/(e3-e1).
Complex legendre_lambda(const PeriodPoint& tau, const PrecisionContext& ctx);

struct PeriodOptions {
    Real exclusion_radius = Real("1e-6");
    Real magnitude_cap = Real("1e6");
};

/// Inverse of L: tau in the six-fold domain B with L(tau) = lambda, computed
/// through the AGM and reduced with a recorded coset shift.
PeriodPoint period_from_lambda(const Complex& lambda, const PrecisionContext& ctx,
                               const PeriodOptions& opts = {});

/// [xi : eta : 1] on the Legendre curve with parameter L(tau), or [0:1:0]
/// for lattice points.
std::array<Complex, 3> parametrize_point(const EllipticLogarithm& zl,
                                         const PrecisionContext& ctx);

/// Inverse of parametrize_point: the elliptic logarithm in the fundamental
/// parallelogram L_tau.
EllipticLogarithm elliptic_log(const std::array<Complex, 3>& point, const Complex& lambda,
                               const PeriodPoint& tau, const PrecisionContext& ctx);

/// Truncated q-expansion of j at tau (no reduction applied; requires
/// Im(tau) >= 0.1).
JSeriesValue j_from_q_series(const PeriodPoint& tau, std::size_t terms,
                             const PrecisionContext& ctx);

/// j via g2, g3 from half-period values; second route used for consistency
/// checks against the q-expansion.
Complex j_from_half_periods(const HalfPeriodValues& hp);

/// j(tau) evaluated by reducing to the standard domain first and choosing
/// the series length from the precision budget.
Complex j_of_tau(const Complex& tau, const PrecisionContext& ctx);

/// Representative of z modulo Z + Z tau with coordinates x, y in [0,1).
Complex reduce_to_parallelogram(const Complex& z, const Complex& tau);

/// Carlson symmetric integral R_F; the elliptic integral kernel used to seed
/// elliptic logarithms.
Complex carlson_rf(Complex x, Complex y, Complex z, const PrecisionContext& ctx);

} // namespace ulix
