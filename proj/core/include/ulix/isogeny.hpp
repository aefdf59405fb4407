#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "ulix/analytic.hpp"
#include "ulix/numeric.hpp"

namespace ulix {

/// psi(N) = N prod_{p | N} (1 + 1/p): the degree of Phi_N in each variable.
unsigned psi_degree(unsigned n);

/// Symmetric modular polynomial Phi_N with exact integer coefficients,
/// stored densely: coeff(i, j) multiplies X^i Y^j.
struct ModularPolynomial {
    unsigned level = 1;
    unsigned degree = 1;
    std::vector<std::vector<Int>> coeffs; // (degree+1) x (degree+1)

    const Int& coeff(unsigned i, unsigned j) const { return coeffs[i][j]; }
    bool is_symmetric() const;
    Rat eval(const Rat& x, const Rat& y) const;
    Complex eval(const Complex& x, const Complex& y, const PrecisionContext& ctx) const;
};

/// Compute Phi_N by interpolating prod_M (X - j(M tau)) over the primitive
/// upper-triangular matrices at q-series sample points. Escalates precision
/// internally until every coefficient rounds to an integer with residue
/// below 0.25. Memoized per level.
const ModularPolynomial& modular_polynomial(unsigned n, const PrecisionContext& ctx);

/// Single-shot interpolation at a fixed digit budget; throws
/// PrecisionExhausted when rounding residues are too large.
ModularPolynomial compute_modular_polynomial(unsigned n, unsigned digits);

/// Text persistence: header "PHI N <N> DEG <d>", then one nonzero monomial
/// per line "eX eY coefficient", sorted by (eX desc, eY desc).
void write_modular_polynomial(const ModularPolynomial& phi, std::ostream& os);
ModularPolynomial parse_modular_polynomial(std::istream& is);

/// Exact test Phi_N(j1, j2) = 0 over the rationals.
bool is_cyclic_isogenous(const Rat& j1, const Rat& j2, unsigned n, const PrecisionContext& ctx);

struct IsogenyConfig {
    Int lemma_entry_constant = Int(1000000); // the 'c' in |A|..|D| <= c N^10
    unsigned n_cap = 7;
};

/// Primitive integer matrix witnessing tau1 = M tau2 with
/// alpha = C tau2 + D and N = det M.
struct IsogenyWitness {
    Int A, B, C, D;
    Int N;
    Complex alpha;

    /// Multiplier transporting logarithms on Z+Z tau2 into Z+Z tau1
    /// (the dual direction, N / alpha = A - C tau1).
    Complex transport_multiplier(const Complex& tau1) const;
};

/// Search for the minimal-determinant primitive witness with det <= n_max,
/// by integer-relation reduction on (tau1 tau2, tau1, tau2, 1) followed by
/// confirmation of the bounded candidates.
std::optional<IsogenyWitness> find_isogeny_matrix(const PeriodPoint& tau1,
                                                  const PeriodPoint& tau2, const Int& n_max,
                                                  const PrecisionContext& ctx,
                                                  const IsogenyConfig& cfg = {});

/// Entry-bounded variant in the tau2 = M tau1 orientation used by the
/// Z(T) membership test: all |entries| <= t_bound.
std::optional<IsogenyWitness> find_isogeny_matrix_entry_bounded(const PeriodPoint& tau1,
                                                                const PeriodPoint& tau2,
                                                                const Int& t_bound,
                                                                const PrecisionContext& ctx);

/// alpha-action transport of a logarithm on E_{L(tau2)} to E_{L(tau1)}.
EllipticLogarithm map_point_analytic(const EllipticLogarithm& w, const IsogenyWitness& witness,
                                     const PeriodPoint& tau1, const PrecisionContext& ctx);

/// Quadratic CM data: a tau^2 + b tau + c = 0, discriminant Delta < 0,
/// rho0 = (Delta + sqrt(Delta))/2.
struct CMWitness {
    Int a, b, c;
    Int Delta;
    Complex rho0;
};

std::optional<CMWitness> detect_cm(const PeriodPoint& tau, const Int& coeff_bound,
                                   const PrecisionContext& ctx);

/// Number of reduced primitive binary quadratic forms of discriminant Delta.
unsigned class_number(const Int& Delta);

/// Degree of rho0 as an isogeny: (Delta^2 - Delta) / 4.
Int endomorphism_degree(const CMWitness& cm);

} // namespace ulix
