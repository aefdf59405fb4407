#pragma once

#include <optional>
#include <vector>

#include "ulix/analytic.hpp"
#include "ulix/curves.hpp"
#include "ulix/isogeny.hpp"
#include "ulix/numeric.hpp"

namespace ulix {

/// Uniformized coordinates of one curve point configuration: logarithms of
/// the P-sections on Z+Z tau1, of the Q-sections on Z+Z tau2, and the
/// multiplier alpha = C tau1 + D transporting the Q-logarithms to the
/// tau1 side.
struct LogConfiguration {
    PeriodPoint tau1;
    std::vector<EllipticLogarithm> z;
    PeriodPoint tau2;
    std::vector<EllipticLogarithm> w;
    Complex alpha{Real(1), Real(0)};
};

/// Certified member of Z(T): integer vectors a, b and the lattice element
/// gamma1 + gamma2 tau1 reached by the logarithmic combination.
struct RelationWitness {
    std::vector<Int> a, b;
    Int gamma1, gamma2;
    Complex rho;
    Real residual;
    Real T_used;

    Int max_coefficient() const;
};

/// The gamma-bound constant from the T^4 chain: every witness satisfies
/// |gamma1|, |gamma2| <= kappa_bound(cfg, rho) * T^4.
Real kappa_bound(const LogConfiguration& cfg, const Complex& rho);

/// Bounded integer-relation search: the minimal witness with
/// max(|a_i|,|b_i|) <= T whose combination lands on Z + Z tau1, or absent.
std::optional<RelationWitness> find_relation(const LogConfiguration& cfg, const Complex& rho,
                                             const Real& T, const PrecisionContext& ctx);

/// Optional exact data for certification on rational fibers.
struct CertificationData {
    std::vector<CurvePoint> p_points;
    std::vector<CurvePoint> q_points;
    LegendreParam lambda1;
    IsogenyWitness isogeny;
};

/// Re-evaluates the combination at certify precision; on exact rational
/// configurations with rho = 0 additionally replays the relation through
/// the algebraic group law with analytically transported, exactly rounded
/// phi-images.
bool certify_relation(const LogConfiguration& cfg, const RelationWitness& witness,
                      const PrecisionContext& ctx,
                      const CertificationData* exact_data = nullptr);

struct ZTable {
    std::vector<Real> T_grid;
    std::vector<std::size_t> counts;
};

/// For each T in the grid, the number of sample configurations admitting an
/// entry-bounded isogeny matrix together with a certified relation.
ZTable count_zt_hits(const std::vector<LogConfiguration>& samples, const Complex& rho,
                     const std::vector<Real>& T_grid, const PrecisionContext& ctx);

} // namespace ulix
