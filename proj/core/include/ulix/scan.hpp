#pragma once

#include <iosfwd>
#include <map>
#include <optional>

#include "ulix/curve_spec.hpp"
#include "ulix/heights.hpp"
#include "ulix/isogeny.hpp"
#include "ulix/relation.hpp"

namespace ulix {

struct AsymmetryRefused : Error { using Error::Error; };
struct GenericityRefused : Error { using Error::Error; };

struct ScanConfig {
    int h1_max = 20;
    unsigned n_max = 3;
    Int t_relation = 1000;
    PrecisionContext precision = PrecisionContext::make(64);
    Real exclusion_radius = Real("1e-6");
    unsigned threads = 1;
    unsigned long seed = 0;
    bool override_asymmetry = false;
};

struct AsymmetryReport {
    int deg_x = 0;
    int deg_y = 0;
    int fibration_degree = 1;
    bool asymmetric = false;
};

struct GenericitySample {
    Rat t;
    bool isogeny_free = false;
    bool p_relation_free = false;
    bool q_relation_free = false;
    std::string note;
};

struct GenericityReport {
    std::vector<GenericitySample> samples;
    bool passed = false;
};

struct FindingBounds {
    Int n0;
    Real tau1_abs, tau2_abs;
    Int coeff_max;
    Real tau_height_margin; // (2079 + |j|) - e^{2 pi Im tau_std}, nonnegative in B
};

struct Finding {
    Rat t0;
    Rat lambda0, mu0;
    unsigned phi_level = 0;
    IsogenyWitness isogeny;
    RelationWitness relation;
    Real h_lambda, h_mu;
    std::vector<HeightValue> hhat_p; // exact P-sections only
    FindingBounds bounds;
    bool certified = false;
};

struct SkipEntry {
    Rat t0;
    std::string reason;
};

struct ScanResult {
    std::string spec_name;
    AsymmetryReport asymmetry;
    GenericityReport genericity;
    std::map<unsigned, std::vector<Rat>> hits_by_level;
    std::vector<Finding> findings;
    std::vector<SkipEntry> skip_list;
    bool asymmetry_overridden = false;
};

/// Degrees of J(lambda(t)) and J(mu(t)) corrected by the degree of the
/// parametrization onto its image; asymmetric when they differ.
AsymmetryReport asymmetry_check(const CurveSpec& spec);

/// At three random parameters: the curves must not be isogenous within
/// n_max and the P- and Q-logarithms must admit no bounded relation.
GenericityReport genericity_check(const CurveSpec& spec, const ScanConfig& config);

/// All rationals p/q in lowest terms with max(|p|,|q|) <= h1_max, each once,
/// ordered by (H1, numerator, denominator).
std::vector<Rat> enumerate_parameters(int h1_max);

/// The enumeration filtered for a spec: poles of lambda/mu and parameters
/// with lambda or mu in {0,1} are excluded.
std::vector<Rat> enumerate_parameters(const CurveSpec& spec, int h1_max);

/// Full pipeline over the bounded parameter range.
ScanResult scan(const CurveSpec& spec, const ScanConfig& config);

/// Exact numerator of Phi_N(J(lambda(t)), J(mu(t))): the rational roots of
/// this polynomial are the independent oracle for the scan's level-N hits.
Poly isogeny_locus_oracle(const CurveSpec& spec, unsigned n, const PrecisionContext& ctx);

enum class OutputFormat { Json, Csv };

/// JSON-lines (or CSV) emission with a header record carrying the tool
/// version, configuration, and seed.
void emit_findings(const ScanResult& result, const ScanConfig& config, OutputFormat format,
                   std::ostream& os);

} // namespace ulix
