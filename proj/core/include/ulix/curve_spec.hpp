#pragma once

#include <string>
#include <vector>

#include "ulix/polynomial.hpp"

namespace ulix {

struct Section {
    RationalFunction x;
    int sign = +1; // branch of y = +/- sqrt(rhs)
};

/// Parametrized curve in E_lambda^m x E_mu^n: the maps lambda(t), mu(t) and
/// the section abscissae with sign branches.
struct CurveSpec {
    std::string name;
    RationalFunction lambda_map;
    RationalFunction mu_map;
    std::vector<Section> p_sections;
    std::vector<Section> q_sections;

    std::size_t m() const { return p_sections.size(); }
    std::size_t n() const { return q_sections.size(); }
};

/// Parse a rational-function expression over the variable "t" with integer
/// or rational literals and + - * / ^ and parentheses.
RationalFunction parse_rational_function(const std::string& text);

/// Parse and validate the JSON spec document (see README for the schema).
CurveSpec parse_spec(const std::string& document, unsigned long seed = 0);

std::string spec_to_json(const CurveSpec& spec);

} // namespace ulix
