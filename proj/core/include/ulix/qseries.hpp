#pragma once

#include <vector>

#include "ulix/numeric.hpp"

namespace ulix {

/// Integer coefficients c_k of j(tau) = 1/q + 744 + sum_{k>=1} c_k q^k,
/// q = e^{2 pi i tau}. Cached process-wide; thread-safe.
const std::vector<Int>& j_q_coefficients(std::size_t count);

struct JSeriesValue {
    Complex value;
    Real truncation_bound; // rigorous bound on the dropped tail
};

/// Truncated q-expansion of j at tau. Requires Im(tau) >= 0.1 and terms >= 20.
JSeriesValue j_from_q_series_raw(const Complex& tau, std::size_t terms,
                                 const PrecisionContext& ctx);

} // namespace ulix
