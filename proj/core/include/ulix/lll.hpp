#pragma once

#include <vector>

#include "ulix/numeric.hpp"

namespace ulix {

using RealVec = std::vector<Real>;
using RealMat = std::vector<RealVec>;

/// In-place LLL reduction of the row basis with Lovász parameter delta.
void lll_reduce(RealMat& basis, const Real& delta, const PrecisionContext& ctx);

/// Candidate integer relation vectors for a list of complex numbers: small
/// (v_1..v_n) with |sum v_i x_i| tiny. Built from an LLL-reduced embedding
/// [I | s Re(x) | s Im(x)] with scale s = 10^{certify_digits - margin};
/// the first `count` reduced rows plus small pairwise combinations are
/// returned, most-promising first.
std::vector<std::vector<Int>> integer_relation_candidates(const std::vector<Complex>& xs,
                                                          const PrecisionContext& ctx,
                                                          int count = 8,
                                                          int combine_depth = 0);

} // namespace ulix
