#include "ulix/lll.hpp"

#include <algorithm>

namespace ulix {

namespace {

Real dot(const RealVec& a, const RealVec& b) {
    Real s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

void lll_reduce(RealMat& basis, const Real& delta, const PrecisionContext& ctx) {
    ctx.activate();
    const std::size_t n = basis.size();
    if (n <= 1) return;

    // initial Gram-Schmidt data: mu[i][j] (j<i) and squared norms B[i]
    RealMat mu(n, RealVec(n, Real(0)));
    RealVec B(n, Real(0));
    {
        RealMat star = basis;
        for (std::size_t i = 0; i < n; ++i) {
            star[i] = basis[i];
            for (std::size_t j = 0; j < i; ++j) {
                mu[i][j] = dot(basis[i], star[j]) / B[j];
                for (std::size_t t = 0; t < star[i].size(); ++t)
                    star[i][t] -= mu[i][j] * star[j][t];
            }
            B[i] = dot(star[i], star[i]);
            if (B[i] == 0)
                throw ValidationError("lll_reduce requires linearly independent rows");
        }
    }

    auto red = [&](std::size_t k, std::size_t l) {
        Int q = round_to_int(mu[k][l]);
        if (q == 0) return;
        Real qq = to_real(q);
        for (std::size_t t = 0; t < basis[k].size(); ++t) basis[k][t] -= qq * basis[l][t];
        mu[k][l] -= qq;
        for (std::size_t j = 0; j < l; ++j) mu[k][j] -= qq * mu[l][j];
    };

    std::size_t k = 1;
    long guard = 0;
    const long guard_max = 2000000;
    while (k < n) {
        if (++guard > guard_max) throw PrecisionExhausted("LLL failed to stabilize");
        red(k, k - 1);
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            // swap rows k-1 and k, updating Gram data in place
            Real nu = mu[k][k - 1];
            Real Bp = B[k] + nu * nu * B[k - 1];
            mu[k][k - 1] = nu * B[k - 1] / Bp;
            B[k] = B[k - 1] * B[k] / Bp;
            B[k - 1] = Bp;
            std::swap(basis[k], basis[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
            for (std::size_t i = k + 1; i < n; ++i) {
                Real t = mu[i][k];
                mu[i][k] = mu[i][k - 1] - nu * t;
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
            }
            if (k > 1) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) red(k, l);
            ++k;
        }
    }
}

std::vector<std::vector<Int>> integer_relation_candidates(const std::vector<Complex>& xs,
                                                          const PrecisionContext& ctx,
                                                          int count, int combine_depth) {
    ctx.activate();
    std::size_t n = xs.size();
    if (n == 0) return {};
    Real scale = ctx.pow10(long(ctx.certify_digits) - 10);

    RealMat basis(n, RealVec(n + 2, Real(0)));
    for (std::size_t i = 0; i < n; ++i) {
        basis[i][i] = 1;
        basis[i][n] = scale * xs[i].real();
        basis[i][n + 1] = scale * xs[i].imag();
    }
    lll_reduce(basis, Real("0.99"), ctx);

    auto extract = [&](const RealVec& row) {
        std::vector<Int> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = round_to_int(row[i]);
        return v;
    };

    std::vector<std::vector<Int>> out;
    auto push_unique = [&](std::vector<Int> v) {
        bool zero = std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
        if (zero) return;
        for (const Int& x : v) {
            if (x == 0) continue;
            if (x < 0)
                for (Int& y : v) y = -y;
            break;
        }
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    };

    std::size_t rows = std::min<std::size_t>(n, std::size_t(count));
    for (std::size_t i = 0; i < rows; ++i) push_unique(extract(basis[i]));

    // small integer combinations of the two best rows: needed when the
    // relation lattice has rank two (CM pairs)
    if (combine_depth > 0 && basis.size() >= 2) {
        auto r0 = extract(basis[0]);
        auto r1 = extract(basis[1]);
        for (int x = -combine_depth; x <= combine_depth; ++x)
            for (int y = -combine_depth; y <= combine_depth; ++y) {
                if (x == 0 && y == 0) continue;
                std::vector<Int> v(n);
                for (std::size_t i = 0; i < n; ++i) v[i] = x * r0[i] + y * r1[i];
                push_unique(std::move(v));
            }
    }
    return out;
}

} // namespace ulix
