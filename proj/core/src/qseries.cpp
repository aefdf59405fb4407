#include "ulix/qseries.hpp"

#include <mutex>

namespace ulix {

namespace {

// Dense truncated integer power series, index = exponent of q.
using Series = std::vector<Int>;

Series mul(const Series& a, const Series& b, std::size_t len) {
    Series out(len);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        std::size_t jmax = std::min(b.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (b[j] == 0) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// 1/s for s with s[0] = 1.
Series invert(const Series& s, std::size_t len) {
    Series out(len);
    out[0] = 1;
    for (std::size_t k = 1; k < len; ++k) {
        Int acc = 0;
        for (std::size_t j = 1; j <= k && j < s.size(); ++j)
            acc += s[j] * out[k - j];
        out[k] = -acc;
    }
    return out;
}

Int sigma3(std::size_t n) {
    Int acc = 0;
    for (std::size_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        Int dd(d), ee(n / d);
        acc += dd * dd * dd;
        if (d != n / d) acc += ee * ee * ee;
    }
    return acc;
}

// j = E4^3 / (Delta/q), shifted so index 0 is the 1/q term.
std::vector<Int> compute_j_coefficients(std::size_t len) {
    // len coefficients of j starting at q^{-1}: j = sum_k coef[k] q^{k-1}
    std::size_t n = len;
    Series e4(n);
    e4[0] = 1;
    for (std::size_t k = 1; k < n; ++k) e4[k] = 240 * sigma3(k);
    Series e4cube = mul(mul(e4, e4, n), e4, n);

    // eta-product: f = prod (1-q^m) via pentagonal numbers, then f^24.
    Series f(n);
    f[0] = 1;
    for (long k = 1;; ++k) {
        long g1 = k * (3 * k - 1) / 2;
        long g2 = k * (3 * k + 1) / 2;
        if (g1 >= long(n) && g2 >= long(n)) break;
        Int sign = (k % 2 == 0) ? 1 : -1;
        if (g1 < long(n)) f[g1] += sign;
        if (g2 < long(n)) f[g2] += sign;
    }
    Series f2 = mul(f, f, n);
    Series f4 = mul(f2, f2, n);
    Series f8 = mul(f4, f4, n);
    Series f16 = mul(f8, f8, n);
    Series f24 = mul(f16, f8, n);

    return mul(e4cube, invert(f24, n), n);
}

std::mutex cache_mutex;
std::vector<Int> cache; // cache[k] = coefficient of q^{k-1}

} // namespace

const std::vector<Int>& j_q_coefficients(std::size_t count) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (cache.size() < count + 2)
        cache = compute_j_coefficients(count + 2);
    return cache;
}

JSeriesValue j_from_q_series_raw(const Complex& tau, std::size_t terms,
                                 const PrecisionContext& ctx) {
    ctx.activate();
    if (tau.imag() < Real("0.1"))
        throw InsufficientImaginaryPart("j_from_q_series requires Im(tau) >= 0.1");
    if (terms < 20)
        throw ValidationError("j_from_q_series requires terms >= 20");

    const auto& c = j_q_coefficients(terms + 1);
    Real two_pi = 2 * pi(ctx);
    Complex q = exp(cplx(-two_pi * tau.imag(), two_pi * tau.real()));

    // Horner over ascending powers: value = c[0]/q + c[1] + c[2] q + ...
    Complex acc(Real(0), Real(0));
    for (std::size_t k = terms + 1; k >= 1; --k) {
        acc = acc * q + cplx(to_real(c[k]));
    }
    Complex value = acc * q + cplx(to_real(c[0]));
    value = value / q;

    // |c_k| <= e^{4 pi sqrt(k)}; tail sum bounded by geometric comparison.
    Real aq = abs(q);
    Real k1 = Real(static_cast<unsigned long>(terms + 1));
    Real tail = exp(4 * pi(ctx) * sqrt(k1)) * pow(aq, terms + 1) / (1 - aq);
    return {value, tail};
}

} // namespace ulix
