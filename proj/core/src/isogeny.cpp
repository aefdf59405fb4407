#include "ulix/isogeny.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "ulix/lll.hpp"

namespace ulix {

unsigned psi_degree(unsigned n) {
    if (n == 0) throw ValidationError("psi_degree(0)");
    unsigned result = n;
    unsigned m = n;
    for (unsigned p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        result = result / p * (p + 1);
        while (m % p == 0) m /= p;
    }
    if (m > 1) result = result / m * (m + 1);
    return result;
}

bool ModularPolynomial::is_symmetric() const {
    for (unsigned i = 0; i <= degree; ++i)
        for (unsigned j = 0; j < i; ++j)
            if (coeffs[i][j] != coeffs[j][i]) return false;
    return true;
}

Rat ModularPolynomial::eval(const Rat& x, const Rat& y) const {
    // Horner in x with inner Horner in y
    Rat acc(0);
    for (unsigned i = degree + 1; i-- > 0;) {
        Rat inner(0);
        for (unsigned j = degree + 1; j-- > 0;) inner = inner * y + Rat(coeffs[i][j]);
        acc = acc * x + inner;
    }
    return acc;
}

Complex ModularPolynomial::eval(const Complex& x, const Complex& y,
                                const PrecisionContext& ctx) const {
    ctx.activate();
    Complex acc(Real(0), Real(0));
    for (unsigned i = degree + 1; i-- > 0;) {
        Complex inner(Real(0), Real(0));
        for (unsigned j = degree + 1; j-- > 0;) inner = inner * y + cplx(to_real(coeffs[i][j]));
        acc = acc * x + inner;
    }
    return acc;
}

namespace {

struct TriangularMatrix {
    unsigned a, b, d;
};

std::vector<TriangularMatrix> primitive_triangular(unsigned n) {
    std::vector<TriangularMatrix> out;
    for (unsigned d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        unsigned a = n / d;
        for (unsigned b = 0; b < d; ++b) {
            unsigned g = std::gcd(std::gcd(a, b), d);
            if (g == 1) out.push_back({a, b, d});
        }
    }
    return out;
}

} // namespace

ModularPolynomial compute_modular_polynomial(unsigned n, unsigned digits) {
    if (n == 0) throw ValidationError("modular_polynomial level must be positive");
    PrecisionContext ctx(std::max(30u, digits / 2), std::max(60u, digits));
    ctx.activate();

    const unsigned psi = psi_degree(n);
    const auto mats = primitive_triangular(n);
    if (mats.size() != psi) throw Error("internal: psi(N) mismatch");

    const unsigned nodes = psi + 1;
    std::vector<Real> node_j(nodes);
    // values[k][c] = coefficient of X^c in prod (X - j(M tau_k)), real
    std::vector<std::vector<Real>> values(nodes, std::vector<Real>(psi + 1, Real(0)));

    Real imag_tol = ctx.pow10(-long(ctx.working_digits) / 2);
    for (unsigned k = 0; k < nodes; ++k) {
        Complex tau = cplx(Real(0), 1 + Real(3 * int(k)) / (10 * int(psi)));
        node_j[k] = j_of_tau(tau, ctx).real();

        // poly[i] = coefficient of X^i in prod (X - j(M tau_k))
        std::vector<Complex> poly(psi + 1, Complex(Real(0), Real(0)));
        poly[0] = Complex(Real(1), Real(0));
        std::size_t deg = 0;
        for (const auto& m : mats) {
            Complex mtau = (to_real(Int(m.a)) * tau + cplx(to_real(Int(m.b)))) / to_real(Int(m.d));
            Complex root = j_of_tau(mtau, ctx);
            ++deg;
            for (std::size_t i = deg; i > 0; --i)
                poly[i] = poly[i - 1] - root * poly[i];
            poly[0] = -root * poly[0];
        }
        for (unsigned c = 0; c <= psi; ++c) {
            const Complex& v = poly[c];
            if (abs(v.imag()) > imag_tol * std::max(Real(1), abs(v)))
                throw PrecisionExhausted("modular polynomial sample has a complex residue");
            values[k][c] = v.real();
        }
    }

    // Newton divided differences for each X-coefficient as a polynomial in Y
    ModularPolynomial out;
    out.level = n;
    out.degree = psi;
    out.coeffs.assign(psi + 1, std::vector<Int>(psi + 1, Int(0)));

    Real max_residue(0);
    for (unsigned c = 0; c < psi; ++c) {
        std::vector<Real> dd(nodes);
        for (unsigned k = 0; k < nodes; ++k) dd[k] = values[k][c];
        for (unsigned level = 1; level < nodes; ++level)
            for (unsigned k = nodes - 1; k >= level; --k)
                dd[k] = (dd[k] - dd[k - 1]) / (node_j[k] - node_j[k - level]);
        // expand Newton form to monomials in Y
        std::vector<Real> mono(nodes, Real(0));
        std::vector<Real> base(nodes, Real(0));
        base[0] = 1; // running product prod (Y - node_j[i])
        std::size_t bdeg = 0;
        for (unsigned k = 0; k < nodes; ++k) {
            for (std::size_t i = 0; i <= bdeg; ++i) mono[i] += dd[k] * base[i];
            if (k + 1 < nodes) {
                for (std::size_t i = bdeg + 1; i > 0; --i)
                    base[i] = base[i - 1] - node_j[k] * base[i];
                base[0] = -node_j[k] * base[0];
                ++bdeg;
            }
        }
        for (unsigned j = 0; j < nodes; ++j) {
            Real rounded = round(mono[j]);
            Real residue = abs(mono[j] - rounded);
            max_residue = std::max(max_residue, residue);
            out.coeffs[c][j] = round_to_int(mono[j]);
        }
    }
    out.coeffs[psi][0] = 1; // monic in X

    if (max_residue >= Real("0.25"))
        throw PrecisionExhausted("modular polynomial rounding residue too large");
    return out;
}

namespace {
std::mutex phi_mutex;
std::map<unsigned, ModularPolynomial> phi_cache;
} // namespace

const ModularPolynomial& modular_polynomial(unsigned n, const PrecisionContext& ctx) {
    std::lock_guard<std::mutex> lock(phi_mutex);
    auto it = phi_cache.find(n);
    if (it != phi_cache.end()) return it->second;
    unsigned digits = std::max(ctx.certify_digits, 128u);
    for (; digits <= 4096; digits *= 2) {
        try {
            ModularPolynomial phi = compute_modular_polynomial(n, digits);
            auto [pos, ok] = phi_cache.emplace(n, std::move(phi));
            return pos->second;
        } catch (const PrecisionExhausted&) {
            continue;
        }
    }
    throw PrecisionExhausted("modular polynomial interpolation failed at all precisions");
}

void write_modular_polynomial(const ModularPolynomial& phi, std::ostream& os) {
    os << "PHI N " << phi.level << " DEG " << phi.degree << "\n";
    for (unsigned i = phi.degree + 1; i-- > 0;)
        for (unsigned j = phi.degree + 1; j-- > 0;) {
            if (phi.coeffs[i][j] == 0) continue;
            os << i << " " << j << " " << phi.coeffs[i][j] << "\n";
        }
}

ModularPolynomial parse_modular_polynomial(std::istream& is) {
    std::string word;
    unsigned n = 0, deg = 0;
    if (!(is >> word) || word != "PHI") throw IoError("modular polynomial header missing PHI");
    if (!(is >> word) || word != "N") throw IoError("modular polynomial header missing N");
    if (!(is >> n)) throw IoError("modular polynomial header missing level");
    if (!(is >> word) || word != "DEG") throw IoError("modular polynomial header missing DEG");
    if (!(is >> deg)) throw IoError("modular polynomial header missing degree");
    ModularPolynomial out;
    out.level = n;
    out.degree = deg;
    out.coeffs.assign(deg + 1, std::vector<Int>(deg + 1, Int(0)));
    unsigned i, j;
    std::string coeff;
    while (is >> i >> j >> coeff) {
        if (i > deg || j > deg) throw IoError("modular polynomial exponent out of range");
        out.coeffs[i][j] = Int(coeff);
    }
    return out;
}

bool is_cyclic_isogenous(const Rat& j1, const Rat& j2, unsigned n, const PrecisionContext& ctx) {
    const ModularPolynomial& phi = modular_polynomial(n, ctx);
    return phi.eval(j1, j2) == 0;
}

Complex IsogenyWitness::transport_multiplier(const Complex& tau1) const {
    return cplx(to_real(A)) - to_real(C) * tau1;
}

namespace {

struct WitnessCandidate {
    Int A, B, C, D, N;
};

bool witness_less(const WitnessCandidate& l, const WitnessCandidate& r) {
    if (l.N != r.N) return l.N < r.N;
    auto key = [](const WitnessCandidate& w) {
        return std::array<Int, 4>{abs(w.A), abs(w.B), abs(w.C), abs(w.D)};
    };
    return key(l) < key(r);
}

} // namespace

std::optional<IsogenyWitness> find_isogeny_matrix(const PeriodPoint& tau1,
                                                  const PeriodPoint& tau2, const Int& n_max,
                                                  const PrecisionContext& ctx,
                                                  const IsogenyConfig& cfg) {
    ctx.activate();
    const Complex& t1 = tau1.tau;
    const Complex& t2 = tau2.tau;
    std::vector<Complex> xs = {t1 * t2, t1, -t2, -cplx(Real(1))};
    auto raw = integer_relation_candidates(xs, ctx, 8, 12);

    Real accept = ctx.accept_tol();
    Real reject = ctx.reject_tol();
    Real scale = std::max(Real(1), abs(t1));

    std::vector<WitnessCandidate> accepted;
    bool ambiguous = false;
    for (const auto& v : raw) {
        // v = (C, D, A, B)
        WitnessCandidate w{v[2], v[3], v[0], v[1], Int(0)};
        Int g = gcd(gcd(abs(w.A), abs(w.B)), gcd(abs(w.C), abs(w.D)));
        if (g == 0) continue;
        w.A /= g; w.B /= g; w.C /= g; w.D /= g;
        w.N = w.A * w.D - w.B * w.C;
        if (w.N <= 0 || w.N > n_max) continue;
        Int entry_cap = cfg.lemma_entry_constant * pow(w.N, 10);
        if (abs(w.A) > entry_cap || abs(w.B) > entry_cap || abs(w.C) > entry_cap ||
            abs(w.D) > entry_cap)
            continue;
        Complex den = to_real(w.C) * t2 + cplx(to_real(w.D));
        if (abs(den) == 0) continue;
        Complex image = (to_real(w.A) * t2 + cplx(to_real(w.B))) / den;
        Real residual = abs(t1 - image);
        if (residual < accept * scale) {
            accepted.push_back(w);
        } else if (residual < reject * scale) {
            ambiguous = true;
        }
    }

    if (accepted.empty()) {
        if (ambiguous)
            throw PrecisionExhausted("isogeny matrix residual in the accept/reject gap");
        return std::nullopt;
    }
    auto best = *std::min_element(accepted.begin(), accepted.end(), witness_less);
    // canonical sign: first nonzero of (A,B,C,D) positive
    std::array<Int*, 4> entries{&best.A, &best.B, &best.C, &best.D};
    for (Int* e : entries) {
        if (*e == 0) continue;
        if (*e < 0)
            for (Int* f : entries) *f = -*f;
        break;
    }
    Complex alpha = to_real(best.C) * t2 + cplx(to_real(best.D));
    return IsogenyWitness{best.A, best.B, best.C, best.D, best.N, alpha};
}

std::optional<IsogenyWitness> find_isogeny_matrix_entry_bounded(const PeriodPoint& tau1,
                                                                const PeriodPoint& tau2,
                                                                const Int& t_bound,
                                                                const PrecisionContext& ctx) {
    // tau2 = M tau1 orientation: reuse the search with the roles swapped.
    IsogenyConfig cfg;
    Int n_max = 2 * t_bound * t_bound;
    auto w = find_isogeny_matrix(tau2, tau1, n_max, ctx, cfg);
    if (!w) return std::nullopt;
    if (abs(w->A) > t_bound || abs(w->B) > t_bound || abs(w->C) > t_bound ||
        abs(w->D) > t_bound)
        return std::nullopt;
    return w;
}

EllipticLogarithm map_point_analytic(const EllipticLogarithm& w, const IsogenyWitness& witness,
                                     const PeriodPoint& tau1, const PrecisionContext& ctx) {
    ctx.activate();
    Complex beta = witness.transport_multiplier(tau1.tau);
    Complex z = reduce_to_parallelogram(beta * w.z, tau1.tau);
    return {z, tau1};
}

std::optional<CMWitness> detect_cm(const PeriodPoint& tau, const Int& coeff_bound,
                                   const PrecisionContext& ctx) {
    ctx.activate();
    const Complex& t = tau.tau;
    std::vector<Complex> xs = {t * t, t, cplx(Real(1))};
    auto raw = integer_relation_candidates(xs, ctx, 8, 4);

    Real accept = ctx.accept_tol();
    Real reject = ctx.reject_tol();
    Real tau_scale = std::max(Real(1), abs2(t));

    std::optional<CMWitness> best;
    bool ambiguous = false;
    for (const auto& v : raw) {
        Int a = v[0], b = v[1], c = v[2];
        Int g = gcd(gcd(abs(a), abs(b)), abs(c));
        if (g == 0) continue;
        a /= g; b /= g; c /= g;
        if (a == 0) continue;
        if (a < 0) { a = -a; b = -b; c = -c; }
        if (abs(a) > coeff_bound || abs(b) > coeff_bound || abs(c) > coeff_bound) continue;
        Int delta = b * b - 4 * a * c;
        if (delta >= 0) continue;
        Complex quad = to_real(a) * t * t + to_real(b) * t + cplx(to_real(c));
        Real coeff_scale = to_real(abs(a) + abs(b) + abs(c));
        Real residual = abs(quad);
        if (residual < accept * coeff_scale * tau_scale) {
            if (!best || abs(delta) < abs(best->Delta)) {
                Real sq = sqrt(to_real(abs(delta)));
                Complex rho0 = (cplx(to_real(delta)) + cplx(Real(0), sq)) / 2;
                best = CMWitness{a, b, c, delta, rho0};
            }
        } else if (residual < reject * coeff_scale * tau_scale) {
            ambiguous = true;
        }
    }
    if (!best && ambiguous)
        throw PrecisionExhausted("CM residual in the accept/reject gap");
    return best;
}

unsigned class_number(const Int& Delta) {
    if (Delta >= 0) throw InvalidDiscriminant("discriminant must be negative");
    Int mod = ((Delta % 4) + 4) % 4;
    if (mod != 0 && mod != 1) throw InvalidDiscriminant("discriminant must be 0 or 1 mod 4");
    if (-Delta > 1000000) throw InvalidDiscriminant("|Delta| capped at 10^6");

    unsigned count = 0;
    for (Int a = 1; 3 * a * a <= -Delta; ++a) {
        for (Int b = -a; b <= a; ++b) {
            Int num = b * b - Delta;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (gcd(gcd(abs(a), abs(b)), abs(c)) != 1) continue;
            if (b < 0 && (a == c || b == -a)) continue; // reduced-form tie rules
            ++count;
        }
    }
    return count;
}

Int endomorphism_degree(const CMWitness& cm) {
    return (cm.Delta * cm.Delta - cm.Delta) / 4;
}

} // namespace ulix
