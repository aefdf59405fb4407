#include "ulix/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace ulix {

Rat Poly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Complex Poly::eval(const Complex& x) const {
    Complex acc(Real(0), Real(0));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_complex(*it);
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rat> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rat(int(i)) * c_[i];
    return Poly(std::move(d));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return Poly(std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
}

Poly operator*(const Rat& s, const Poly& p) {
    std::vector<Rat> c = p.c_;
    for (auto& x : c) x *= s;
    return Poly(std::move(c));
}

std::pair<Poly, Poly> Poly::divrem(const Poly& d) const {
    if (d.is_zero()) throw ValidationError("polynomial division by zero");
    Poly r = *this;
    if (r.degree() < d.degree()) return {Poly(), r};
    std::vector<Rat> q(r.degree() - d.degree() + 1, Rat(0));
    Rat lead = d.leading();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        int k = r.degree() - d.degree();
        Rat f = r.leading() / lead;
        q[k] = f;
        std::vector<Rat> sub(k + d.c_.size(), Rat(0));
        for (std::size_t i = 0; i < d.c_.size(); ++i) sub[k + i] = f * d.c_[i];
        r = r - Poly(std::move(sub));
    }
    return {Poly(std::move(q)), r};
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return (Rat(1) / a.leading()) * a; // monic
}

Poly Poly::pow(unsigned e) const {
    Poly base = *this;
    Poly acc = Poly::constant(Rat(1));
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

Poly Poly::compose(const Poly& inner) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * inner + Poly::constant(*it);
    return acc;
}

std::vector<Int> Poly::primitive_integer_coeffs() const {
    if (is_zero()) return {};
    Int den_lcm = 1;
    for (const auto& r : c_) den_lcm = lcm(den_lcm, Int(denominator(r)));
    std::vector<Int> out(c_.size());
    Int content = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        out[i] = Int(numerator(c_[i])) * (den_lcm / Int(denominator(c_[i])));
        content = gcd(content, out[i]);
    }
    if (out.back() < 0) content = -content;
    for (auto& v : out) v /= content;
    return out;
}

Poly Poly::squarefree_part() const {
    if (degree() <= 1) return *this;
    Poly g = gcd(*this, derivative());
    if (g.degree() <= 0) return *this;
    return divrem(g).first;
}

std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rat& r = c_[i];
        if (r == 0) continue;
        if (!first) os << (r > 0 ? " + " : " - ");
        else if (r < 0) os << "-";
        Rat a = abs(r);
        bool unit = (a == 1) && i > 0;
        if (!unit) os << a;
        if (i > 0) {
            if (!unit) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

RationalFunction::RationalFunction(Poly num, Poly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ValidationError("rational function with zero denominator");
    canonicalize();
}

void RationalFunction::canonicalize() {
    if (num_.is_zero()) {
        den_ = Poly::constant(Rat(1));
        return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divrem(g).first;
        den_ = den_.divrem(g).first;
    }
    std::vector<Int> dint = den_.primitive_integer_coeffs();
    std::vector<Rat> dc(dint.size());
    for (std::size_t i = 0; i < dint.size(); ++i) dc[i] = Rat(dint[i]);
    Poly dprim{std::move(dc)};
    Rat scale = den_.leading() / dprim.leading();
    num_ = (Rat(1) / scale) * num_;
    den_ = std::move(dprim);
}

Rat RationalFunction::eval(const Rat& t) const {
    Rat d = den_.eval(t);
    if (d == 0) throw ValidationError("evaluation at a pole");
    return num_.eval(t) / d;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw ValidationError("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(int e) const {
    if (e == 0) return RationalFunction::constant(Rat(1));
    if (e < 0) {
        if (is_zero()) throw ValidationError("zero to a negative power");
        return RationalFunction(den_, num_).pow(-e);
    }
    return RationalFunction(num_.pow(unsigned(e)), den_.pow(unsigned(e)));
}

RationalFunction RationalFunction::compose(const Poly& outer, const RationalFunction& inner) {
    RationalFunction acc = RationalFunction::constant(Rat(0));
    for (auto it = outer.coeffs().rbegin(); it != outer.coeffs().rend(); ++it)
        acc = acc * inner + RationalFunction::constant(*it);
    return acc;
}

std::string RationalFunction::str(const std::string& var) const {
    if (den_.degree() == 0 && den_.leading() == 1) return num_.str(var);
    return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
}

std::vector<Complex> complex_roots(const Poly& p, const PrecisionContext& ctx) {
    ctx.activate();
    Poly sf = p.squarefree_part();
    int n = sf.degree();
    if (n <= 0) return {};

    std::vector<Complex> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = to_complex(sf[i]);

    auto eval_with_deriv = [&](const Complex& x, Complex& val, Complex& dval) {
        val = c[n];
        dval = Complex(Real(0), Real(0));
        for (int i = n - 1; i >= 0; --i) {
            dval = dval * x + val;
            val = val * x + c[i];
        }
    };

    Real radius(0);
    Real lead = abs(c[n]);
    for (int i = 0; i < n; ++i) radius = std::max(radius, 1 + abs(c[i]) / lead);

    // Aberth-Ehrlich with deterministic spiral seeds
    std::vector<Complex> roots(n);
    Real two_pi = 8 * atan(Real(1));
    for (int k = 0; k < n; ++k) {
        Real ang = two_pi * Real(2 * k + 1) / Real(2 * n) + Real(k) / Real(n * n + 7);
        Real rad = radius * (Real("0.5") + Real(k % 5) / 10);
        roots[k] = cplx(rad * cos(ang), rad * sin(ang));
    }

    Real tol = ctx.pow10(-long(ctx.certify_digits) + 12);
    for (int sweep = 0; sweep < 600; ++sweep) {
        Real moved(0);
        for (int k = 0; k < n; ++k) {
            Complex val, dval;
            eval_with_deriv(roots[k], val, dval);
            Complex newton = (abs(dval) == 0) ? Complex(Real(1), Real(0)) : val / dval;
            Complex repulse(Real(0), Real(0));
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                Complex diff = roots[k] - roots[j];
                if (abs(diff) == 0) diff = Complex(tol, tol);
                repulse += 1 / diff;
            }
            Complex denom = 1 - newton * repulse;
            Complex step = (abs(denom) == 0) ? newton : newton / denom;
            roots[k] -= step;
            moved = std::max(moved, abs(step));
        }
        if (moved < tol * std::max(Real(1), radius)) break;
    }
    return roots;
}

std::vector<Rat> rational_roots(const Poly& p, const Int& height_cap,
                                const PrecisionContext& ctx) {
    std::vector<Rat> out;
    if (p.is_zero()) throw ValidationError("rational_roots of the zero polynomial");
    auto roots = complex_roots(p, ctx);
    Real im_tol = ctx.pow10(-long(ctx.working_digits) / 2);
    Real rec_tol = ctx.pow10(-long(ctx.working_digits) / 2 - 4);
    for (const auto& r : roots) {
        if (abs(r.imag()) > im_tol) continue;
        Rat cand;
        if (!reconstruct_rational(r.real(), height_cap, rec_tol, cand)) continue;
        if (p.eval(cand) == 0 && abs(Int(numerator(cand))) <= height_cap &&
            Int(denominator(cand)) <= height_cap) {
            if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace ulix
