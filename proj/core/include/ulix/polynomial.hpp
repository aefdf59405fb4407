#pragma once

#include <vector>

#include "ulix/numeric.hpp"

namespace ulix {

/// Dense univariate polynomial over the rationals. Coefficient 0 is the
/// constant term; normalized so the leading coefficient is nonzero.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(const Rat& r) { return Poly({r}); }
    static Poly variable() { return Poly({Rat(0), Rat(1)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return int(c_.size()) - 1; } // -1 for zero
    const Rat& operator[](std::size_t i) const { return c_[i]; }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

    Rat eval(const Rat& x) const;
    Complex eval(const Complex& x) const;

    Poly derivative() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rat& s, const Poly& p);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Quotient and remainder of this by d (d nonzero).
    std::pair<Poly, Poly> divrem(const Poly& d) const;

    /// Monic gcd.
    static Poly gcd(Poly a, Poly b);

    Poly pow(unsigned e) const;

    /// Substitute another polynomial for the variable.
    Poly compose(const Poly& inner) const;

    /// Scale to integer coefficients with content 1 and positive leading
    /// coefficient. Returns the integer coefficient vector.
    std::vector<Int> primitive_integer_coeffs() const;

    Poly squarefree_part() const;

    std::string str(const std::string& var = "t") const;

private:
    std::vector<Rat> c_;
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

/// Rational function num/den in canonical form: coprime, den nonzero with
/// positive integer-primitive leading normalization.
class RationalFunction {
public:
    RationalFunction() : num_(Poly::constant(Rat(0))), den_(Poly::constant(Rat(1))) {}
    RationalFunction(Poly num, Poly den);
    static RationalFunction constant(const Rat& r) {
        return RationalFunction(Poly::constant(r), Poly::constant(Rat(1)));
    }
    static RationalFunction variable() {
        return RationalFunction(Poly::variable(), Poly::constant(Rat(1)));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() <= 0; }
    bool is_zero() const { return num_.is_zero(); }

    /// max(deg num, deg den): the degree as a map P1 -> P1.
    int map_degree() const { return std::max(num_.degree(), den_.degree()); }

    bool has_pole_at(const Rat& t) const { return den_.eval(t) == 0; }
    Rat eval(const Rat& t) const; // throws ValidationError at poles

    friend RationalFunction operator+(const RationalFunction&, const RationalFunction&);
    friend RationalFunction operator-(const RationalFunction&, const RationalFunction&);
    friend RationalFunction operator*(const RationalFunction&, const RationalFunction&);
    friend RationalFunction operator/(const RationalFunction&, const RationalFunction&);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    RationalFunction pow(int e) const; // negative exponents allowed

    /// Substitute a rational function for the variable of a polynomial.
    static RationalFunction compose(const Poly& outer, const RationalFunction& inner);

    std::string str(const std::string& var = "t") const;

private:
    void canonicalize();
    Poly num_, den_;
};

/// All complex roots of p (with multiplicity collapsed by squarefree
/// reduction) via the Aberth-Ehrlich iteration at certify precision.
std::vector<Complex> complex_roots(const Poly& p, const PrecisionContext& ctx);

/// Exact rational roots of p with numerator and denominator bounded by
/// height_cap: numeric root isolation, continued-fraction reconstruction,
/// then exact verification. Sorted ascending.
std::vector<Rat> rational_roots(const Poly& p, const Int& height_cap,
                                const PrecisionContext& ctx);

} // namespace ulix
