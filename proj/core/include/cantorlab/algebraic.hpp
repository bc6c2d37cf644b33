#pragma once

#include <vector>

#include "cantorlab/enclosure.hpp"
#include "cantorlab/loglength.hpp"
#include "cantorlab/rational.hpp"

namespace cantorlab {

// Element of Q(theta) with theta = 2^{1/q}: sum_{j<q} coef[j] theta^j.
// Interval lengths of the built-in families are single monomials c theta^j,
// so endpoint coordinates and gap lengths are sums of such monomials and stay
// inside this field.  x^q - 2 is irreducible (Eisenstein at 2), hence a value
// is zero exactly when all coefficients vanish, which turns sign computation
// into a terminating interval refinement.
class ThetaPoly {
public:
    explicit ThetaPoly(unsigned long q = 1) : q_(q), coef_(q, Rational(0)) {}

    static ThetaPoly zero(unsigned long q) { return ThetaPoly(q); }
    static ThetaPoly from_rational(unsigned long q, const Rational& r) {
        ThetaPoly p(q);
        p.coef_[0] = r;
        return p;
    }
    // Requires: odd-prime exponents integral, exponent of 2 with denominator
    // dividing q.  Throws DomainError otherwise.
    static ThetaPoly from_loglength(unsigned long q, const LogLength& v);

    unsigned long q() const { return q_; }
    const std::vector<Rational>& coefficients() const { return coef_; }

    bool is_zero() const;
    bool is_rational() const;
    Rational rational_part() const { return coef_[0]; }

    ThetaPoly& operator+=(const ThetaPoly& o);
    ThetaPoly& operator-=(const ThetaPoly& o);
    friend ThetaPoly operator+(ThetaPoly a, const ThetaPoly& b) { a += b; return a; }
    friend ThetaPoly operator-(ThetaPoly a, const ThetaPoly& b) { a -= b; return a; }
    ThetaPoly operator-() const;
    friend ThetaPoly operator*(const ThetaPoly& a, const ThetaPoly& b);
    ThetaPoly& mul_rational(const Rational& r);
    // Multiplicative inverse in Q(theta); throws on zero.
    ThetaPoly inverse() const;
    friend ThetaPoly operator/(const ThetaPoly& a, const ThetaPoly& b) { return a * b.inverse(); }

    // Exact sign: 0 iff the value is zero; otherwise interval refinement.
    int sign() const;
    // sign(a - b)
    static int cmp(const ThetaPoly& a, const ThetaPoly& b) { return (a - b).sign(); }

    Enclosure enclose(mpfr_prec_t prec) const;
    double to_double() const { return enclose(96).mid_double(); }

private:
    unsigned long q_;
    std::vector<Rational> coef_;
};

}  // namespace cantorlab
