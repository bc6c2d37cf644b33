#include "cantorlab/algebraic.hpp"

#include "cantorlab/errors.hpp"

namespace cantorlab {

ThetaPoly ThetaPoly::from_loglength(unsigned long q, const LogLength& v) {
    Rational rat(1);
    Rational e2(0);
    for (const auto& [p, e] : v.exponents()) {
        if (p == 2) {
            e2 = e;
            continue;
        }
        if (!is_integer(e))
            throw DomainError("LogLength outside Q(2^{1/q}): non-integer exponent of odd prime");
        Integer k = e.get_num();
        unsigned long a = static_cast<unsigned long>(mpz_get_ui(Integer(abs(k)).get_mpz_t()));
        Integer pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), a);
        if (k >= 0)
            rat *= Rational(pw);
        else
            rat /= Rational(pw);
    }
    // e2 = z + j/q with 0 <= j < q
    Rational scaled = e2 * static_cast<long>(q);
    if (!is_integer(scaled))
        throw DomainError("LogLength outside Q(2^{1/q}): exponent of 2 has incompatible denominator");
    Integer num = scaled.get_num();
    Integer jz, z;
    mpz_fdiv_qr(z.get_mpz_t(), jz.get_mpz_t(), num.get_mpz_t(), Integer(static_cast<long>(q)).get_mpz_t());
    unsigned long j = static_cast<unsigned long>(jz.get_ui());
    // multiply rat by 2^z
    if (z >= 0) {
        Integer pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(z.get_ui()));
        rat *= Rational(pw);
    } else {
        Integer pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(Integer(-z).get_ui()));
        rat /= Rational(pw);
    }
    ThetaPoly out(q);
    out.coef_[j] = rat;
    return out;
}

bool ThetaPoly::is_zero() const {
    for (const auto& c : coef_)
        if (c != 0) return false;
    return true;
}

bool ThetaPoly::is_rational() const {
    for (std::size_t j = 1; j < coef_.size(); ++j)
        if (coef_[j] != 0) return false;
    return true;
}

ThetaPoly& ThetaPoly::operator+=(const ThetaPoly& o) {
    if (q_ != o.q_) throw InternalError("ThetaPoly: mixed q");
    for (std::size_t j = 0; j < coef_.size(); ++j) coef_[j] += o.coef_[j];
    return *this;
}

ThetaPoly& ThetaPoly::operator-=(const ThetaPoly& o) {
    if (q_ != o.q_) throw InternalError("ThetaPoly: mixed q");
    for (std::size_t j = 0; j < coef_.size(); ++j) coef_[j] -= o.coef_[j];
    return *this;
}

ThetaPoly ThetaPoly::operator-() const {
    ThetaPoly r(q_);
    for (std::size_t j = 0; j < coef_.size(); ++j) r.coef_[j] = -coef_[j];
    return r;
}

ThetaPoly operator*(const ThetaPoly& a, const ThetaPoly& b) {
    if (a.q_ != b.q_) throw InternalError("ThetaPoly: mixed q");
    unsigned long q = a.q_;
    ThetaPoly r(q);
    for (std::size_t i = 0; i < q; ++i) {
        if (a.coef_[i] == 0) continue;
        for (std::size_t j = 0; j < q; ++j) {
            if (b.coef_[j] == 0) continue;
            std::size_t k = i + j;
            Rational term = a.coef_[i] * b.coef_[j];
            if (k >= q) {
                k -= q;
                term *= 2;  // theta^q = 2
            }
            r.coef_[k] += term;
        }
    }
    return r;
}

ThetaPoly& ThetaPoly::mul_rational(const Rational& r) {
    for (auto& c : coef_) c *= r;
    return *this;
}

ThetaPoly ThetaPoly::inverse() const {
    if (is_zero()) throw DomainError("ThetaPoly: inverse of zero");
    unsigned long q = q_;
    if (q == 1 || is_rational()) {
        ThetaPoly r(q);
        r.coef_[0] = Rational(1) / coef_[0];
        return r;
    }
    // Solve  (this * u) = 1  as a q x q rational linear system: column j of
    // the matrix is this * theta^j.
    std::vector<std::vector<Rational>> A(q, std::vector<Rational>(q + 1, Rational(0)));
    for (unsigned long j = 0; j < q; ++j) {
        ThetaPoly col(q);
        col.coef_[j] = 1;
        col = *this * col;
        for (unsigned long i = 0; i < q; ++i) A[i][j] = col.coef_[i];
    }
    A[0][q] = 1;
    // Gaussian elimination with exact pivoting.
    for (unsigned long c = 0; c < q; ++c) {
        unsigned long piv = c;
        while (piv < q && A[piv][c] == 0) ++piv;
        if (piv == q) throw InternalError("ThetaPoly::inverse: singular multiplication matrix");
        std::swap(A[c], A[piv]);
        Rational d = A[c][c];
        for (unsigned long k = c; k <= q; ++k) A[c][k] /= d;
        for (unsigned long r2 = 0; r2 < q; ++r2) {
            if (r2 == c || A[r2][c] == 0) continue;
            Rational f = A[r2][c];
            for (unsigned long k = c; k <= q; ++k) A[r2][k] -= f * A[c][k];
        }
    }
    ThetaPoly u(q);
    for (unsigned long i = 0; i < q; ++i) u.coef_[i] = A[i][q];
    return u;
}

Enclosure ThetaPoly::enclose(mpfr_prec_t prec) const {
    if (is_rational()) return Enclosure::from_rational(coef_[0], prec);
    Enclosure theta = Enclosure::root_of_two(q_, prec);
    // Horner from the top coefficient
    Enclosure acc(prec);
    for (std::size_t idx = coef_.size(); idx-- > 0;) {
        acc = acc * theta;
        acc.add_rational(coef_[idx]);
    }
    return acc;
}

int ThetaPoly::sign() const {
    if (is_zero()) return 0;
    if (is_rational()) return sgn(coef_[0]);
    for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t(1) << 20); prec *= 2) {
        Enclosure e = enclose(prec);
        int s = e.sign();
        if (s != 0) return s;
    }
    // Unreachable for a nonzero element of Q(theta): x^q - 2 is irreducible,
    // so a nonzero polynomial of degree < q cannot vanish at theta.
    throw InternalError("ThetaPoly::sign: refinement failed below precision cap");
}

}  // namespace cantorlab
