#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "cantorlab/rational.hpp"

namespace cantorlab {

// RAII wrapper for a single mpfr_t.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

private:
    mpfr_t v_;
};

// Closed interval [lo, hi] guaranteed to contain the exact real it stands for.
// All operations round lo down and hi up.
class Enclosure {
public:
    explicit Enclosure(mpfr_prec_t prec = 128) : lo_(prec), hi_(prec), prec_(prec) {}

    static Enclosure exact_zero(mpfr_prec_t prec = 128) { return Enclosure(prec); }
    static Enclosure from_rational(const Rational& r, mpfr_prec_t prec);
    static Enclosure from_integer(const Integer& z, mpfr_prec_t prec);
    // log(p) for an integer p >= 2.
    static Enclosure log_of_uint(std::uint64_t p, mpfr_prec_t prec);
    // 2^(1/q)
    static Enclosure root_of_two(unsigned long q, mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    mpfr_srcptr lo() const { return lo_.get(); }
    mpfr_srcptr hi() const { return hi_.get(); }

    Enclosure& operator+=(const Enclosure& o);
    Enclosure& operator-=(const Enclosure& o);
    friend Enclosure operator+(Enclosure a, const Enclosure& b) { a += b; return a; }
    friend Enclosure operator-(Enclosure a, const Enclosure& b) { a -= b; return a; }
    Enclosure operator-() const;
    friend Enclosure operator*(const Enclosure& a, const Enclosure& b);

    Enclosure& mul_rational(const Rational& r);
    Enclosure& add_rational(const Rational& r);
    // Componentwise exp (monotone, so endpoint images with outward rounding).
    Enclosure exp() const;

    bool contains_zero() const {
        return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
    }
    // -1, 0 (straddles zero), +1
    int sign() const {
        if (mpfr_sgn(lo_.get()) > 0) return 1;
        if (mpfr_sgn(hi_.get()) < 0) return -1;
        return 0;
    }
    double width() const;
    double lo_double() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }
    double mid_double() const { return 0.5 * (lo_double() + hi_double()); }
    bool lo_is_zero() const { return mpfr_zero_p(lo_.get()); }

    // Decimal rendering of the two bounds, enough digits for the precision.
    std::pair<std::string, std::string> to_decimal_strings() const;

    void set_bounds(const Real& lo, const Real& hi) { lo_ = lo; hi_ = hi; }

private:
    Real lo_, hi_;
    mpfr_prec_t prec_;
};

}  // namespace cantorlab
