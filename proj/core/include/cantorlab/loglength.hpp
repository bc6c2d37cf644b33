#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cantorlab/enclosure.hpp"
#include "cantorlab/rational.hpp"

namespace cantorlab {

enum class Cmp { Less, Equal, Greater };

// A positive real of the form  prod_p p^{e_p}  over finitely many primes p,
// with rational exponents e_p.  log(value) = sum e_p log p.  Every integer
// base is factored before insertion, so two values are equal as reals exactly
// when their exponent vectors coincide; a nonzero rational combination of
// logs of distinct primes is irrational, which is what makes the interval
// comparison below terminate.
class LogLength {
public:
    LogLength() = default;  // the value 1

    static LogLength one() { return {}; }
    // base^exp for an integer base >= 2.
    static LogLength base_pow(std::uint64_t base, const Rational& exp);
    // exact positive rational
    static LogLength from_rational(const Rational& r);

    bool is_one() const { return exps_.empty(); }
    const std::vector<std::pair<std::uint64_t, Rational>>& exponents() const { return exps_; }

    // Rational exponent of a given prime (zero if absent).
    Rational exponent_of(std::uint64_t p) const;

    LogLength& operator*=(const LogLength& o);
    friend LogLength operator*(LogLength a, const LogLength& b) { a *= b; return a; }
    LogLength inverse() const;
    friend LogLength operator/(const LogLength& a, const LogLength& b) { return a * b.inverse(); }
    LogLength pow_int(long k) const;

    bool operator==(const LogLength& o) const { return exps_ == o.exps_; }

    // True when every exponent is an integer, i.e. the value is rational.
    bool is_rational() const;
    // Only valid when is_rational().
    Rational to_rational() const;

    // Enclosure of log(value) at the given precision.
    Enclosure log_enclosure(mpfr_prec_t prec) const;

    // Correctly-rounded enclosure of the value itself.  `underflow` is set when
    // the lower bound collapses to zero at this precision's exponent range.
    Enclosure to_enclosure(mpfr_prec_t prec, bool* underflow = nullptr) const;
    double to_double() const { return to_enclosure(96).mid_double(); }

    // JSON-ready serialization {prime: "num/den"}.
    std::vector<std::pair<std::string, std::string>> serialized_exponents() const;

private:
    // sorted by prime, no zero exponents
    std::vector<std::pair<std::uint64_t, Rational>> exps_;
    void insert(std::uint64_t p, const Rational& e);
};

// Total, deterministic comparison; starts at 128 bits and doubles the working
// precision until the interval for log(x) - log(y) excludes zero (exact
// equality is decided syntactically first).
Cmp ll_cmp(const LogLength& x, const LogLength& y);

inline bool ll_le(const LogLength& x, const LogLength& y) { return ll_cmp(x, y) != Cmp::Greater; }
inline bool ll_lt(const LogLength& x, const LogLength& y) { return ll_cmp(x, y) == Cmp::Less; }

// value in (0,1]  <=>  log(value) <= 0.
bool ll_at_most_one(const LogLength& x);

}  // namespace cantorlab
