#include "cantorlab/loglength.hpp"

#include <algorithm>

#include "cantorlab/errors.hpp"

namespace cantorlab {

void LogLength::insert(std::uint64_t p, const Rational& e) {
    if (e == 0) return;
    auto it = std::lower_bound(exps_.begin(), exps_.end(), p,
                               [](const auto& kv, std::uint64_t key) { return kv.first < key; });
    if (it != exps_.end() && it->first == p) {
        it->second += e;
        if (it->second == 0) exps_.erase(it);
    } else {
        exps_.insert(it, {p, e});
    }
}

LogLength LogLength::base_pow(std::uint64_t base, const Rational& exp) {
    if (base < 2) throw DomainError("LogLength base must be >= 2");
    LogLength r;
    for (auto [p, k] : factor_u64(base)) r.insert(p, exp * k);
    return r;
}

LogLength LogLength::from_rational(const Rational& r) {
    if (r <= 0) throw DomainError("LogLength must be positive");
    LogLength out;
    Integer num = r.get_num(), den = r.get_den();
    if (!num.fits_ulong_p() || !den.fits_ulong_p())
        throw DomainError("rational too large to factor into a LogLength");
    for (auto [p, k] : factor_u64(num.get_ui())) out.insert(p, Rational(k));
    for (auto [p, k] : factor_u64(den.get_ui())) out.insert(p, Rational(-k));
    return out;
}

Rational LogLength::exponent_of(std::uint64_t p) const {
    for (const auto& [q, e] : exps_)
        if (q == p) return e;
    return Rational(0);
}

LogLength& LogLength::operator*=(const LogLength& o) {
    for (const auto& [p, e] : o.exps_) insert(p, e);
    return *this;
}

LogLength LogLength::inverse() const {
    LogLength r = *this;
    for (auto& [p, e] : r.exps_) e = -e;
    return r;
}

LogLength LogLength::pow_int(long k) const {
    LogLength r = *this;
    if (k == 0) return LogLength::one();
    for (auto& [p, e] : r.exps_) e *= k;
    return r;
}

bool LogLength::is_rational() const {
    for (const auto& [p, e] : exps_)
        if (!is_integer(e)) return false;
    return true;
}

Rational LogLength::to_rational() const {
    Rational out(1);
    for (const auto& [p, e] : exps_) {
        if (!is_integer(e)) throw InternalError("LogLength::to_rational on irrational value");
        Integer k = e.get_num();
        unsigned long a = static_cast<unsigned long>(mpz_get_ui(Integer(abs(k)).get_mpz_t()));
        Integer pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), a);
        if (k >= 0)
            out *= Rational(pw);
        else
            out /= Rational(pw);
    }
    return out;
}

Enclosure LogLength::log_enclosure(mpfr_prec_t prec) const {
    Enclosure acc(prec);
    for (const auto& [p, e] : exps_) {
        Enclosure term = Enclosure::log_of_uint(p, prec);
        term.mul_rational(e);
        acc += term;
    }
    return acc;
}

Enclosure LogLength::to_enclosure(mpfr_prec_t prec, bool* underflow) const {
    Enclosure v = log_enclosure(prec + 32).exp();
    if (underflow) *underflow = v.lo_is_zero() && !exps_.empty();
    return v;
}

std::vector<std::pair<std::string, std::string>> LogLength::serialized_exponents() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(exps_.size());
    for (const auto& [p, e] : exps_)
        out.emplace_back(std::to_string(p), rational_to_string(e));
    return out;
}

Cmp ll_cmp(const LogLength& x, const LogLength& y) {
    if (x == y) return Cmp::Equal;
    // Quotient has a nonzero exponent vector by the equality check, so its log
    // is nonzero and the refinement below terminates.
    LogLength d = x * y.inverse();
    if (d.is_rational()) {
        // Pure power comparison degenerates to a rational vs 1 test.
        Rational r = d.to_rational();
        return r < 1 ? Cmp::Less : Cmp::Greater;
    }
    for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t(1) << 20); prec *= 2) {
        Enclosure e = d.log_enclosure(prec);
        int s = e.sign();
        if (s < 0) return Cmp::Less;
        if (s > 0) return Cmp::Greater;
    }
    throw InternalError("ll_cmp: sign not resolved below precision cap");
}

bool ll_at_most_one(const LogLength& x) { return ll_cmp(x, LogLength::one()) != Cmp::Greater; }

}  // namespace cantorlab
