#include "cantorlab/enclosure.hpp"

#include <map>
#include <mutex>

namespace cantorlab {

Enclosure Enclosure::from_rational(const Rational& r, mpfr_prec_t prec) {
    Enclosure e(prec);
    mpfr_set_q(e.lo_.get(), r.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(e.hi_.get(), r.get_mpq_t(), MPFR_RNDU);
    return e;
}

Enclosure Enclosure::from_integer(const Integer& z, mpfr_prec_t prec) {
    Enclosure e(prec);
    mpfr_set_z(e.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(e.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
    return e;
}

namespace {
// log(p) enclosures are requested for the same handful of primes at the same
// handful of precisions over and over; cache them.
struct LogCache {
    std::mutex mtx;
    std::map<std::pair<std::uint64_t, mpfr_prec_t>, Enclosure> map;
};
LogCache& log_cache() {
    static LogCache c;
    return c;
}
}  // namespace

Enclosure Enclosure::log_of_uint(std::uint64_t p, mpfr_prec_t prec) {
    auto& c = log_cache();
    std::lock_guard<std::mutex> lock(c.mtx);
    auto key = std::make_pair(p, prec);
    auto it = c.map.find(key);
    if (it != c.map.end()) return it->second;
    Enclosure e(prec);
    mpfr_set_ui(e.lo_.get(), static_cast<unsigned long>(p), MPFR_RNDD);
    mpfr_log(e.lo_.get(), e.lo_.get(), MPFR_RNDD);
    mpfr_set_ui(e.hi_.get(), static_cast<unsigned long>(p), MPFR_RNDU);
    mpfr_log(e.hi_.get(), e.hi_.get(), MPFR_RNDU);
    c.map.emplace(key, e);
    return e;
}

Enclosure Enclosure::root_of_two(unsigned long q, mpfr_prec_t prec) {
    Enclosure e(prec);
    mpfr_set_ui(e.lo_.get(), 2, MPFR_RNDN);
    mpfr_rootn_ui(e.lo_.get(), e.lo_.get(), q, MPFR_RNDD);
    mpfr_set_ui(e.hi_.get(), 2, MPFR_RNDN);
    mpfr_rootn_ui(e.hi_.get(), e.hi_.get(), q, MPFR_RNDU);
    return e;
}

Enclosure& Enclosure::operator+=(const Enclosure& o) {
    mpfr_add(lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return *this;
}

Enclosure& Enclosure::operator-=(const Enclosure& o) {
    mpfr_sub(lo_.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi_.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    return *this;
}

Enclosure Enclosure::operator-() const {
    Enclosure r(prec_);
    mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    Enclosure r(a.prec_);
    // Four corner products, min rounded down / max rounded up.
    Real cand_lo(a.prec_), cand_hi(a.prec_), t(a.prec_);
    bool first = true;
    mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
    mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
    for (auto av : as) {
        for (auto bv : bs) {
            mpfr_mul(t.get(), av, bv, MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), cand_lo.get()) < 0) mpfr_set(cand_lo.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), av, bv, MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), cand_hi.get()) > 0) mpfr_set(cand_hi.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    }
    r.set_bounds(cand_lo, cand_hi);
    return r;
}

Enclosure& Enclosure::mul_rational(const Rational& r) {
    *this = *this * Enclosure::from_rational(r, prec_);
    return *this;
}

Enclosure& Enclosure::add_rational(const Rational& r) {
    Enclosure qe = Enclosure::from_rational(r, prec_);
    *this += qe;
    return *this;
}

Enclosure Enclosure::exp() const {
    Enclosure r(prec_);
    mpfr_exp(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

double Enclosure::width() const {
    Real w(prec_);
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

std::pair<std::string, std::string> Enclosure::to_decimal_strings() const {
    auto render = [&](mpfr_srcptr v, mpfr_rnd_t rnd) {
        char* s = nullptr;
        // %R*e gives scientific notation with the requested rounding.
        mpfr_asprintf(&s, rnd == MPFR_RNDD ? "%.30RDe" : "%.30RUe", v);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    };
    return {render(lo_.get(), MPFR_RNDD), render(hi_.get(), MPFR_RNDU)};
}

}  // namespace cantorlab
