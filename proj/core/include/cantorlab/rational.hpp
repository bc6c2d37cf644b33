#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cantorlab/errors.hpp"

namespace cantorlab {

using Rational = mpq_class;
using Integer = mpz_class;

// floor(r) as an Integer (exact, correct for negative values).
inline Integer floor_rational(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string rational_to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Parses "p/q" or a bare integer; always canonicalized.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        Rational r;
        if (slash == std::string::npos) {
            r = Rational(Integer(s));
        } else {
            Integer num(s.substr(0, slash));
            Integer den(s.substr(slash + 1));
            if (den == 0) throw ConfigError("zero denominator in rational: " + s);
            r = Rational(num, den);
        }
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ConfigError("cannot parse rational: " + s);
    }
}

// Prime factorization by trial division; adequate for the bases and dyadic
// numerators this library sees.
inline std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace cantorlab
