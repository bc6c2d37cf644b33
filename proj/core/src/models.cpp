#include "cantorlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cantorlab/errors.hpp"

namespace cantorlab {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// CSequence

CSequence CSequence::constant(const Rational& c) {
    CSequence s;
    s.kind_ = Kind::Constant;
    s.values_ = {c};
    s.validate();
    return s;
}

CSequence CSequence::two_value_blocks(const Rational& c_odd, const Rational& c_even,
                                      BlockGrowth growth, std::vector<std::int64_t> lengths) {
    CSequence s;
    s.kind_ = Kind::TwoValueBlocks;
    s.values_ = {c_odd, c_even};
    s.growth_ = growth;
    s.lengths_ = std::move(lengths);
    if (growth == BlockGrowth::Explicit) {
        if (s.lengths_.size() < 2) throw ModelInvalid("explicit block schedule needs >= 2 lengths");
        for (std::size_t i = 0; i < s.lengths_.size(); ++i) {
            if (s.lengths_[i] <= 0) throw ModelInvalid("block lengths must be positive");
            if (i > 0 && s.lengths_[i] <= s.lengths_[i - 1])
                throw ModelInvalid("block lengths must be strictly increasing");
        }
        // Growing ratios stand in for the unbounded-ratio requirement; a
        // constant or ratio-bounded schedule cannot separate the Cesaro limits.
        for (std::size_t i = 2; i < s.lengths_.size(); ++i) {
            Rational r_prev(s.lengths_[i - 1], s.lengths_[i - 2]);
            Rational r_cur(s.lengths_[i], s.lengths_[i - 1]);
            if (r_cur <= r_prev)
                throw ModelInvalid("block length ratios must grow (got a ratio-bounded schedule)");
        }
    }
    s.validate();
    return s;
}

CSequence CSequence::half_minus_geometric(const Rational& a, const Rational& r) {
    CSequence s;
    s.kind_ = Kind::HalfMinusGeometric;
    s.a_ = a;
    s.r_ = r;
    if (a <= 0 || r <= 0 || r >= 1) throw ModelInvalid("half_minus_geometric needs a > 0, 0 < r < 1");
    if (a * r >= Rational(1, 2)) throw ModelInvalid("half_minus_geometric: c_1 would be <= 0");
    s.validate();
    return s;
}

CSequence CSequence::reciprocal(long offset) {
    CSequence s;
    s.kind_ = Kind::Reciprocal;
    s.offset_ = offset;
    if (offset < 2) throw ModelInvalid("reciprocal c_n = 1/(n+offset) needs offset >= 2");
    return s;
}

CSequence CSequence::explicit_list(std::vector<Rational> values) {
    CSequence s;
    s.kind_ = Kind::Explicit;
    s.values_ = std::move(values);
    if (s.values_.empty()) throw ModelInvalid("explicit c list is empty");
    s.validate();
    return s;
}

void CSequence::validate() const {
    for (const auto& v : values_)
        if (v <= 0 || v >= Rational(1, 2))
            throw ModelInvalid("every c_n must satisfy 0 < c_n < 1/2");
}

std::vector<std::int64_t> CSequence::ends_up_to(std::int64_t n) const {
    // block k covers positions (ends[k-2], ends[k-1]]; recomputed per call so
    // shared models stay safe to probe from several threads
    std::vector<std::int64_t> ends;
    ends.push_back(growth_ == BlockGrowth::Factorial ? 1 : lengths_[0]);
    std::int64_t len_prev = ends[0];
    while (ends.back() < n) {
        std::size_t k = ends.size() + 1;  // next block index, 1-based
        std::int64_t len;
        if (growth_ == BlockGrowth::Factorial) {
            // block k has length k!, the previous one (k-1)!
            if (len_prev > std::numeric_limits<std::int64_t>::max() / static_cast<std::int64_t>(k))
                throw TooLarge("block schedule overflow");
            len = len_prev * static_cast<std::int64_t>(k);
        } else {
            if (k > lengths_.size()) throw ModelInvalid("explicit block schedule exhausted");
            len = lengths_[k - 1];
        }
        if (ends.back() > std::numeric_limits<std::int64_t>::max() - len)
            throw TooLarge("block schedule overflow");
        ends.push_back(ends.back() + len);
        len_prev = len;
    }
    return ends;
}

std::int64_t CSequence::block_of(std::int64_t n) const {
    auto ends = ends_up_to(n);
    auto it = std::lower_bound(ends.begin(), ends.end(), n);
    return static_cast<std::int64_t>(it - ends.begin()) + 1;
}

Rational CSequence::value(std::int64_t n) const {
    if (n < 1) throw DomainError("c_n is 1-based");
    switch (kind_) {
        case Kind::Constant:
            return values_[0];
        case Kind::TwoValueBlocks:
            return block_of(n) % 2 == 1 ? values_[0] : values_[1];
        case Kind::HalfMinusGeometric: {
            // r^n by binary exponentiation on mpq
            Rational acc(1);
            std::int64_t e = n;
            Rational base = r_;
            while (e > 0) {
                if (e & 1) acc *= base;
                base *= base;
                e >>= 1;
            }
            return Rational(1, 2) - a_ * acc;
        }
        case Kind::Reciprocal:
            return Rational(1, n + offset_);
        case Kind::Explicit:
            if (static_cast<std::size_t>(n) > values_.size())
                throw DomainError("explicit c list exhausted at n=" + std::to_string(n));
            return values_[static_cast<std::size_t>(n - 1)];
    }
    throw InternalError("unreachable");
}

std::vector<std::int64_t> CSequence::block_ends(std::int64_t n_max) const {
    if (kind_ != Kind::TwoValueBlocks) return {};
    std::vector<std::int64_t> out;
    for (auto e : ends_up_to(n_max))
        if (e <= n_max) out.push_back(e);
    return out;
}

CSequence::Certificate CSequence::certificate() const {
    Certificate cert;
    auto crit = [](const Rational& cn, const Rational& cn1) -> Rational {
        return cn * (1 - 2 * cn1) / (1 - 2 * cn);
    };
    switch (kind_) {
        case Kind::Constant: {
            Rational v = crit(values_[0], values_[0]);
            cert = {Certificate::Status::Pass, v, v, "constant criterion sequence"};
            break;
        }
        case Kind::TwoValueBlocks: {
            // The criterion sequence takes only the four pair values; both
            // block values recur, so inf/sup are the min/max of those.
            std::vector<Rational> vals = {crit(values_[0], values_[0]), crit(values_[0], values_[1]),
                                          crit(values_[1], values_[0]), crit(values_[1], values_[1])};
            Rational lo = vals[0], hi = vals[0];
            for (const auto& v : vals) {
                if (v < lo) lo = v;
                if (v > hi) hi = v;
            }
            cert = {Certificate::Status::Pass, lo, hi, "finitely many criterion values"};
            break;
        }
        case Kind::HalfMinusGeometric: {
            // 1 - 2c_n = 2 a r^n, so the criterion value is c_n r: increasing
            // in n with limit r/2.
            Rational first = (Rational(1, 2) - a_ * r_) * r_;
            cert = {Certificate::Status::Pass, first, r_ / 2, "criterion sequence is c_n * r"};
            break;
        }
        case Kind::Reciprocal:
            cert = {Certificate::Status::Fail, Rational(0), Rational(1),
                    "c_n -> 0 forces the criterion infimum to 0"};
            break;
        case Kind::Explicit:
            cert.status = Certificate::Status::DepthBounded;
            cert.note = "finite list: only depth-bounded evidence available";
            break;
    }
    return cert;
}

// ---------------------------------------------------------------------------
// length functions

namespace {
Rational two_exponent(const Rational& beta, const OnesSplit& s) {
    return (1 - beta) * s.n1 - beta * s.n2;
}
}  // namespace

LogLength mc_length(const McMullenModel& m, const Word& w) {
    long n = w.size();
    if (n == 0) return LogLength::one();
    OnesSplit s = ones_split(w, m.beta);
    LogLength out = LogLength::base_pow(2, two_exponent(m.beta, s));
    out *= LogLength::base_pow(static_cast<std::uint64_t>(m.M), Rational(-n));
    return out;
}

LogLength star_length(const StarModel& m, const Word& w) {
    long n = w.size();
    if (n == 0) return LogLength::one();
    OnesSplit s = ones_split(w, m.beta);
    LogLength out = LogLength::base_pow(2, two_exponent(m.beta, s));
    auto [cm, cm1] = m.seq->count_split(n);
    if (cm) out *= LogLength::base_pow(static_cast<std::uint64_t>(m.M()), Rational(-cm));
    if (cm1) out *= LogLength::base_pow(static_cast<std::uint64_t>(m.M() + 1), Rational(-cm1));
    return out;
}

LogLength star_relative_length(const StarModel& m, const Word& u, const Word& w) {
    long k = u.size(), n = w.size();
    if (n == 0) return LogLength::one();
    long bk = floor_boundary(k, m.beta);
    long bnk = floor_boundary(n + k, m.beta);
    long t = bnk - bk;  // window of v = u_{bk+1..k} w
    // ones among the first t symbols of v
    long tail_u = k - bk;
    long ones_v;
    if (t <= tail_u) {
        ones_v = u.ones_in_prefix(bk + t) - u.ones_in_prefix(bk);
    } else {
        ones_v = (u.ones() - u.ones_in_prefix(bk)) + w.ones_in_prefix(t - tail_u);
    }
    Rational e2 = ones_v - m.beta * w.ones();
    LogLength out = LogLength::base_pow(2, e2);
    auto [cm, cm1] = m.seq->count_split_window(k, n);
    if (cm) out *= LogLength::base_pow(static_cast<std::uint64_t>(m.M()), Rational(-cm));
    if (cm1) out *= LogLength::base_pow(static_cast<std::uint64_t>(m.M() + 1), Rational(-cm1));
    return out;
}

LogLength sym_length(const SymmetricModel& m, const Word& w) {
    LogLength out;
    for (long j = 1; j <= w.size(); ++j) out *= LogLength::from_rational(m.c.value(j));
    return out;
}

Rational sym_length_rational(const SymmetricModel& m, long n) {
    Rational out(1);
    for (long j = 1; j <= n; ++j) out *= m.c.value(j);
    return out;
}

SymPoint sym_point(const SymmetricModel& m, const Word& coding, long depth) {
    if (depth < 1) throw DomainError("sym_point: depth >= 1");
    if (depth > coding.size()) depth = coding.size();
    Rational prod(1);  // prod_{j<n} c_j
    Rational sum(0);
    for (long n = 1; n <= depth; ++n) {
        Rational cn = m.c.value(n);
        if (coding[n - 1]) sum += prod * (1 - cn);
        prod *= cn;
    }
    return {sum, prod};
}

SymmetricModel box_nonexist_sequence(CSequence::BlockGrowth growth,
                                     std::vector<std::int64_t> lengths, long certify_blocks) {
    CSequence c = CSequence::two_value_blocks(Rational(1, 3), Rational(1, 4), growth,
                                              std::move(lengths));
    // Certify that the Cesaro averages of log c_n computed at block ends
    // oscillate: the average at the end of a late even block must sit strictly
    // below the average at the end of the preceding odd block.
    std::int64_t horizon = 1;
    std::vector<std::int64_t> ends;
    {
        // materialize certify_blocks block ends
        std::int64_t probe = 1;
        while (true) {
            auto es = c.block_ends(probe);
            if (static_cast<long>(es.size()) >= certify_blocks) { ends = es; break; }
            probe *= 4;
            if (probe > (std::int64_t(1) << 50)) throw TooLarge("block certification horizon overflow");
        }
        horizon = ends[static_cast<std::size_t>(certify_blocks - 1)];
    }
    // averages: -(#thirds * log 3 + #quarters * log 4) / n, exact counts;
    // blocks with 0-based index 0,2,... carry 1/3
    double log3 = std::log(3.0), log4 = std::log(4.0);
    std::int64_t thirds = 0;
    std::int64_t pos = 0;
    double last_odd_avg = 0, last_even_avg = 0;
    bool seen_odd = false, seen_even = false;
    for (std::size_t k = 0; k < ends.size() && ends[k] <= horizon; ++k) {
        std::int64_t len = ends[k] - pos;
        if (k % 2 == 0) thirds += len;
        pos = ends[k];
        double avg = -(static_cast<double>(thirds) * log3 +
                       static_cast<double>(pos - thirds) * log4) /
                     static_cast<double>(pos);
        if (k % 2 == 0) { last_odd_avg = avg; seen_odd = true; }
        else { last_even_avg = avg; seen_even = true; }
    }
    if (!seen_odd || !seen_even || !(last_odd_avg - last_even_avg > 0.5 * (log4 - log3)))
        throw ModelInvalid("block schedule fails to separate the Cesaro limits");
    return SymmetricModel{std::move(c)};
}

// ---------------------------------------------------------------------------
// Model wrapper and JSON I/O

Model Model::mcmullen(const Rational& beta, long M) {
    if (beta <= 0 || beta >= 1) throw ModelInvalid("beta must lie in (0,1)");
    if (M < 100) throw ModelInvalid("M must be >= 100");
    Model m;
    m.family_ = Family::McMullen;
    m.mc_ = McMullenModel{beta, M};
    return m;
}

Model Model::star(const Rational& beta, long M, BaseSequence::Kind kind,
                  std::vector<std::int64_t> values) {
    if (beta <= 0 || beta >= 1) throw ModelInvalid("beta must lie in (0,1)");
    Model m;
    m.family_ = Family::Star;
    m.star_ = StarModel{beta, std::make_shared<BaseSequence>(M, kind, std::move(values))};
    return m;
}

Model Model::symmetric(CSequence c) {
    Model m;
    m.family_ = Family::Symmetric;
    m.sym_ = SymmetricModel{std::move(c)};
    return m;
}

const Rational& Model::beta() const {
    switch (family_) {
        case Family::McMullen: return mc_->beta;
        case Family::Star: return star_->beta;
        case Family::Symmetric: throw InternalError("symmetric models have no beta");
    }
    throw InternalError("unreachable");
}

unsigned long Model::theta_q() const {
    if (family_ == Family::Symmetric) return 1;
    return static_cast<unsigned long>(beta().get_den().get_ui());
}

LogLength Model::length(const Word& w) const {
    switch (family_) {
        case Family::McMullen: return mc_length(*mc_, w);
        case Family::Star: return star_length(*star_, w);
        case Family::Symmetric: return sym_length(*sym_, w);
    }
    throw InternalError("unreachable");
}

std::pair<Rational, Rational> Model::ratio_bounds() const {
    switch (family_) {
        case Family::McMullen:
            return {Rational(1, 2 * mc_->M), Rational(2, mc_->M)};
        case Family::Star:
            return {Rational(1, 2 * star_->M() + 2), Rational(2, star_->M())};
        case Family::Symmetric: {
            // Probe a prefix; certificates pin the families used in practice.
            Rational lo = sym_->c.value(1), hi = lo;
            for (std::int64_t n = 2; n <= 64; ++n) {
                Rational v;
                try {
                    v = sym_->c.value(n);
                } catch (const DomainError&) {
                    break;
                }
                if (v < lo) lo = v;
                if (v > hi) hi = v;
            }
            return {lo, hi};
        }
    }
    throw InternalError("unreachable");
}

std::string Model::describe() const {
    switch (family_) {
        case Family::McMullen:
            return "mcmullen(beta=" + rational_to_string(mc_->beta) + ", M=" + std::to_string(mc_->M) + ")";
        case Family::Star:
            return "star(beta=" + rational_to_string(star_->beta) + ", M=" + std::to_string(star_->M()) + ")";
        case Family::Symmetric:
            return "symmetric";
    }
    return "?";
}

namespace {

void reject_unknown_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) { ok = true; break; }
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

CSequence csequence_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("c: expected object with 'kind'");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "value"}, "c");
        return CSequence::constant(parse_rational(j.at("value").get<std::string>()));
    }
    if (kind == "blocks") {
        reject_unknown_keys(j, {"kind", "values", "block_growth", "block_lengths"}, "c");
        auto vals = j.at("values");
        if (!vals.is_array() || vals.size() != 2) throw ConfigError("c.values: expected two rationals");
        auto growth = CSequence::BlockGrowth::Factorial;
        std::vector<std::int64_t> lengths;
        if (j.contains("block_growth")) {
            std::string g = j.at("block_growth").get<std::string>();
            if (g == "factorial")
                growth = CSequence::BlockGrowth::Factorial;
            else if (g == "explicit")
                growth = CSequence::BlockGrowth::Explicit;
            else
                throw ConfigError("c.block_growth: factorial|explicit");
        }
        if (j.contains("block_lengths"))
            for (const auto& v : j.at("block_lengths")) lengths.push_back(v.get<std::int64_t>());
        return CSequence::two_value_blocks(parse_rational(vals[0].get<std::string>()),
                                           parse_rational(vals[1].get<std::string>()), growth,
                                           std::move(lengths));
    }
    if (kind == "half_minus_geometric") {
        reject_unknown_keys(j, {"kind", "a", "r"}, "c");
        return CSequence::half_minus_geometric(parse_rational(j.at("a").get<std::string>()),
                                               parse_rational(j.at("r").get<std::string>()));
    }
    if (kind == "reciprocal") {
        reject_unknown_keys(j, {"kind", "offset"}, "c");
        return CSequence::reciprocal(j.at("offset").get<long>());
    }
    if (kind == "explicit") {
        reject_unknown_keys(j, {"kind", "values"}, "c");
        std::vector<Rational> vals;
        for (const auto& v : j.at("values")) vals.push_back(parse_rational(v.get<std::string>()));
        return CSequence::explicit_list(std::move(vals));
    }
    throw ConfigError("c.kind: constant|blocks|half_minus_geometric|reciprocal|explicit");
}

}  // namespace

Model Model::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("model JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family")) throw ConfigError("model: expected {family: ...}");
    std::string family = j.at("family").get<std::string>();
    try {
        if (family == "mcmullen") {
            reject_unknown_keys(j, {"family", "beta", "M"}, "model");
            return Model::mcmullen(parse_rational(j.at("beta").get<std::string>()),
                                   j.at("M").get<long>());
        }
        if (family == "star") {
            reject_unknown_keys(j, {"family", "beta", "M", "sequence"}, "model");
            auto kind = BaseSequence::Kind::Factorial;
            std::vector<std::int64_t> values;
            if (j.contains("sequence")) {
                const auto& s = j.at("sequence");
                reject_unknown_keys(s, {"kind", "values"}, "model.sequence");
                std::string ks = s.at("kind").get<std::string>();
                if (ks == "factorial")
                    kind = BaseSequence::Kind::Factorial;
                else if (ks == "explicit") {
                    kind = BaseSequence::Kind::Explicit;
                    for (const auto& v : s.at("values")) values.push_back(v.get<std::int64_t>());
                } else
                    throw ConfigError("sequence.kind: factorial|explicit");
            }
            return Model::star(parse_rational(j.at("beta").get<std::string>()), j.at("M").get<long>(),
                               kind, std::move(values));
        }
        if (family == "symmetric") {
            reject_unknown_keys(j, {"family", "c"}, "model");
            return Model::symmetric(csequence_from_json(j.at("c")));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model JSON: ") + e.what());
    }
    throw ConfigError("family: mcmullen|star|symmetric");
}

Model Model::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Model::to_json_text() const {
    ordered_json j;
    switch (family_) {
        case Family::McMullen:
            j["family"] = "mcmullen";
            j["beta"] = rational_to_string(mc_->beta);
            j["M"] = mc_->M;
            break;
        case Family::Star: {
            j["family"] = "star";
            j["beta"] = rational_to_string(star_->beta);
            j["M"] = star_->M();
            ordered_json s;
            s["kind"] = star_->seq->kind() == BaseSequence::Kind::Factorial ? "factorial" : "explicit";
            j["sequence"] = s;
            break;
        }
        case Family::Symmetric: {
            j["family"] = "symmetric";
            ordered_json c;
            const CSequence& cs = sym_->c;
            switch (cs.kind()) {
                case CSequence::Kind::Constant:
                    c["kind"] = "constant";
                    c["value"] = rational_to_string(cs.values()[0]);
                    break;
                case CSequence::Kind::TwoValueBlocks:
                    c["kind"] = "blocks";
                    c["values"] = {rational_to_string(cs.values()[0]),
                                   rational_to_string(cs.values()[1])};
                    c["block_growth"] =
                        cs.growth() == CSequence::BlockGrowth::Factorial ? "factorial" : "explicit";
                    break;
                case CSequence::Kind::HalfMinusGeometric:
                    c["kind"] = "half_minus_geometric";
                    c["a"] = rational_to_string(cs.param_a());
                    c["r"] = rational_to_string(cs.param_r());
                    break;
                case CSequence::Kind::Reciprocal:
                    c["kind"] = "reciprocal";
                    c["offset"] = cs.offset();
                    break;
                case CSequence::Kind::Explicit: {
                    c["kind"] = "explicit";
                    std::vector<std::string> vals;
                    for (const auto& v : cs.values()) vals.push_back(rational_to_string(v));
                    c["values"] = vals;
                    break;
                }
            }
            j["c"] = c;
            break;
        }
    }
    return j.dump();
}

}  // namespace cantorlab
