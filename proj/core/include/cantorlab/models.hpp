#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cantorlab/base_sequence.hpp"
#include "cantorlab/loglength.hpp"
#include "cantorlab/word.hpp"

namespace cantorlab {

enum class Family { McMullen, Star, Symmetric };

// l(w) = 2^{(1-beta)N1 - beta N2} * M^{-n}
struct McMullenModel {
    Rational beta;
    long M = 128;
};

// l*(w) = 2^{(1-beta)N1 - beta N2} * (prod_i M_i)^{-1}
struct StarModel {
    Rational beta;
    std::shared_ptr<BaseSequence> seq;
    long M() const { return seq->M(); }
};

// The per-level contraction ratios c_n of a symmetric Cantor set, as a named
// generator so the bi-Lipschitz criterion can be certified per family and not
// only probed to finite depth.
class CSequence {
public:
    enum class Kind {
        Constant,          // c_n = c
        TwoValueBlocks,    // c_n = c_odd on odd blocks, c_even on even blocks
        HalfMinusGeometric,// c_n = 1/2 - a r^n
        Reciprocal,        // c_n = 1/(n + offset)
        Explicit,          // finite list; probing past the end is an error
    };
    enum class BlockGrowth { Factorial, Explicit };

    struct Certificate {
        enum class Status { Pass, Fail, DepthBounded };
        Status status = Status::DepthBounded;
        // Valid bounds on the criterion sequence c_n(1-2c_{n+1})/(1-2c_n)
        // when status != DepthBounded.
        Rational inf_bound, sup_bound;
        std::string note;
    };

    static CSequence constant(const Rational& c);
    static CSequence two_value_blocks(const Rational& c_odd, const Rational& c_even,
                                      BlockGrowth growth = BlockGrowth::Factorial,
                                      std::vector<std::int64_t> lengths = {});
    static CSequence half_minus_geometric(const Rational& a, const Rational& r);
    static CSequence reciprocal(long offset);
    static CSequence explicit_list(std::vector<Rational> values);

    Kind kind() const { return kind_; }
    Rational value(std::int64_t n) const;  // c_n, 1-based
    Certificate certificate() const;

    // Block-end positions <= n_max (TwoValueBlocks only; empty otherwise).
    std::vector<std::int64_t> block_ends(std::int64_t n_max) const;
    bool has_blocks() const { return kind_ == Kind::TwoValueBlocks; }

    const Rational& param_a() const { return a_; }
    const Rational& param_r() const { return r_; }
    long offset() const { return offset_; }
    const std::vector<Rational>& values() const { return values_; }
    BlockGrowth growth() const { return growth_; }
    const std::vector<std::int64_t>& explicit_lengths() const { return lengths_; }

private:
    Kind kind_ = Kind::Constant;
    Rational a_, r_;                     // kind-specific parameters
    long offset_ = 0;
    std::vector<Rational> values_;       // Constant/TwoValueBlocks/Explicit payload
    BlockGrowth growth_ = BlockGrowth::Factorial;
    std::vector<std::int64_t> lengths_;  // explicit block lengths
    std::vector<std::int64_t> ends_up_to(std::int64_t n) const;
    std::int64_t block_of(std::int64_t n) const;  // 1-based block index
    void validate() const;
};

struct SymmetricModel {
    CSequence c;
};

// A loaded model of any family plus the knobs shared by the whole pipeline.
class Model {
public:
    static Model mcmullen(const Rational& beta, long M);
    static Model star(const Rational& beta, long M,
                      BaseSequence::Kind kind = BaseSequence::Kind::Factorial,
                      std::vector<std::int64_t> values = {});
    static Model symmetric(CSequence c);

    static Model from_json_text(const std::string& text);
    static Model from_json_file(const std::string& path);
    std::string to_json_text() const;

    Family family() const { return family_; }
    const McMullenModel& mc() const { return *mc_; }
    const StarModel& star_model() const { return *star_; }
    const SymmetricModel& sym() const { return *sym_; }

    // beta for the two McMullen-style families; symmetric sets have none.
    const Rational& beta() const;
    // Denominator q of beta: every interval length lives in Q(2^{1/q}).
    unsigned long theta_q() const;

    LogLength length(const Word& w) const;
    // Per-step child ratio bounds l(wi)/l(w) in [lo, hi], used for depth
    // windows and DFS guards.  For symmetric models these are bounds over the
    // probed range only unless the certificate pins them.
    std::pair<Rational, Rational> ratio_bounds() const;

    std::string describe() const;

private:
    Family family_;
    std::optional<McMullenModel> mc_;
    std::optional<StarModel> star_;
    std::optional<SymmetricModel> sym_;
};

LogLength mc_length(const McMullenModel& m, const Word& w);
LogLength star_length(const StarModel& m, const Word& w);
// l*(uw)/l*(u) via the closed form; equals star_length(uw)/star_length(u).
LogLength star_relative_length(const StarModel& m, const Word& u, const Word& w);
// Factored form; fine whenever the c_n numerators stay small enough to factor
// (all the built-in generators at the depths the geometry probes).
LogLength sym_length(const SymmetricModel& m, const Word& w);
// Plain rational product prod_{j<=n} c_j; the large-depth counting paths use
// this to avoid factoring.
Rational sym_length_rational(const SymmetricModel& m, long n);

// Partial sum of the additive representation sum_n w_n u_n with
// u_1 = 1 - c_1,  u_n = (prod_{j<n} c_j)(1 - c_n); `error` is the exact tail
// bound prod_{j<=depth} c_j.
struct SymPoint {
    Rational value;
    Rational error;
};
SymPoint sym_point(const SymmetricModel& m, const Word& coding, long depth);

// The blockwise {1/3, 1/4} model whose Cesaro averages of log c_n oscillate;
// rejects block schedules without growing ratios and certifies the
// oscillation by evaluating the averages at block ends.
SymmetricModel box_nonexist_sequence(CSequence::BlockGrowth growth = CSequence::BlockGrowth::Factorial,
                                     std::vector<std::int64_t> lengths = {},
                                     long certify_blocks = 8);

}  // namespace cantorlab
