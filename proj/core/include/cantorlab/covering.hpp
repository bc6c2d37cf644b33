#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cantorlab/models.hpp"

namespace cantorlab {

// Lambda(rho) = {w : l(w) <= rho < l(w-)}; with a prefix u the lengths are
// relative to the cylinder of u.
struct LambdaSpec {
    Model model;
    LogLength rho;                // must lie in (0,1)
    std::optional<Word> prefix;   // localized variant
};

struct ClassEntry {
    long n;
    long n1, n2;  // -1,-1 when only per-n resolution is available
    Integer count;
};

struct CoverReport {
    enum class Method { Oracle, Classes };
    Integer count;
    std::vector<ClassEntry> classes;
    long n_min = 0, n_max = 0;      // depth window actually probed
    Method method = Method::Oracle;
    std::vector<std::string> words;  // filled by the oracle on request

    // sum over members of 2^{-|w|}, from the per-n histogram; equals 1 for
    // every complete prefix-free family
    Rational dyadic_mass() const;
    std::map<long, Integer> per_n() const;
};

struct OracleOptions {
    std::int64_t max_nodes = std::int64_t(1) << 26;  // guard, see CANTORLAB_MAX_LEAVES
    bool collect_words = false;
};

// Exact enumeration by first-crossing DFS.  Works for every model family and
// arbitrary localized prefixes; guarded by max_nodes.
CoverReport lambda_oracle(const LambdaSpec& spec, const OracleOptions& opts = {});

// Polynomial-time exact counter over (n, N1, N2) classes with the boundary
// and last-symbol refinements; McMullen/Star global, homogeneous-prefix
// localized, and symmetric models.
CoverReport lambda_classes(const LambdaSpec& spec);

// classes when supported, oracle otherwise
CoverReport lambda_count_auto(const LambdaSpec& spec, const OracleOptions& opts = {});

struct SandwichCounts {
    Integer m_plus_one;  // #Lambda_{M+1}(rho)
    Integer star;        // #Lambda*(rho)
    Integer m;           // #Lambda_M(rho)
};
// The three exact counts; throws InternalError if the proven inequalities
// #Lambda_{M+1} <= #Lambda* <= #Lambda_M ever failed to hold.
SandwichCounts lambda_sandwich(const Model& star_model, const LogLength& rho);

// Number of worker threads used by lambda_classes (0 = hardware default).
void set_covering_threads(unsigned n);
unsigned covering_threads();

}  // namespace cantorlab
