#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

#include "cantorlab/errors.hpp"

namespace cantorlab {

// The block sequence (M_i): M on [N_{2k-1}, N_{2k}), M+1 on [N_{2k}, N_{2k+1}),
// for a strictly increasing (N_k) with N_1 = 1.  The default generator is
// N_k = k!, which has N_{k+1}/N_k -> infinity.  Indices are probed lazily;
// the materialized prefix of (N_k) grows under a mutex so counters can share
// one sequence across threads.
class BaseSequence {
public:
    enum class Kind { Factorial, Explicit };

    BaseSequence(long M, Kind kind = Kind::Factorial, std::vector<std::int64_t> values = {});

    long M() const { return M_; }
    Kind kind() const { return kind_; }

    // M_i for i >= 1.
    long M_at(std::int64_t i) const;

    // #{1 <= i <= n : M_i = M} and #{...: M_i = M+1}; O(#blocks) exact.
    std::pair<std::int64_t, std::int64_t> count_split(std::int64_t n) const;
    // Same but over the window (k, k+n].
    std::pair<std::int64_t, std::int64_t> count_split_window(std::int64_t k, std::int64_t n) const;

    // N_j for j >= 1 (1-based).
    std::int64_t N(std::size_t j) const;
    // Largest j with N_j <= i.
    std::size_t block_index(std::int64_t i) const;

private:
    void ensure_covers(std::int64_t i) const;

    long M_;
    Kind kind_;
    mutable std::vector<std::int64_t> n_;  // materialized N_1, N_2, ...
    mutable std::mutex mtx_;
};

}  // namespace cantorlab
