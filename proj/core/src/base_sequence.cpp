#include "cantorlab/base_sequence.hpp"

#include <algorithm>
#include <limits>

namespace cantorlab {

BaseSequence::BaseSequence(long M, Kind kind, std::vector<std::int64_t> values)
    : M_(M), kind_(kind) {
    if (M < 100) throw ModelInvalid("base sequence requires M >= 100");
    if (kind_ == Kind::Explicit) {
        if (values.empty() || values.front() != 1)
            throw ModelInvalid("explicit (N_k) must start with N_1 = 1");
        for (std::size_t j = 1; j < values.size(); ++j)
            if (values[j] <= values[j - 1])
                throw ModelInvalid("(N_k) must be strictly increasing");
        n_ = std::move(values);
    } else {
        n_ = {1};
    }
}

void BaseSequence::ensure_covers(std::int64_t i) const {
    std::lock_guard<std::mutex> lock(mtx_);
    if (kind_ == Kind::Explicit) {
        if (n_.back() <= i)
            throw ModelInvalid("explicit (N_k) exhausted below probed index");
        return;
    }
    // N_k = k!; the previous entry is (k-1)!.
    while (n_.back() <= i) {
        std::int64_t k = static_cast<std::int64_t>(n_.size()) + 1;
        if (n_.back() > std::numeric_limits<std::int64_t>::max() / k)
            throw TooLarge("factorial (N_k) overflow at probed index");
        n_.push_back(n_.back() * k);
    }
}

std::int64_t BaseSequence::N(std::size_t j) const {
    if (j == 0) throw InternalError("N_j is 1-based");
    std::lock_guard<std::mutex> lock(mtx_);
    if (kind_ == Kind::Explicit) {
        if (j > n_.size()) throw ModelInvalid("explicit (N_k) exhausted");
        return n_[j - 1];
    }
    while (j > n_.size()) {
        std::int64_t k = static_cast<std::int64_t>(n_.size()) + 1;
        if (n_.back() > std::numeric_limits<std::int64_t>::max() / k)
            throw TooLarge("factorial (N_k) overflow");
        n_.push_back(n_.back() * k);
    }
    return n_[j - 1];
}

std::size_t BaseSequence::block_index(std::int64_t i) const {
    ensure_covers(i);
    std::lock_guard<std::mutex> lock(mtx_);
    auto it = std::upper_bound(n_.begin(), n_.end(), i);
    return static_cast<std::size_t>(it - n_.begin());  // count of N_j <= i
}

long BaseSequence::M_at(std::int64_t i) const {
    if (i < 1) throw InternalError("M_i is 1-based");
    std::size_t j = block_index(i);  // i in [N_j, N_{j+1})
    return (j % 2 == 1) ? M_ : M_ + 1;
}

std::pair<std::int64_t, std::int64_t> BaseSequence::count_split(std::int64_t n) const {
    return count_split_window(0, n);
}

std::pair<std::int64_t, std::int64_t> BaseSequence::count_split_window(std::int64_t k,
                                                                       std::int64_t n) const {
    if (n == 0) return {0, 0};
    std::int64_t hi = k + n;
    ensure_covers(hi);
    std::int64_t cm = 0, cm1 = 0;
    std::lock_guard<std::mutex> lock(mtx_);
    for (std::size_t j = 0; j < n_.size(); ++j) {
        std::int64_t lo_j = n_[j];
        std::int64_t hi_j = (j + 1 < n_.size()) ? n_[j + 1] - 1 : hi;
        std::int64_t a = std::max(lo_j, k + 1);
        std::int64_t b = std::min(hi_j, hi);
        if (a > b) continue;
        if (j % 2 == 0)
            cm += b - a + 1;  // blocks [N_1,N_2), [N_3,N_4), ... carry M
        else
            cm1 += b - a + 1;
    }
    return {cm, cm1};
}

}  // namespace cantorlab
