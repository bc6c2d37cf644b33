#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cantorlab/rational.hpp"

namespace cantorlab {

// Exact floor(beta * n) in rational arithmetic.
inline long floor_boundary(long n, const Rational& beta) {
    if (n < 0) throw DomainError("floor_boundary: n must be >= 0");
    Rational prod = beta * n;
    Integer f = floor_rational(prod);
    return static_cast<long>(f.get_si());
}

// Finite binary word with a cumulative ones profile, so the split counts
// N1/N2 at any window boundary cost O(1).
class Word {
public:
    Word() { cum_.push_back(0); }
    explicit Word(const std::vector<std::uint8_t>& bits) : Word() {
        for (auto b : bits) push_back(b);
    }

    static Word from_string(const std::string& s) {
        Word w;
        for (char c : s) {
            if (c == '0')
                w.push_back(0);
            else if (c == '1')
                w.push_back(1);
            else
                throw ConfigError(std::string("invalid word symbol '") + c + "'");
        }
        return w;
    }
    static Word repeated(std::uint8_t bit, long k) {
        Word w;
        for (long i = 0; i < k; ++i) w.push_back(bit);
        return w;
    }

    void push_back(std::uint8_t bit) {
        if (bit > 1) throw DomainError("word symbols are 0/1");
        bits_.push_back(bit);
        cum_.push_back(cum_.back() + bit);
    }

    void pop_back() {
        if (empty()) throw DomainError("pop_back on the empty word");
        bits_.pop_back();
        cum_.pop_back();
    }

    long size() const { return static_cast<long>(bits_.size()); }
    bool empty() const { return bits_.empty(); }
    std::uint8_t operator[](long i) const { return bits_[static_cast<std::size_t>(i)]; }

    // ones among the first j symbols, 0 <= j <= size()
    long ones_in_prefix(long j) const { return cum_[static_cast<std::size_t>(j)]; }
    long ones() const { return cum_.back(); }

    Word prefix(long k) const {
        Word w;
        for (long i = 0; i < k; ++i) w.push_back(bits_[static_cast<std::size_t>(i)]);
        return w;
    }

    // The paper's omega^- : drop the last symbol.
    Word remove_last() const {
        if (empty()) throw DomainError("remove_last on the empty word");
        return prefix(size() - 1);
    }

    Word concat(const Word& o) const {
        Word w = *this;
        for (long i = 0; i < o.size(); ++i) w.push_back(o[i]);
        return w;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(b ? '1' : '0');
        return s;
    }

    bool operator==(const Word& o) const { return bits_ == o.bits_; }

private:
    std::vector<std::uint8_t> bits_;
    std::vector<std::uint32_t> cum_;
};

struct OnesSplit {
    long n1 = 0;  // ones in positions 1..floor(beta n)
    long n2 = 0;  // ones in the remainder
};

inline OnesSplit ones_split(const Word& w, const Rational& beta) {
    if (beta <= 0 || beta >= 1) throw DomainError("beta must lie in (0,1)");
    long b = floor_boundary(w.size(), beta);
    OnesSplit s;
    s.n1 = w.ones_in_prefix(b);
    s.n2 = w.ones() - s.n1;
    return s;
}

}  // namespace cantorlab
