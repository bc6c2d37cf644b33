#include <doctest.h>

#include <random>

#include "cantorlab/word.hpp"

using namespace cantorlab;

TEST_CASE("ones_split examples") {
    Rational half(1, 2);
    CHECK(ones_split(Word{}, half).n1 == 0);
    CHECK(ones_split(Word{}, half).n2 == 0);

    auto s = ones_split(Word::from_string("11"), half);  // floor(1) = 1
    CHECK(s.n1 == 1);
    CHECK(s.n2 == 1);

    s = ones_split(Word::from_string("101"), half);  // floor(3/2) = 1
    CHECK(s.n1 == 1);
    CHECK(s.n2 == 1);
}

TEST_CASE("remove_last") {
    CHECK(Word::from_string("0").remove_last() == Word{});
    CHECK(Word::from_string("10").remove_last() == Word::from_string("1"));
    CHECK(Word::from_string("110").remove_last() == Word::from_string("11"));
    CHECK_THROWS_AS(Word{}.remove_last(), DomainError);
}

TEST_CASE("floor_boundary examples") {
    CHECK(floor_boundary(3, Rational(1, 2)) == 1);
    CHECK(floor_boundary(0, Rational(1, 2)) == 0);
    CHECK(floor_boundary(7, Rational(2, 3)) == 4);
    CHECK_THROWS_AS(floor_boundary(-1, Rational(1, 2)), DomainError);
}

TEST_CASE("floor_boundary agrees with integer arithmetic up to 10^6") {
    for (auto [p, q] : {std::pair<long, long>{1, 2}, {2, 3}, {3, 7}}) {
        Rational beta(p, q);
        for (long n = 0; n <= 1'000'000; n += (n < 1000 ? 1 : 997)) {
            long pn = p * n;
            long expected = (pn - (pn % q)) / q;
            CHECK(floor_boundary(n, beta) == expected);
        }
    }
}

TEST_CASE("split counts sum to the total ones for random words") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        Word w;
        long n = static_cast<long>(rng() % 40);
        for (long i = 0; i < n; ++i) w.push_back(static_cast<std::uint8_t>(rng() & 1));
        for (auto beta : {Rational(1, 2), Rational(2, 3), Rational(1, 5)}) {
            auto s = ones_split(w, beta);
            CHECK(s.n1 + s.n2 == w.ones());
        }
    }
}

TEST_CASE("removing the last symbol shifts the split by at most two positions") {
    std::mt19937_64 rng(11);
    Rational beta(1, 2);
    for (int trial = 0; trial < 500; ++trial) {
        Word w;
        long n = 1 + static_cast<long>(rng() % 40);
        for (long i = 0; i < n; ++i) w.push_back(static_cast<std::uint8_t>(rng() & 1));
        Word parent = w.remove_last();
        auto sw = ones_split(w, beta);
        auto sp = ones_split(parent, beta);
        long b = floor_boundary(n, beta);
        long bp = floor_boundary(n - 1, beta);
        // recompute the parent split from the child split and the two symbols
        long expected_n1 = sw.n1, expected_n2 = sw.n2 - (w[n - 1] ? 1 : 0);
        if (b != bp) {
            expected_n1 -= w[b - 1] ? 1 : 0;
            expected_n2 += w[b - 1] ? 1 : 0;
        }
        CHECK(sp.n1 == expected_n1);
        CHECK(sp.n2 == expected_n2);
    }
}

TEST_CASE("prefix and serialization round trips") {
    Word w = Word::from_string("0110100");
    CHECK(w.prefix(w.size()) == w);
    CHECK(w.prefix(0) == Word{});
    CHECK(w.to_string() == "0110100");
    CHECK_THROWS_AS(Word::from_string("012"), ConfigError);
}
