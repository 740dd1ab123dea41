#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "labs_table.hpp"
#include "optbench/labs.hpp"
#include "optbench/model.hpp"

using namespace optbench;

namespace {

SpinSequence from_bits(unsigned long long bits, int n) {
    SpinSequence seq;
    for (int i = 0; i < n; ++i) seq.s.push_back(bits & (1ull << i) ? -1 : 1);
    return seq;
}

long long oracle_min_energy(int n) {
    long long best = 0;
    for (unsigned long long bits = 0; bits < (1ull << n); ++bits) {
        long long e = energy(from_bits(bits, n));
        if (bits == 0 || e < best) best = e;
    }
    return best;
}

}  // namespace

TEST_CASE("energy matches hand-computed values") {
    CHECK(energy(SpinSequence{{1, 1}}) == 1);
    CHECK(energy(SpinSequence{{1, 1, -1}}) == 1);
    CHECK(energy(SpinSequence{{1, 1, 1}}) == 5);
    CHECK(energy(SpinSequence{{1, -1}}) == 1);
    CHECK_THROWS_AS(energy(SpinSequence{{1}}), std::invalid_argument);
    CHECK_THROWS_AS(energy(SpinSequence{{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(energy(SpinSequence{{}}), std::invalid_argument);
}

TEST_CASE("energy is invariant under flip, reversal, and alternation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 24);
        SpinSequence seq = from_bits(rng(), n);
        long long e = energy(seq);

        SpinSequence flipped = seq;
        for (auto& v : flipped.s) v = static_cast<int8_t>(-v);
        CHECK(energy(flipped) == e);

        SpinSequence reversed = seq;
        std::reverse(reversed.s.begin(), reversed.s.end());
        CHECK(energy(reversed) == e);

        SpinSequence alternated = seq;
        for (size_t i = 1; i < alternated.s.size(); i += 2)
            alternated.s[i] = static_cast<int8_t>(-alternated.s[i]);
        CHECK(energy(alternated) == e);
    }
}

TEST_CASE("run-length decoding starts positive and round-trips") {
    SpinSequence two = decode_runlength({2});
    CHECK(two.s == std::vector<int8_t>{1, 1});
    SpinSequence mixed = decode_runlength({1, 2});
    CHECK(mixed.s == std::vector<int8_t>{1, -1, -1});
    CHECK(decode_runlength({1, 1, 2, 3}).n() == 7);

    CHECK_THROWS_AS(decode_runlength({}), std::invalid_argument);
    CHECK_THROWS_AS(decode_runlength({2, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(decode_runlength({1}), std::invalid_argument);  // length 1 sequence

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng() % 30);
        SpinSequence seq = from_bits(rng(), n);
        RunLengthCode code = encode_runlength(seq);
        SpinSequence back = decode_runlength(code);
        CHECK(back.n() == seq.n());
        // Equal up to a global sign flip that makes the first run positive.
        SpinSequence normalized = seq;
        if (normalized.s[0] < 0)
            for (auto& v : normalized.s) v = static_cast<int8_t>(-v);
        CHECK(back.s == normalized.s);
        CHECK(encode_runlength(back) == code);
    }
}

TEST_CASE("run-length text forms") {
    CHECK(parse_runlength("1123") == RunLengthCode{1, 1, 2, 3});
    CHECK(parse_runlength("2") == RunLengthCode{2});
    CHECK(parse_runlength("11 2 3") == RunLengthCode{11, 2, 3});
    CHECK(parse_runlength("11,2,3") == RunLengthCode{11, 2, 3});
    CHECK(parse_runlength("10 1") == RunLengthCode{10, 1});

    CHECK_THROWS_AS(parse_runlength(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_runlength("10"), std::invalid_argument);  // '0' not a digit 1-9
    CHECK_THROWS_AS(parse_runlength("1a2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_runlength("1 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_runlength("1 x"), std::invalid_argument);

    CHECK(format_runlength({1, 1, 2, 3}) == "1123");
    CHECK(format_runlength({11, 2, 3}) == "11 2 3");
    CHECK(parse_runlength(format_runlength({14, 3, 9})) == RunLengthCode{14, 3, 9});
    CHECK_THROWS_AS(format_runlength({}), std::invalid_argument);
    CHECK_THROWS_AS(format_runlength({2, -1}), std::invalid_argument);
}

TEST_CASE("golden table rows decode to the listed energies") {
    CHECK(kLabsTableSize == 40);
    for (int i = 0; i < kLabsTableSize; ++i) {
        const auto& row = kLabsTable[i];
        CAPTURE(row.n);
        SpinSequence seq = decode_runlength(parse_runlength(row.code));
        CHECK(seq.n() == row.n);
        CHECK(energy(seq) == row.obj);
        REQUIRE(known_labs_optimum(row.n).has_value());
        CHECK(*known_labs_optimum(row.n) == row.obj);
    }
}

TEST_CASE("known optima table bounds") {
    CHECK(known_labs_optimum(13) == 6);
    CHECK(known_labs_optimum(17) == 32);
    CHECK(known_labs_optimum(20) == 26);
    CHECK(known_labs_optimum(41) == 108);
    CHECK_FALSE(known_labs_optimum(42).has_value());
    CHECK_FALSE(known_labs_optimum(1).has_value());
    CHECK_FALSE(known_labs_optimum(0).has_value());
    CHECK_FALSE(known_labs_optimum(-3).has_value());
}

TEST_CASE("exhaustive search matches the unpruned oracle") {
    for (int n = 2; n <= 16; ++n) {
        CAPTURE(n);
        LabsResult res = labs_exhaustive(n);
        CHECK(res.energy == oracle_min_energy(n));
        CHECK(res.sequence.n() == n);
        CHECK(res.sequence.s[0] == 1);
        CHECK(res.sequence.s[1] == 1);
        CHECK(energy(res.sequence) == res.energy);
        CHECK(res.evaluations == (n == 2 ? 1ull : 1ull << (n - 2)));
    }
}

TEST_CASE("exhaustive search reproduces known optima") {
    CHECK(labs_exhaustive(2).energy == 1);
    CHECK(labs_exhaustive(13).energy == 6);
    CHECK(labs_exhaustive(17).energy == 32);
    CHECK(labs_exhaustive(20).energy == 26);
    CHECK_THROWS_AS(labs_exhaustive(1), std::invalid_argument);
    CHECK_THROWS_AS(labs_exhaustive(29), std::invalid_argument);
}

TEST_CASE("exhaustive search is deterministic") {
    LabsResult a = labs_exhaustive(12);
    LabsResult b = labs_exhaustive(12);
    CHECK(a.energy == b.energy);
    CHECK(a.sequence.s == b.sequence.s);
}

TEST_CASE("binary polynomial agrees with direct evaluation") {
    for (int n = 2; n <= 10; ++n) {
        CAPTURE(n);
        Hubo h = labs_hubo(n);
        CHECK(h.n == n);
        for (unsigned long long bits = 0; bits < (1ull << n); ++bits) {
            std::vector<uint8_t> x(static_cast<size_t>(n));
            SpinSequence seq;
            for (int i = 0; i < n; ++i) {
                x[static_cast<size_t>(i)] = (bits >> i) & 1;
                seq.s.push_back(x[static_cast<size_t>(i)] ? -1 : 1);
            }
            CHECK(energy(h, x) == energy(seq));
        }
    }
}

TEST_CASE("binary polynomial shape") {
    Hubo h5 = labs_hubo(5);
    CHECK(h5.degree() == 4);
    std::vector<uint8_t> zeros(5, 0);
    CHECK(energy(h5, zeros) == energy(SpinSequence{{1, 1, 1, 1, 1}}));

    Hubo h3 = labs_hubo(3);
    CHECK(h3.degree() == 2);
    CHECK_THROWS_AS(labs_hubo(1), std::invalid_argument);
}

TEST_CASE("sequence file round trip") {
    SpinSequence seq{{1, -1, -1, 1, 1, -1}};
    std::string text = write_sequence(seq);
    CHECK(text == "+--++-\n");
    CHECK(parse_sequence(text).s == seq.s);
    CHECK(parse_sequence("+ -\t-\n").s == std::vector<int8_t>{1, -1, -1});
    CHECK_THROWS_AS(parse_sequence("+x-"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sequence(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_sequence("+"), std::invalid_argument);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 40);
        SpinSequence random_seq;
        for (int i = 0; i < n; ++i) random_seq.s.push_back(rng() & 1 ? 1 : -1);
        CHECK(parse_sequence(write_sequence(random_seq)).s == random_seq.s);
    }
}
