#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "optbench/core.hpp"

namespace optbench {

// Non-negative integer matrix whose rows and columns all sum to s,
// so M/s is doubly stochastic.
struct ScaledDoublyStochastic {
    int n = 0;
    long long s = 0;
    std::vector<std::vector<long long>> M;

    void validate() const;
};

// Bijection on {1..n}; p[r] is the image of position r+1.
struct Permutation {
    std::vector<int> p;

    int n() const { return static_cast<int>(p.size()); }
    void validate() const;
    bool operator==(const Permutation& other) const { return p == other.p; }
};

struct DecompositionItem {
    long long c = 0;
    Permutation perm;
};

// Weighted permutations; weights of zero are allowed and do not count
// toward the decomposition length.
struct Decomposition {
    std::vector<DecompositionItem> items;

    void validate(int n) const;
};

struct DecompositionCheck {
    int length = 0;         // items with positive weight
    long long residual = 0; // max abs entry of M minus the weighted sum
    bool exact = false;     // residual zero and weights summing to s
};

DecompositionCheck verify_decomposition(const ScaledDoublyStochastic& D,
                                        const Decomposition& dec);

// Samples distinct permutations (n for Sparse, n^2 for Dense, capped at n!)
// with positive weights summing to 10^digits; returns the matrix together
// with the generating decomposition as a feasibility witness.
std::pair<ScaledDoublyStochastic, Decomposition> generate_birkhoff(int n, Density density,
                                                                   uint64_t seed,
                                                                   int digits = 4);

// Classical greedy decomposition: repeatedly extract a perfect matching on
// the positive support and subtract its minimum entry. Exact, with at most
// (n-1)^2 + 1 items.
Decomposition greedy_decompose(const ScaledDoublyStochastic& D);

// Permutation index in [0, n!-1] via the Lehmer code in factorial base.
unsigned long long lehmer_encode(const Permutation& perm);
Permutation lehmer_decode(unsigned long long index, int n);

// Fixed-width big-endian binary form, width = ceil(log2 n!).
std::string to_bitstring(unsigned long long index, int n);
unsigned long long from_bitstring(const std::string& bits, int n);

// Combinatorial number system: k distinct non-negative integers <-> one code.
unsigned long long cns_encode(const std::vector<long long>& indices);
std::vector<long long> cns_decode(unsigned long long code, int k);

// ceil(log2 C(n!, k)) by exact arithmetic.
long long qubit_count(int n, unsigned long long k);

std::string write_birkhoff(const ScaledDoublyStochastic& D);
ScaledDoublyStochastic parse_birkhoff(const std::string& text);

std::string write_decomposition(const Decomposition& dec);
Decomposition parse_decomposition(const std::string& text);

}  // namespace optbench
