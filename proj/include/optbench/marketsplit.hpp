#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "optbench/core.hpp"
#include "optbench/model.hpp"

namespace optbench {

struct MarketSplitInstance {
  int m = 0;
  int n = 0;
  std::vector<std::vector<long long>> A;  // m rows, n non-negative entries each
  std::vector<long long> b;

  // provenance for generated instances
  std::optional<uint64_t> seed;
  std::optional<long long> range;                  // entries were drawn from [0, range-1]
  std::optional<std::string> planted_digest;
  std::optional<std::vector<uint8_t>> planted;     // in-memory only, not serialized
  int regenerations = 0;                           // re-seeds spent during repair

  void validate() const;
};

// Feasible-by-construction instance with n = 10*(m-1) columns: plants a
// solution of weight n/2 +- 2, draws A uniformly from [0, D-1], sets
// b_i = floor(rowsum/2), then repairs each row by value switches between
// 0- and 1-columns followed by integer slack spreading over
// floor(3*ones/2) column pairs. Deterministic per (m, D, seed).
MarketSplitInstance generate_market_split(int m, long long D, uint64_t seed);

// Feasible iff A x = b; violations carry per-row slack b_i - (A x)_i.
Verdict check(const MarketSplitInstance& inst, const std::vector<uint8_t>& x);

enum class ResidualNorm { SquaredL2, LInf };

// Unconstrained quadratic form sum_i (b_i - (A x)_i)^2, or the min-max
// reformulation with one bound variable for LInf. Minimum 0 iff feasible.
Model to_objective(const MarketSplitInstance& inst, ResidualNorm norm);

enum class EnumMode { First, All };

// Four-list split enumeration over packed row sums; returns every x with
// A x = b (or the first found). Requires n <= 60.
std::vector<std::vector<uint8_t>> meet_in_middle(const MarketSplitInstance& inst, EnumMode mode);

std::string write_market_split(const MarketSplitInstance& inst);
MarketSplitInstance parse_market_split(const std::string& text);

}  // namespace optbench
