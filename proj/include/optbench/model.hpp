#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optbench/core.hpp"

namespace optbench {

// Sorted variable-index multiset. Repeats are meaningful for integer
// variables (v*v); binary-variable monomials are kept duplicate-free.
using Monomial = std::vector<int>;

struct Polynomial {
  std::map<Monomial, long long> terms;  // no zero coefficients stored

  // Sorts m; does not dedup (callers that know their variables are binary
  // use add_binary instead).
  void add(Monomial m, long long c);
  // Sorts and dedups m (x*x = x for binary x).
  void add_binary(Monomial m, long long c);
  long long constant() const;
  int degree() const;
};

__int128 eval(const Polynomial& p, const std::vector<long long>& x);

struct VariableSpec {
  enum Kind { Binary, Integer } kind = Binary;
  long long lower = 0;
  long long upper = 1;
};

enum class Relation { Le, Eq, Ge };

struct LinearConstraint {
  std::map<int, long long> coeffs;  // variable -> coefficient, no zeros
  Relation relation = Relation::Eq;
  long long rhs = 0;
};

struct Model {
  Sense sense = Sense::Minimize;
  std::vector<VariableSpec> variables;  // position is the variable id
  Polynomial objective;
  std::vector<LinearConstraint> constraints;

  int n() const { return (int)variables.size(); }
  int add_binary_var();
  int add_integer_var(long long lower, long long upper);
  // Checks index ranges, bounds, empty constraints. Throws on violation.
  void validate() const;
};

bool satisfies(const LinearConstraint& c, const std::vector<long long>& x);

struct Hubo {
  int n = 0;
  std::map<Monomial, long long> terms;  // sorted distinct indices, degree >= 1
  long long offset = 0;

  void add(Monomial m, long long c);  // dedups (binary), drops zeros
  int degree() const;
};

struct Qubo {
  int n = 0;
  std::map<std::pair<int, int>, long long> terms;  // i <= j; (i,i) is linear
  long long offset = 0;
  // Set when the instance was filtered to k layers of a line SWAP network.
  std::optional<int> swap_layers;

  void add(int i, int j, long long c);
};

long long energy(const Qubo& q, const std::vector<uint8_t>& x);
long long energy(const Hubo& h, const std::vector<uint8_t>& x);

Hubo to_hubo(const Qubo& q);

// Folds equality constraints into the objective as M * residual^2 and
// returns a minimization Hubo (maximization objectives are negated, flagged
// in `negated`). m_min is a certified penalty weight: 1 + sum of |objective
// coefficients|, which exceeds the objective's spread over the binary box.
struct PenaltyResult {
  Hubo hubo;
  long long m_min = 0;
  long long m_used = 0;
  bool below_bound = false;  // caller supplied M < m_min
  bool negated = false;      // objective was negated to minimize
};
PenaltyResult penalty_unconstrain(const Model& m, std::optional<long long> M = std::nullopt);

// One original integer variable turned into weighted bits: value =
// lower + sum_i weight_i * bit_i, weights 1,2,4,... with the last weight
// truncated so the reachable range is exactly [0, upper-lower].
struct BitGroup {
  int original_var = 0;
  long long lower = 0;
  std::vector<std::pair<int, long long>> bits;  // (new var id, weight)
};

struct BinarizeResult {
  Model model;               // binary variables only
  std::vector<int> var_map;  // old id -> new id; -1 when expanded or constant
  std::vector<BitGroup> groups;

  // Original-variable values from an assignment of the new model.
  std::vector<long long> decode(const std::vector<uint8_t>& x) const;
  // Canonical (greedy) bit pattern giving value k for the group's variable.
  static std::vector<uint8_t> encode_value(const BitGroup& g, long long k);
};
BinarizeResult binarize_integers(const Model& m);

// Repeated substitution y := x_a * x_b (most frequent pair in degree >= 3
// terms, ties by lowest pair) with the penalty
// P*(x_a x_b - 2 x_a y - 2 x_b y + 3 y), P = 1 + sum |coeff| over the terms
// holding the pair. Minima over extended variables match the input's.
struct QuadratizeResult {
  Qubo qubo;
  std::vector<std::pair<int, std::pair<int, int>>> aux;  // (new var, (a, b))
};
QuadratizeResult quadratize(const Hubo& h);

// Keeps entry (i,j) iff the pair is adjacent within k layers of the
// alternating SWAP network on a line of n qubits; linear terms always stay.
// Throws when the surviving quadratic terms leave the variable graph
// disconnected.
Qubo swap_mask(const Qubo& q, int k);

// First layer (0 = initial adjacency) at which i and j meet in the line
// SWAP network; exposed for tests.
std::vector<std::vector<int>> swap_distances(int n);

ModelStats model_stats(const Model& m);
ModelStats model_stats(const Qubo& q);
ModelStats model_stats(const Hubo& h);

std::string write_qubo(const Qubo& q);
Qubo parse_qubo(const std::string& text);
std::string write_hubo(const Hubo& h);
Hubo parse_hubo(const std::string& text);
std::string write_model(const Model& m);
Model parse_model(const std::string& text);

}  // namespace optbench
