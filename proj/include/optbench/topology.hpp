#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "optbench/core.hpp"
#include "optbench/mis.hpp"

namespace optbench {

// Order/degree certificate target: n vertices, max degree d, optional
// diameter goal.
struct OdpInstance {
    int n = 0;
    int d = 0;
    std::optional<int> k_target;

    void validate() const;
};

// Exact rational in lowest terms.
struct Ratio {
    long long num = 0;
    long long den = 1;
};

struct PathStats {
    std::optional<int> diameter;  // empty when some pair is unreachable
    Ratio aspl;                   // mean distance over reachable unordered pairs
    long long unreachable_pairs = 0;
};

// BFS from every vertex; exact arithmetic throughout.
PathStats diameter_aspl(const Graph& g);

// Feasible iff the graph has inst.n vertices, max degree at most inst.d,
// and diameter at most k. Objective is the measured diameter.
Verdict check(const OdpInstance& inst, const Graph& g, int k);

// Random near-regular graph (pairing model, repaired to a simple graph)
// improved by degree-preserving 2-opt swaps minimizing (diameter, ASPL)
// lexicographically. budget counts proposed swaps.
Graph construct_topology(int n, int d, uint64_t seed, int budget = 20000);

// Plain "u v" lines, 0-based.
std::string write_edge_list(const Graph& g);
Graph parse_edge_list(const std::string& text, int n);

}  // namespace optbench
