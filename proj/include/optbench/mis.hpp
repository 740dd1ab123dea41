#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optbench/core.hpp"
#include "optbench/model.hpp"

namespace optbench {

// Simple undirected graph; edges stored with u < v, no duplicates.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    void validate() const;
};

// Sorted distinct vertices.
struct VertexSet {
    std::vector<int> members;

    int size() const { return static_cast<int>(members.size()); }
};

// Feasible iff no edge has both endpoints selected; objective is the size.
Verdict check(const Graph& g, const VertexSet& s);

// Two-phase repair: drop max-violation vertices until feasible (ties to the
// lowest index), then try to add surviving candidates in descending index
// order. Always returns an independent set.
VertexSet greedy_postprocess(const Graph& g, const std::vector<uint8_t>& x);

// Maximize sum x_i subject to x_u + x_v <= 1 per edge.
Model build_blp(const Graph& g);

// Minimization form of the penalized set objective: -sum x_i plus
// lambda * x_u x_v per edge. For lambda > 1 its minimizers are exactly the
// maximum independent sets.
Qubo build_qubo(const Graph& g, long long lambda);

// DIMACS-like text: "p edge n m" header, "e u v" lines, 1-based.
std::string write_graph(const Graph& g);
Graph parse_graph(const std::string& text);

// Whitespace-separated 1-based vertex list.
std::string write_vertex_set(const VertexSet& s);
VertexSet parse_vertex_set(const std::string& text, int n);

}  // namespace optbench
