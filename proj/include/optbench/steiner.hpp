#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "optbench/core.hpp"

namespace optbench {

struct GridCoord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend bool operator==(const GridCoord& a, const GridCoord& b) {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
};

// side x side x layers grid graph with unit edge weights, minus hole cells.
// Terminal nets are disjoint vertex sets placed on the rim of layer z = 0.
struct GridSteinerInstance {
    int side = 0;
    int layers = 0;
    std::set<int> holes;                 // removed vertex ids
    std::vector<std::vector<int>> nets;  // terminal ids per net

    int vertex_count() const { return side * side * layers; }
    int id(GridCoord c) const { return (c.z * side + c.y) * side + c.x; }
    GridCoord at(int v) const { return {v % side, (v / side) % side, v / (side * side)}; }
    bool adjacent(int u, int v) const;
    bool on_top_border(int v) const;

    void validate() const;
};

// Candidate forest, one tree per net. Edges are unordered vertex id pairs.
struct PackingSolution {
    std::vector<std::pair<int, int>> edges;
};

// Feasible iff the edges form a forest, each net's terminals sit in exactly
// one tree, no tree touches two nets, and no tree is terminal-free.
// Objective is the edge count. Malformed edges (outside the grid, not a grid
// step, through a hole, duplicated) throw.
Verdict check(const GridSteinerInstance& inst, const PackingSolution& sol);

// Builds an instance around a planted routing: nets are routed one after
// another with randomized BFS trees between border terminals of the top
// layer, then `holes` axis-aligned boxes are carved out of untouched cells.
// Net count grows with grid size (side * layers / 5, at least 1); each net
// gets 2..max_terminals terminals. Returns the instance and the routed
// witness, whose check is Feasible.
std::pair<GridSteinerInstance, PackingSolution> generate_steiner(int side, int layers,
                                                                 int max_terminals, int holes,
                                                                 uint64_t seed);

// STP-style text: a Comment section holding the grid shape and hole cells,
// a Graph section listing every surviving grid edge with weight 1, and one
// Terminals section per net (vertex ids 1-based).
std::string write_steiner(const GridSteinerInstance& inst);
GridSteinerInstance parse_steiner(const std::string& text);

// One edge per line as "x1 y1 z1 x2 y2 z2" (0-based coordinates), lower
// vertex id first, sorted; '#' starts a comment line.
std::string write_packing(const GridSteinerInstance& inst, const PackingSolution& sol);
PackingSolution parse_packing(const GridSteinerInstance& inst, const std::string& text);

}  // namespace optbench
