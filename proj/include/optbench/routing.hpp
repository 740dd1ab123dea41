#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "optbench/core.hpp"
#include "optbench/model.hpp"

namespace optbench {

// Capacitated vehicle routing: serve every customer exactly once with at
// most `vehicles` tours that start and end at the depot, each carrying at
// most `capacity`, minimizing summed arc costs.
struct CvrpInstance {
    std::string name;
    int n = 0;              // customers, numbered 1..n; 0 is the depot
    int vehicles = 0;
    long long capacity = 0;
    std::vector<long long> demand;                  // demand[i-1] belongs to customer i
    std::vector<std::vector<long long>> cost;       // (n+1) x (n+1), symmetric, zero diagonal
    bool euclidean = false;                         // costs derived from coords
    std::vector<std::pair<long long, long long>> coords;  // n+1 points when euclidean
    bool metric = false;                            // triangle inequality, verified claim

    // Structural checks. A metric or euclidean claim is re-verified, so a
    // parsed instance can be trusted as labeled.
    void validate() const;
};

// rounded Euclidean distance used for coordinate-based instances
long long euclidean_cost(std::pair<long long, long long> a, std::pair<long long, long long> b);

// true when cost[i][j] <= cost[i][k] + cost[k][j] for all triples
bool triangle_holds(const std::vector<std::vector<long long>>& cost);

struct RouteSet {
    std::vector<std::vector<int>> routes;  // customer sequences, depot implicit at both ends
};

// Verifies single visits (id "visit"), the fleet bound (id "fleet") and per
// route capacity (id "capacity"). The objective is the recomputed total arc
// cost including both depot legs of every route. Throws on customer indices
// outside 1..n and on empty route sequences.
Verdict check(const CvrpInstance& inst, const RouteSet& rs);

// Clarke-Wright parallel savings: start from singleton routes and keep
// merging route endpoints in order of decreasing saving c0i + c0j - cij
// (ties by ascending (i, j)), capacity permitting, until a full pass makes
// no progress. Throws when more than `vehicles` routes remain.
RouteSet savings(const CvrpInstance& inst);

// Two-index flow model with Miller-Tucker-Zemlin load variables. The depot
// is split into a start copy 0 and an end copy n+1 that reuses the depot
// cost column. Binary arc variables cover all ordered pairs, load variables
// y_i range over [demand_i, capacity].
Model build_mtz(const CvrpInstance& inst);

// Random instance on an integer grid with rounded Euclidean costs whose
// demands are drawn, grouped, and then padded so that the total equals
// vehicles * capacity exactly (every feasible solution fills every truck).
CvrpInstance generate_tight(int n, int vehicles, uint64_t seed);

CvrpInstance parse_cvrplib(const std::string& text);
std::string write_cvrplib(const CvrpInstance& inst);

// "Route #k: ..." lines plus a "Cost <value>" footer. parse_routes returns
// the stated cost through cost_out when asked; the checker never trusts it.
RouteSet parse_routes(const std::string& text, long long* cost_out = nullptr);
std::string write_routes(const RouteSet& rs, long long cost);

}  // namespace optbench
