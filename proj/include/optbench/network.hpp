#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "optbench/core.hpp"
#include "optbench/model.hpp"

namespace optbench {

// Directed network design with integral multicommodity routing: pick a
// simple digraph where every vertex has indegree and outdegree p, route
// t[k][i] units from k to i for every ordered pair, and minimize the
// largest aggregated flow on any arc.
struct DemandMatrix {
    int n = 0;
    std::vector<std::vector<long long>> t;  // non-negative, zero diagonal

    void validate() const;
    long long total() const;                 // sum of all demands
    DemandMatrix head(int m) const;          // restriction to the first m vertices
};

struct DesignSolution {
    std::set<std::pair<int, int>> arcs;                 // selected ordered pairs
    std::map<std::tuple<int, int, int>, long long> flows;  // (commodity, from, to) -> units
    long long z = 0;                                    // stated objective, never trusted
};

// Verifies degrees (id "degree"), flow confinement to selected arcs
// (id "confinement"), and per-commodity conservation with the commodity's
// origin emitting its row total and every other vertex absorbing its entry
// (id "conservation"). The objective is always the recomputed maximum
// aggregated arc flow; a stated z that disagrees and any circulating flow
// that no origin-to-destination path decomposition needs are reported as
// warnings, not violations. Throws on out-of-range indices, self-loop arcs
// and negative flows.
Verdict check(int n, int p, const DemandMatrix& T, const DesignSolution& sol,
              std::vector<std::string>* warnings = nullptr);

// Circulant fallback: arcs i -> i+1 .. i+p (mod n), every demand routed
// along the one-step ring. Feasible for any 1 <= p <= n-1.
DesignSolution trivial_solution(int n, int p, const DemandMatrix& T);

// Mixed-integer model: binary arc pick x_ij, integer flows f_kij bounded by
// the big-M link to x_ij, degree equalities, conservation, and a minimized
// integer z dominating every arc's aggregated flow. M defaults to the total
// demand. Flow variables are only created for commodities with outgoing
// demand and never point back into their own origin; both reductions keep
// at least one optimal solution.
Model build_mip(int n, int p, const DemandMatrix& T, std::optional<long long> M = std::nullopt);

std::string write_demands(const DemandMatrix& T);
DemandMatrix parse_demands(const std::string& text);
std::string write_design(const DesignSolution& sol);
DesignSolution parse_design(const std::string& text, int n);

}  // namespace optbench
