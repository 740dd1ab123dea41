#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "optbench/steiner.hpp"

using namespace optbench;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 3x3 single-layer board with one two-terminal net along the top edge
GridSteinerInstance tiny_board() {
    GridSteinerInstance inst;
    inst.side = 3;
    inst.layers = 1;
    inst.nets = {{inst.id({0, 0, 0}), inst.id({1, 0, 0})}};
    return inst;
}

std::set<std::pair<int, int>> normalized(const PackingSolution& sol) {
    std::set<std::pair<int, int>> out;
    for (auto [a, b] : sol.edges) out.insert(std::minmax(a, b));
    return out;
}

bool has_violation(const Verdict& v, const std::string& id) {
    return std::any_of(v.violations.begin(), v.violations.end(),
                       [&](const Violation& viol) { return viol.id == id; });
}

}  // namespace

TEST_CASE("grid indexing round trips and adjacency is unit steps only") {
    GridSteinerInstance inst;
    inst.side = 4;
    inst.layers = 3;
    for (int v = 0; v < inst.vertex_count(); ++v) CHECK(inst.id(inst.at(v)) == v);

    int a = inst.id({1, 2, 0});
    CHECK(inst.adjacent(a, inst.id({2, 2, 0})));
    CHECK(inst.adjacent(a, inst.id({1, 1, 0})));
    CHECK(inst.adjacent(a, inst.id({1, 2, 1})));
    CHECK_FALSE(inst.adjacent(a, inst.id({2, 3, 0})));  // diagonal
    CHECK_FALSE(inst.adjacent(a, inst.id({3, 2, 0})));  // two steps
    CHECK_FALSE(inst.adjacent(a, a));
    CHECK_FALSE(inst.adjacent(a, inst.vertex_count()));

    CHECK(inst.on_top_border(inst.id({0, 2, 0})));
    CHECK(inst.on_top_border(inst.id({2, 3, 0})));
    CHECK_FALSE(inst.on_top_border(inst.id({1, 1, 0})));  // interior
    CHECK_FALSE(inst.on_top_border(inst.id({0, 2, 1})));  // wrong layer
}

TEST_CASE("instance validation rejects malformed boards") {
    GridSteinerInstance inst = tiny_board();
    CHECK_NOTHROW(inst.validate());

    GridSteinerInstance bad = inst;
    bad.side = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.holes.insert(inst.vertex_count());
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.nets.push_back({});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.nets[0][1] = inst.id({1, 1, 0});  // interior terminal
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.nets.push_back({inst.id({0, 0, 0})});  // reused terminal
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = inst;
    bad.holes.insert(inst.nets[0][0]);  // terminal swallowed by a hole
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    GridSteinerInstance deep = tiny_board();
    deep.layers = 2;
    deep.nets[0][1] = deep.id({1, 0, 1});  // border cell but bottom layer
    CHECK_THROWS_AS(deep.validate(), std::invalid_argument);
}

TEST_CASE("single edge between adjacent terminals is feasible with objective 1") {
    GridSteinerInstance inst = tiny_board();
    PackingSolution sol{{{inst.nets[0][0], inst.nets[0][1]}}};
    Verdict v = check(inst, sol);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == 1);
}

TEST_CASE("two nets routed through a shared vertex are flagged") {
    GridSteinerInstance inst;
    inst.side = 4;
    inst.layers = 1;
    int mid = inst.id({1, 0, 0});
    inst.nets = {{inst.id({0, 0, 0}), inst.id({2, 0, 0})},
                 {inst.id({1, 3, 0}), mid}};
    PackingSolution sol;
    sol.edges = {{inst.id({0, 0, 0}), mid},
                 {mid, inst.id({2, 0, 0})},
                 {mid, inst.id({1, 1, 0})},
                 {inst.id({1, 1, 0}), inst.id({1, 2, 0})},
                 {inst.id({1, 2, 0}), inst.id({1, 3, 0})}};
    Verdict v = check(inst, sol);
    CHECK_FALSE(v.feasible);
    CHECK(has_violation(v, "overlap"));
    CHECK_FALSE(v.objective.has_value());
}

TEST_CASE("cycles, stray trees and broken nets are separate violations") {
    GridSteinerInstance inst = tiny_board();
    int t0 = inst.nets[0][0];
    int t1 = inst.nets[0][1];

    SUBCASE("cycle through the net's tree") {
        PackingSolution sol;
        sol.edges = {{t0, t1},
                     {t1, inst.id({1, 1, 0})},
                     {inst.id({1, 1, 0}), inst.id({0, 1, 0})},
                     {inst.id({0, 1, 0}), t0}};
        Verdict v = check(inst, sol);
        CHECK_FALSE(v.feasible);
        CHECK(has_violation(v, "forest"));
        CHECK_FALSE(has_violation(v, "net 1"));
    }

    SUBCASE("terminal-free component") {
        PackingSolution sol;
        sol.edges = {{t0, t1}, {inst.id({0, 2, 0}), inst.id({1, 2, 0})}};
        Verdict v = check(inst, sol);
        CHECK_FALSE(v.feasible);
        REQUIRE(v.violations.size() == 1);
        CHECK(v.violations[0].id == "stray");
        CHECK(v.violations[0].magnitude == 1);
    }

    SUBCASE("empty solution leaves terminals uncovered") {
        Verdict v = check(inst, PackingSolution{});
        CHECK_FALSE(v.feasible);
        CHECK(has_violation(v, "net 1"));
    }

    SUBCASE("terminals in different trees") {
        PackingSolution sol;
        sol.edges = {{t0, inst.id({0, 1, 0})}, {t1, inst.id({1, 1, 0})}};
        Verdict v = check(inst, sol);
        CHECK_FALSE(v.feasible);
        REQUIRE(v.violations.size() == 1);
        CHECK(v.violations[0].id == "net 1");
        CHECK(v.violations[0].magnitude == 2);
    }
}

TEST_CASE("malformed edges throw") {
    GridSteinerInstance inst = tiny_board();
    int t0 = inst.nets[0][0];
    CHECK_THROWS_AS(check(inst, PackingSolution{{{t0, 99}}}), std::invalid_argument);
    CHECK_THROWS_AS(check(inst, PackingSolution{{{t0, inst.id({1, 1, 0})}}}),
                    std::invalid_argument);  // diagonal
    CHECK_THROWS_AS(check(inst, PackingSolution{{{t0, inst.id({2, 0, 0})}}}),
                    std::invalid_argument);  // skips a cell
    PackingSolution dup{{{t0, inst.nets[0][1]}, {inst.nets[0][1], t0}}};
    CHECK_THROWS_AS(check(inst, dup), std::invalid_argument);

    GridSteinerInstance holed = inst;
    holed.holes.insert(inst.id({1, 1, 0}));
    CHECK_THROWS_AS(check(holed, PackingSolution{{{inst.id({1, 1, 0}), inst.id({1, 2, 0})}}}),
                    std::invalid_argument);
}

TEST_CASE("generator plants a feasible witness on a tiny board") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        auto [inst, witness] = generate_steiner(3, 1, 2, 0, seed);
        REQUIRE(inst.nets.size() == 1);
        REQUIRE(inst.nets[0].size() == 2);
        CHECK(inst.holes.empty());
        Verdict v = check(inst, witness);
        CHECK(v.feasible);
        GridCoord a = inst.at(inst.nets[0][0]);
        GridCoord b = inst.at(inst.nets[0][1]);
        long long dist = std::abs(a.x - b.x) + std::abs(a.y - b.y);
        CHECK(*v.objective == dist);  // witness is a shortest path
    }
}

TEST_CASE("generated witnesses stay feasible across parameter sweeps") {
    for (int side : {5, 8}) {
        for (int layers : {1, 2}) {
            for (int holes : {0, 3}) {
                for (uint64_t seed : {1ull, 7ull, 42ull}) {
                    auto [inst, witness] = generate_steiner(side, layers, 4, holes, seed);
                    CAPTURE(side);
                    CAPTURE(layers);
                    CAPTURE(holes);
                    CAPTURE(seed);
                    CHECK(inst.nets.size() ==
                          static_cast<size_t>(std::max(1, side * layers / 5)));
                    for (const auto& net : inst.nets) {
                        CHECK(net.size() >= 2);
                        CHECK(net.size() <= 4);
                    }
                    if (holes == 0) CHECK(inst.holes.empty());
                    if (holes > 0) CHECK(inst.holes.size() >= static_cast<size_t>(holes));
                    Verdict v = check(inst, witness);
                    CHECK(v.feasible);
                    for (auto [a, b] : witness.edges) {
                        CHECK(inst.holes.count(a) == 0);
                        CHECK(inst.holes.count(b) == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("generation is deterministic per seed") {
    auto [i1, w1] = generate_steiner(6, 2, 3, 2, 9);
    auto [i2, w2] = generate_steiner(6, 2, 3, 2, 9);
    CHECK(i1.holes == i2.holes);
    CHECK(i1.nets == i2.nets);
    CHECK(w1.edges == w2.edges);
    auto [i3, w3] = generate_steiner(6, 2, 3, 2, 10);
    CHECK((i1.nets != i3.nets || w1.edges != w3.edges));
}

TEST_CASE("generator rejects bad parameters") {
    CHECK_THROWS_AS(generate_steiner(1, 1, 2, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_steiner(5, 0, 2, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_steiner(5, 1, 1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_steiner(5, 1, 2, -1, 1), std::invalid_argument);
    // no room for any hole box on a fully-saturated tiny board is a runtime failure
    CHECK_THROWS_AS(generate_steiner(2, 1, 2, 50, 1), std::runtime_error);
}

TEST_CASE("every witness edge is load bearing") {
    for (uint64_t seed : {3ull, 11ull}) {
        auto [inst, witness] = generate_steiner(6, 1, 3, 1, seed);
        REQUIRE(check(inst, witness).feasible);
        for (size_t drop = 0; drop < witness.edges.size(); ++drop) {
            PackingSolution pruned;
            for (size_t e = 0; e < witness.edges.size(); ++e)
                if (e != drop) pruned.edges.push_back(witness.edges[e]);
            CHECK_FALSE(check(inst, pruned).feasible);
        }
    }
}

TEST_CASE("feasibility is invariant under net relabeling") {
    auto [inst, witness] = generate_steiner(7, 2, 3, 0, 5);
    REQUIRE(inst.nets.size() == 2);
    GridSteinerInstance flipped = inst;
    std::reverse(flipped.nets.begin(), flipped.nets.end());
    CHECK(check(flipped, witness).feasible == check(inst, witness).feasible);

    PackingSolution broken = witness;
    broken.edges.pop_back();
    CHECK(check(flipped, broken).feasible == check(inst, broken).feasible);
}

TEST_CASE("instance text round trips") {
    auto [inst, witness] = generate_steiner(6, 2, 3, 2, 13);
    std::string text = write_steiner(inst);
    GridSteinerInstance back = parse_steiner(text);
    CHECK(back.side == inst.side);
    CHECK(back.layers == inst.layers);
    CHECK(back.holes == inst.holes);
    CHECK(back.nets == inst.nets);  // generator emits sorted nets
    CHECK(write_steiner(back) == text);
    CHECK(check(back, witness).feasible);
}

TEST_CASE("instance parser rejects corrupted input") {
    std::string good = write_steiner(tiny_board());
    CHECK_NOTHROW(parse_steiner(good));

    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string text = good;
        size_t at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        return text;
    };

    CHECK_THROWS_AS(parse_steiner(corrupt("SECTION Comment", "SECTION Remark")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(corrupt("Grid 3 1", "Grid 3")), std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(corrupt("Nodes 9", "Nodes 8")), std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(corrupt("E 1 2 1", "E 1 2 2")), std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(corrupt("E 1 2 1", "E 1 3 1")), std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(corrupt("T 1", "T 5")), std::invalid_argument);  // off border
    CHECK_THROWS_AS(parse_steiner(corrupt("EOF", "BOF")), std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(good + "junk\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_steiner(""), std::invalid_argument);
}

TEST_CASE("packing text round trips and rejects bad lines") {
    auto [inst, witness] = generate_steiner(5, 2, 3, 0, 21);
    std::string text = write_packing(inst, witness);
    PackingSolution back = parse_packing(inst, "# planted witness\n" + text);
    CHECK(normalized(back) == normalized(witness));
    CHECK(write_packing(inst, back) == text);

    CHECK_THROWS_AS(parse_packing(inst, "0 0 0 1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_packing(inst, "0 0 0 9 0 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_packing(inst, "0 0 0 1 0 0 extra\n"), std::invalid_argument);
    CHECK_NOTHROW(parse_packing(inst, "\n#x\n"));
}

TEST_CASE("committed 20x20x2 board packs eight trees") {
    GridSteinerInstance inst =
        parse_steiner(slurp(std::string(FIXTURES_DIR) + "/steiner/grid20.stp"));
    std::string sol_text = slurp(std::string(FIXTURES_DIR) + "/steiner/grid20.sol");
    PackingSolution sol = parse_packing(inst, sol_text);

    CHECK(inst.side == 20);
    CHECK(inst.layers == 2);
    CHECK(inst.nets.size() == 8);
    Verdict v = check(inst, sol);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == static_cast<long long>(sol.edges.size()));

    CHECK(write_steiner(inst) == slurp(std::string(FIXTURES_DIR) + "/steiner/grid20.stp"));
    CHECK(write_packing(inst, sol) == sol_text);
}
