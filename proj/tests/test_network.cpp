#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "optbench/network.hpp"
#include "optbench/solvers.hpp"

using namespace optbench;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

DemandMatrix demands(int n, const std::vector<std::tuple<int, int, long long>>& entries) {
    DemandMatrix T;
    T.n = n;
    T.t.assign((size_t)n, std::vector<long long>((size_t)n, 0));
    for (const auto& [k, i, t] : entries) T.t[(size_t)k][(size_t)i] = t;
    return T;
}

DemandMatrix uniform_demands(int n, long long t) {
    DemandMatrix T;
    T.n = n;
    T.t.assign((size_t)n, std::vector<long long>((size_t)n, t));
    for (int i = 0; i < n; ++i) T.t[(size_t)i][(size_t)i] = 0;
    return T;
}

bool has_violation(const Verdict& v, const std::string& id) {
    return std::any_of(v.violations.begin(), v.violations.end(),
                       [&](const Violation& viol) { return viol.id == id; });
}

// independent optimum: try every degree-valid arc subset and every
// assignment of one simple path per unit demand
struct RoutingOracle {
    int n, p;
    const DemandMatrix& T;

    long long best = -1;

    void paths_between(const std::set<std::pair<int, int>>& arcs, int from, int to,
                       std::vector<int>& cur, std::vector<char>& used,
                       std::vector<std::vector<int>>& out) {
        if (from == to) {
            out.push_back(cur);
            return;
        }
        for (const auto& [a, b] : arcs) {
            if (a != from || used[(size_t)b]) continue;
            used[(size_t)b] = 1;
            cur.push_back(b);
            paths_between(arcs, b, to, cur, used, out);
            cur.pop_back();
            used[(size_t)b] = 0;
        }
    }

    void assign(const std::vector<std::vector<std::vector<int>>>& options, size_t d,
                std::map<std::pair<int, int>, long long>& load, long long cur_max) {
        if (best >= 0 && cur_max >= best) return;
        if (d == options.size()) {
            best = best < 0 ? cur_max : std::min(best, cur_max);
            return;
        }
        for (const auto& path : options[d]) {
            long long new_max = cur_max;
            for (size_t s = 0; s + 1 < path.size(); ++s) {
                long long& f = load[{path[(size_t)s], path[(size_t)s + 1]}];
                f += 1;
                new_max = std::max(new_max, f);
            }
            assign(options, d + 1, load, new_max);
            for (size_t s = 0; s + 1 < path.size(); ++s) load[{path[(size_t)s], path[(size_t)s + 1]}] -= 1;
        }
    }

    long long solve() {
        std::vector<std::pair<int, int>> all_arcs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) all_arcs.push_back({i, j});
        std::vector<std::pair<int, int>> unit_demands;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (long long c = 0; c < T.t[(size_t)k][(size_t)i]; ++c) unit_demands.push_back({k, i});
        best = -1;
        for (uint32_t mask = 0; mask < (1u << all_arcs.size()); ++mask) {
            std::vector<int> outdeg((size_t)n, 0), indeg((size_t)n, 0);
            std::set<std::pair<int, int>> arcs;
            for (size_t a = 0; a < all_arcs.size(); ++a) {
                if (!(mask >> a & 1)) continue;
                arcs.insert(all_arcs[a]);
                ++outdeg[(size_t)all_arcs[a].first];
                ++indeg[(size_t)all_arcs[a].second];
            }
            bool ok = true;
            for (int v = 0; v < n; ++v) ok = ok && outdeg[(size_t)v] == p && indeg[(size_t)v] == p;
            if (!ok) continue;
            std::vector<std::vector<std::vector<int>>> options;
            for (const auto& [k, i] : unit_demands) {
                std::vector<std::vector<int>> paths;
                std::vector<int> cur{k};
                std::vector<char> used((size_t)n, 0);
                used[(size_t)k] = 1;
                paths_between(arcs, k, i, cur, used, paths);
                if (paths.empty()) {
                    ok = false;
                    break;
                }
                options.push_back(std::move(paths));
            }
            if (!ok) continue;
            std::map<std::pair<int, int>, long long> load;
            assign(options, 0, load, 0);
        }
        return best;
    }
};

}  // namespace

TEST_CASE("demand matrix validation rejects malformed data") {
    DemandMatrix T = uniform_demands(3, 4);
    T.validate();
    CHECK(T.total() == 24);

    DemandMatrix bad = T;
    bad.t.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = T;
    bad.t[1].push_back(0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = T;
    bad.t[2][2] = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = T;
    bad.t[0][1] = -5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = T;
    bad.n = 0;
    bad.t.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK_THROWS_AS(T.head(0), std::invalid_argument);
    CHECK_THROWS_AS(T.head(4), std::invalid_argument);
    DemandMatrix h = T.head(2);
    CHECK(h.n == 2);
    const std::vector<std::vector<long long>> want{{0, 4}, {4, 0}};
    CHECK(h.t == want);
}

TEST_CASE("trivial solution is a checked circulant with ring routing") {
    DemandMatrix T = demands(5, {{0, 2, 7}, {3, 1, 4}, {4, 0, 9}, {2, 3, 1}});
    DesignSolution sol = trivial_solution(5, 2, T);

    for (int i = 0; i < 5; ++i) {
        CHECK(sol.arcs.count({i, (i + 1) % 5}) == 1);
        CHECK(sol.arcs.count({i, (i + 2) % 5}) == 1);
    }
    CHECK(sol.arcs.size() == 10);
    for (const auto& [key, f] : sol.flows) {
        CHECK((std::get<1>(key) + 1) % 5 == std::get<2>(key));
        CHECK(f > 0);
    }

    // each demand adds its volume to every one-step arc on the forward walk
    std::map<std::pair<int, int>, long long> ring_load;
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
            for (int v = k; v != i && T.t[(size_t)k][(size_t)i] > 0; v = (v + 1) % 5)
                ring_load[{v, (v + 1) % 5}] += T.t[(size_t)k][(size_t)i];
    long long want_z = 0;
    for (const auto& [arc, f] : ring_load) want_z = std::max(want_z, f);

    std::vector<std::string> warnings;
    Verdict v = check(5, 2, T, sol, &warnings);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == want_z);
    CHECK(sol.z == want_z);
    CHECK(warnings.empty());
}

TEST_CASE("trivial solution covers every valid degree") {
    for (int n = 2; n <= 9; ++n) {
        DemandMatrix T = uniform_demands(n, 3);
        for (int p = 1; p <= n - 1; ++p) {
            Verdict v = check(n, p, T, trivial_solution(n, p, T));
            CHECK(v.feasible);
        }
        CHECK_THROWS_AS(trivial_solution(n, 0, T), std::invalid_argument);
        CHECK_THROWS_AS(trivial_solution(n, n, T), std::invalid_argument);
    }
    DemandMatrix T = uniform_demands(4, 1);
    CHECK_THROWS_AS(trivial_solution(5, 2, T), std::invalid_argument);
    CHECK_THROWS_AS(check(5, 2, T, DesignSolution{}), std::invalid_argument);
}

TEST_CASE("complete digraph with direct routing scores the largest demand") {
    DemandMatrix T = demands(3, {{0, 1, 11}, {1, 2, 30}, {2, 0, 14}, {2, 1, 6}});
    DesignSolution sol;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) sol.arcs.insert({i, j});
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            if (T.t[(size_t)k][(size_t)i] > 0) sol.flows[{k, k, i}] = T.t[(size_t)k][(size_t)i];
    sol.z = 30;
    Verdict v = check(3, 2, T, sol);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == 30);
}

TEST_CASE("flow outside the selected arcs is a confinement violation") {
    DemandMatrix T = demands(4, {{0, 2, 5}});
    DesignSolution sol;
    for (int i = 0; i < 4; ++i) sol.arcs.insert({i, (i + 1) % 4});
    sol.flows[{0, 0, 2}] = 5;  // conservation holds, arc 0->2 was never picked
    sol.z = 5;
    Verdict v = check(4, 1, T, sol);
    CHECK(!v.feasible);
    CHECK(!v.objective.has_value());
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0].id == "confinement");
    CHECK(v.violations[0].magnitude == 5);
    CHECK(v.violations[0].detail.find("1->3") != std::string::npos);
}

TEST_CASE("degree and conservation violations are itemized") {
    DemandMatrix T = demands(4, {{1, 3, 10}});
    DesignSolution sol = trivial_solution(4, 1, T);

    SUBCASE("missing arc breaks two degree counts") {
        sol.arcs.erase({2, 3});
        Verdict v = check(4, 1, T, sol);
        CHECK(!v.feasible);
        CHECK(has_violation(v, "degree"));
        int hits = 0;
        for (const auto& viol : v.violations)
            if (viol.id == "degree") {
                ++hits;
                CHECK(viol.magnitude == 1);
            }
        CHECK(hits == 2);  // vertex 3 outdegree, vertex 4 indegree
        CHECK(has_violation(v, "confinement"));  // the ring route still crosses 3->4
    }

    SUBCASE("short delivery breaks conservation at both endpoints") {
        sol.flows[{1, 2, 3}] = 4;
        Verdict v = check(4, 1, T, sol);
        CHECK(!v.feasible);
        REQUIRE(v.violations.size() == 2);
        for (const auto& viol : v.violations) {
            CHECK(viol.id == "conservation");
            CHECK(viol.detail.find("commodity 2") != std::string::npos);
            CHECK(viol.magnitude == 6);
        }
        CHECK(v.violations[0].detail.find("vertex 3") != std::string::npos);
        CHECK(v.violations[1].detail.find("vertex 4") != std::string::npos);
    }

    SUBCASE("bad indices throw instead of reporting") {
        DesignSolution bad = sol;
        bad.arcs.insert({0, 4});
        CHECK_THROWS_AS(check(4, 1, T, bad), std::invalid_argument);
        bad = sol;
        bad.arcs.insert({2, 2});
        CHECK_THROWS_AS(check(4, 1, T, bad), std::invalid_argument);
        bad = sol;
        bad.flows[{4, 0, 1}] = 1;
        CHECK_THROWS_AS(check(4, 1, T, bad), std::invalid_argument);
        bad = sol;
        bad.flows[{0, 1, 1}] = 1;
        CHECK_THROWS_AS(check(4, 1, T, bad), std::invalid_argument);
        bad = sol;
        bad.flows[{0, 0, 1}] = -2;
        CHECK_THROWS_AS(check(4, 1, T, bad), std::invalid_argument);
        CHECK_THROWS_AS(check(4, 0, T, sol), std::invalid_argument);
        CHECK_THROWS_AS(check(4, 4, T, sol), std::invalid_argument);
    }
}

TEST_CASE("checker recomputes the objective instead of trusting z") {
    DemandMatrix T = uniform_demands(4, 2);
    DesignSolution sol = trivial_solution(4, 2, T);
    long long honest = sol.z;
    sol.z = 1;

    std::vector<std::string> warnings;
    Verdict v = check(4, 2, T, sol, &warnings);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == honest);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("stated objective 1") != std::string::npos);

    // without a warning sink the verdict is the same
    Verdict quiet = check(4, 2, T, sol);
    CHECK(quiet.feasible);
    CHECK(*quiet.objective == honest);
}

TEST_CASE("circulating flow is flagged as waste, not infeasibility") {
    DemandMatrix T = demands(4, {{0, 1, 3}});
    DesignSolution sol = trivial_solution(4, 2, T);

    // commodity 0 picks up a closed loop over selected arcs
    sol.flows[{0, 1, 2}] += 4;
    sol.flows[{0, 2, 3}] += 4;
    sol.flows[{0, 3, 1}] += 4;

    std::vector<std::string> warnings;
    Verdict v = check(4, 2, T, sol, &warnings);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == 4);  // the loop is now the busiest arc
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].find("stated objective") != std::string::npos);
    CHECK(warnings[1] == "commodity 1 carries circulating flow");
}

TEST_CASE("objective is linear in a joint demand and flow scaling") {
    DemandMatrix T = demands(5, {{0, 3, 2}, {1, 4, 6}, {2, 0, 1}});
    DesignSolution sol = trivial_solution(5, 1, T);
    Verdict base = check(5, 1, T, sol);
    REQUIRE(base.objective.has_value());

    for (long long c : {2ll, 5ll, 9ll, 40ll, 1000ll}) {
        DemandMatrix scaled = T;
        for (auto& row : scaled.t)
            for (long long& t : row) t *= c;
        DesignSolution scaled_sol = sol;
        for (auto& [key, f] : scaled_sol.flows) f *= c;
        scaled_sol.z *= c;
        Verdict v = check(5, 1, scaled, scaled_sol);
        CHECK(v.feasible);
        REQUIRE(v.objective.has_value());
        CHECK(*v.objective == c * *base.objective);
    }
}

TEST_CASE("model layout follows the flow variable reductions") {
    DemandMatrix T = parse_demands(read_file(std::string(FIXTURES_DIR) + "/network/n24.demands"));
    REQUIRE(T.n == 24);

    // every slice keeps every commodity active, so the counts are closed form
    Model m11 = build_mip(11, 2, T.head(11));
    CHECK(m11.n() == 1211);
    Model m24 = build_mip(24, 2, T);
    CHECK(m24.n() == 24 * 23 + 24 * 23 * 23 + 1);

    CHECK(m24.sense == Sense::Minimize);
    CHECK(m24.objective.terms.size() == 1);
    CHECK(m24.objective.terms.count({m24.n() - 1}) == 1);
    for (int v = 0; v < 24 * 23; ++v) CHECK(m24.variables[(size_t)v].kind == VariableSpec::Binary);
    const VariableSpec& z = m24.variables.back();
    CHECK(z.kind == VariableSpec::Integer);
    CHECK(z.lower == 0);
    CHECK(z.upper == T.total());

    // a commodity without outgoing demand gets no flow variables
    DemandMatrix one = demands(5, {{0, 2, 3}, {0, 4, 1}});
    Model m = build_mip(5, 2, one);
    CHECK(m.n() == 20 + 16 + 1);
    for (int v = 20; v < 36; ++v) {
        CHECK(m.variables[(size_t)v].kind == VariableSpec::Integer);
        CHECK(m.variables[(size_t)v].lower == 0);
        CHECK(m.variables[(size_t)v].upper == 4);  // min(total 4, row 4)
    }
}

TEST_CASE("big-M couples flows to arc selection") {
    DemandMatrix T = demands(3, {{0, 1, 5}, {0, 2, 2}});

    SUBCASE("default M is the total demand") {
        Model m = build_mip(3, 1, T);
        long long seen = 0;
        for (const auto& c : m.constraints) {
            if (c.relation != Relation::Le || c.coeffs.size() != 2 || c.rhs != 0) continue;
            if (c.coeffs.begin()->first >= 6) continue;  // load rows couple f to z, not to x
            CHECK(c.coeffs.begin()->second == -7);
            CHECK(std::next(c.coeffs.begin())->second == 1);
            ++seen;
        }
        CHECK(seen == 4);  // one per flow variable
    }

    SUBCASE("explicit M caps the flow bounds too") {
        Model m = build_mip(3, 1, T, 3);
        for (int v = 6; v < m.n() - 1; ++v) CHECK(m.variables[(size_t)v].upper == 3);
        bool saw = false;
        for (const auto& c : m.constraints)
            for (const auto& [v, a] : c.coeffs) saw = saw || a == -3;
        CHECK(saw);
        CHECK_THROWS_AS(build_mip(3, 1, T, -1), std::invalid_argument);
    }
}

TEST_CASE("model search matches an independent design and routing enumeration") {
    struct Case {
        int n, p;
        std::vector<std::tuple<int, int, long long>> entries;
    };
    const std::vector<Case> cases = {
        {3, 1, {{0, 1, 1}}},
        {3, 1, {{0, 1, 1}, {1, 0, 1}, {2, 0, 1}}},
        {3, 2, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}},
        {3, 2, {}},
        {3, 2, {{2, 1, 1}}},
        {4, 1, {{0, 1, 1}, {2, 3, 1}}},
        {4, 1, {{0, 2, 1}, {1, 3, 1}, {3, 0, 1}}},
        {4, 2, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}},
        {4, 2, {{0, 2, 1}, {3, 1, 1}}},
        {4, 3, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.p);
        DemandMatrix T = demands(c.n, c.entries);
        RoutingOracle oracle{c.n, c.p, T};
        long long want = oracle.solve();
        REQUIRE(want >= 0);  // a circulant always exists, so never infeasible
        ModelSolveOutcome got = brute_force(build_mip(c.n, c.p, T), 48);
        CHECK(got.feasible);
        REQUIRE(got.objective.has_value());
        CHECK(*got.objective == want);
    }
}

TEST_CASE("complete digraph optimum for uniform demands is the common volume") {
    DemandMatrix T = uniform_demands(3, 2);
    ModelSolveOutcome got = brute_force(build_mip(3, 2, T), 48);
    CHECK(got.feasible);
    REQUIRE(got.objective.has_value());
    CHECK(*got.objective == 2);
}

TEST_CASE("demand and design files round trip") {
    DemandMatrix T = demands(4, {{0, 3, 12}, {2, 1, 7}, {3, 0, 1}});
    CHECK(parse_demands(write_demands(T)).t == T.t);
    CHECK(parse_demands("# sizes first\n 4 \n0 0 0 12\n0 0 0 0\n0 7 0 0\n1 0 0 0 # wraps\n").t ==
          T.t);

    DesignSolution sol = trivial_solution(4, 2, T);
    DesignSolution back = parse_design(write_design(sol), 4);
    CHECK(back.arcs == sol.arcs);
    CHECK(back.flows == sol.flows);
    CHECK(back.z == sol.z);

    // zero flow entries vanish on the way out
    sol.flows[{1, 1, 2}] = 0;
    CHECK(parse_design(write_design(sol), 4).flows.count({1, 1, 2}) == 0);
}

TEST_CASE("malformed network files throw") {
    CHECK_THROWS_AS(parse_demands(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("2\n0 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("2\n0 1\n1 0\n0 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("2\n0 1 0\n1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("2\n0 x\n1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("2\n0 -1\n1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("2\n3 1\n1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_demands("0\n"), std::invalid_argument);

    const std::string good = "ARCS\n1 2\n2 1\nFLOWS\n1 1 2 4\nZ 4\nEND\n";
    CHECK(parse_design(good, 2).flows.at({0, 0, 1}) == 4);
    CHECK_THROWS_AS(parse_design("", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\nZ 0\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1\nFLOWS\nZ 0\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2 3\nFLOWS\nZ 0\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\n1 2\nFLOWS\nZ 0\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 3\nFLOWS\nZ 0\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\nFLOWS\n1 1 2 -4\nZ 0\nEND\n", 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\nFLOWS\n1 1 2\nZ 0\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\nFLOWS\nEND\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\nFLOWS\nZ 0\n", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_design("ARCS\n1 2\nFLOWS\nZ 0\nEND\nleft\n", 2), std::invalid_argument);
}

TEST_CASE("bundled demand data stays feasible under the fallback at every size") {
    DemandMatrix T = parse_demands(read_file(std::string(FIXTURES_DIR) + "/network/n24.demands"));
    for (int n = 3; n <= 24; ++n) {
        DemandMatrix Tn = T.head(n);
        Verdict v = check(n, 2, Tn, trivial_solution(n, 2, Tn));
        CHECK(v.feasible);
        // the slice-friendly data keeps every commodity shipping something
        for (int k = 0; k < n; ++k) {
            long long row = 0;
            for (long long t : Tn.t[(size_t)k]) row += t;
            CHECK(row > 0);
        }
    }
}

TEST_CASE("bundled design solution reproduces its stored objective") {
    DemandMatrix T = parse_demands(read_file(std::string(FIXTURES_DIR) + "/network/n24.demands"));
    DesignSolution sol = parse_design(read_file(std::string(FIXTURES_DIR) + "/network/n24.sol"), 24);
    std::vector<std::string> warnings;
    Verdict v = check(24, 2, T, sol, &warnings);
    CHECK(v.feasible);
    REQUIRE(v.objective.has_value());
    CHECK(*v.objective == 2542000);
    CHECK(sol.z == 2542000);
    CHECK(warnings.empty());
}
