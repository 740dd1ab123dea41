#include "doctest.h"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "optbench/sports.hpp"

using namespace optbench;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

SportsInstance plain(int n) {
    SportsInstance inst;
    inst.n = n;
    return inst;
}

std::vector<int> all_slots(int n) {
    std::vector<int> out;
    for (int s = 1; s <= 2 * (n - 1); ++s) out.push_back(s);
    return out;
}

Timetable mirror_extend(int n, std::vector<std::vector<std::pair<int, int>>> phase1) {
    Timetable tt;
    tt.n = n;
    tt.slots = std::move(phase1);
    size_t m = tt.slots.size();
    for (size_t r = 0; r < m; ++r) {
        std::vector<std::pair<int, int>> rev;
        for (auto [h, a] : tt.slots[r]) rev.push_back({a, h});
        tt.slots.push_back(rev);
    }
    return tt;
}

Timetable flip_all(Timetable tt) {
    for (auto& games : tt.slots)
        for (auto& g : games) std::swap(g.first, g.second);
    return tt;
}

// four-team phased table with known venue patterns: team 1 opens with three
// home games, team 2 with three away games
Timetable craft4() {
    return mirror_extend(4, {{{1, 2}, {3, 4}}, {{1, 3}, {4, 2}}, {{1, 4}, {3, 2}}});
}

// four-team phased table with no venue run of three; the second phase is a
// reordering of the mirrored slots, not the mirror itself
Timetable alt4() {
    Timetable tt;
    tt.n = 4;
    tt.slots = {{{1, 2}, {3, 4}}, {{2, 3}, {4, 1}}, {{1, 3}, {4, 2}},
                {{3, 1}, {2, 4}}, {{2, 1}, {4, 3}}, {{3, 2}, {1, 4}}};
    return tt;
}

long long total_breaks(const Timetable& tt) {
    SportsInstance inst = plain(tt.n);
    inst.constraints.br2.push_back({0});
    Verdict v = validate(tt, inst);
    if (v.feasible) return 0;
    REQUIRE(v.violations.size() == 1);
    REQUIRE(v.violations[0].id == "BR2");
    return v.violations[0].magnitude;
}

void require_all_id(const Verdict& v, const std::string& id, size_t count) {
    REQUIRE_FALSE(v.feasible);
    REQUIRE(v.violations.size() == count);
    for (const Violation& viol : v.violations) CHECK(viol.id == id);
}

std::string wrap_xml(int n, const std::string& structure, const std::string& constraints) {
    std::ostringstream out;
    out << "<Instance><Resources><Teams>";
    for (int t = 0; t < n; ++t) out << "<team id=\"" << t << "\"/>";
    out << "</Teams><Slots>";
    for (int s = 0; s < 2 * (n - 1); ++s) out << "<slot id=\"" << s << "\"/>";
    out << "</Slots></Resources>" << structure << "<Constraints>" << constraints
        << "</Constraints></Instance>";
    return out.str();
}

const std::string kPhased =
    "<Structure><Format><numberRoundRobin>2</numberRoundRobin>"
    "<gameMode>P</gameMode></Format></Structure>";

}  // namespace

TEST_CASE("sports: circle method on two teams") {
    Timetable tt = circle_method(2);
    REQUIRE(tt.n == 2);
    REQUIRE(tt.slots.size() == 2);
    CHECK(tt.slots[0] == std::vector<std::pair<int, int>>{{1, 2}});
    CHECK(tt.slots[1] == std::vector<std::pair<int, int>>{{2, 1}});
}

TEST_CASE("sports: circle method rejects odd or tiny team counts") {
    CHECK_THROWS_AS(circle_method(0), std::invalid_argument);
    CHECK_THROWS_AS(circle_method(1), std::invalid_argument);
    CHECK_THROWS_AS(circle_method(7), std::invalid_argument);
    CHECK_THROWS_AS(circle_method(-4), std::invalid_argument);
}

TEST_CASE("sports: circle method is structurally valid for all even sizes up to 30") {
    for (int n = 2; n <= 30; n += 2) {
        CAPTURE(n);
        Timetable tt = circle_method(n);
        REQUIRE(static_cast<int>(tt.slots.size()) == 2 * (n - 1));
        for (const auto& games : tt.slots) REQUIRE(static_cast<int>(games.size()) == n / 2);
        Verdict v = validate(tt, plain(n));
        CHECK(v.feasible);
        CHECK(v.violations.empty());
        CHECK_FALSE(v.objective.has_value());

        SportsInstance unphased = plain(n);
        unphased.phased = false;
        CHECK(validate(tt, unphased).feasible);
    }
}

TEST_CASE("sports: reference six-team pattern mirrors to a feasible phased table") {
    Timetable tt = mirror_extend(6, {
                                        {{1, 2}, {3, 5}, {4, 6}},
                                        {{1, 3}, {4, 5}, {6, 2}},
                                        {{1, 4}, {2, 3}, {5, 6}},
                                        {{5, 1}, {2, 4}, {3, 6}},
                                        {{6, 1}, {2, 5}, {3, 4}},
                                    });
    Verdict v = validate(tt, plain(6));
    CHECK(v.feasible);

    SportsInstance no_breaks = plain(6);
    no_breaks.constraints.br2.push_back({0});
    Verdict broken = validate(tt, no_breaks);
    require_all_id(broken, "BR2", 1);
    CHECK(broken.violations[0].magnitude > 0);
}

TEST_CASE("sports: structural violations carry matching, pairing and phase ids") {
    SUBCASE("duplicate team in a slot") {
        Timetable tt = circle_method(4);
        tt.slots[0] = {{1, 4}, {1, 3}};
        Verdict v = validate(tt, plain(4));
        REQUIRE_FALSE(v.feasible);
        std::map<std::string, int> ids;
        for (const Violation& viol : v.violations) ++ids[viol.id];
        CHECK(ids["matching"] == 2);
        CHECK(ids["pairing"] == 2);
        CHECK(ids["phase"] == 2);
        CHECK(v.violations.size() == 6);
    }
    SUBCASE("reversed orientation in the second phase") {
        Timetable tt = circle_method(6);
        std::swap(tt.slots[6][1].first, tt.slots[6][1].second);
        Verdict v = validate(tt, plain(6));
        require_all_id(v, "pairing", 2);
        for (const Violation& viol : v.violations) CHECK(viol.magnitude == 1);
    }
    SUBCASE("phase split broken by swapping a slot across phases") {
        Timetable tt = circle_method(6);
        std::swap(tt.slots[1], tt.slots[9]);
        Verdict v = validate(tt, plain(6));
        require_all_id(v, "phase", 6);

        SportsInstance unphased = plain(6);
        unphased.phased = false;
        CHECK(validate(tt, unphased).feasible);
    }
}

TEST_CASE("sports: validator rejects malformed input outright") {
    Timetable tt = circle_method(6);
    SUBCASE("team count mismatch") { CHECK_THROWS_AS(validate(tt, plain(8)), std::invalid_argument); }
    SUBCASE("wrong slot count") {
        tt.slots.pop_back();
        CHECK_THROWS_AS(validate(tt, plain(6)), std::invalid_argument);
    }
    SUBCASE("team out of range") {
        tt.slots[0][0].first = 7;
        CHECK_THROWS_AS(validate(tt, plain(6)), std::invalid_argument);
    }
    SUBCASE("team paired with itself") {
        tt.slots[0][0] = {3, 3};
        CHECK_THROWS_AS(validate(tt, plain(6)), std::invalid_argument);
    }
}

TEST_CASE("sports: instance validation") {
    SportsInstance inst = plain(6);
    CHECK_NOTHROW(inst.validate());
    SUBCASE("odd team count") {
        inst.n = 5;
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SUBCASE("constraint team out of range") {
        inst.constraints.ca1.push_back({7, 1, BoundMode::AtMost, {1}, true});
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SUBCASE("constraint slot out of range") {
        inst.constraints.br1.push_back({1, 1, {11}});
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SUBCASE("negative bound") {
        inst.constraints.br2.push_back({-1});
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SUBCASE("game list with equal teams") {
        inst.constraints.ga1.push_back({{{2, 2}}, 0, 1, {1}});
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SUBCASE("crossed game count bounds") {
        inst.constraints.ga1.push_back({{{1, 2}}, 3, 1, {1}});
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
}

TEST_CASE("sports: CA1 flags a capacity overrun") {
    SportsInstance inst = plain(6);
    inst.constraints.ca1.push_back({1, 0, BoundMode::AtMost, all_slots(6), true});
    Verdict v = validate(circle_method(6), inst);
    require_all_id(v, "CA1", 1);
    CHECK(v.violations[0].magnitude == 5);
}

TEST_CASE("sports: CA1 lower bounds and away games") {
    Timetable tt = craft4();
    SportsInstance inst = plain(4);
    // team 2 is away in slots 1..3, so a demand for two home games fails by 2
    inst.constraints.ca1.push_back({2, 2, BoundMode::AtLeast, {1, 2, 3}, true});
    Verdict v = validate(tt, inst);
    require_all_id(v, "CA1", 1);
    CHECK(v.violations[0].magnitude == 2);

    // and its three away games in the same window satisfy an at-least-three bound
    SportsInstance ok = plain(4);
    ok.constraints.ca1.push_back({2, 3, BoundMode::AtLeast, {1, 2, 3}, false});
    CHECK(validate(tt, ok).feasible);
}

TEST_CASE("sports: CA2 counts meetings with a listed opponent set") {
    SportsInstance inst = plain(6);
    inst.constraints.ca2.push_back({1, 1, BoundMode::AtMost, Venue::Any, {2}, all_slots(6)});
    Verdict v = validate(circle_method(6), inst);
    require_all_id(v, "CA2", 1);
    CHECK(v.violations[0].magnitude == 1);

    SportsInstance homeonly = plain(6);
    homeonly.constraints.ca2.push_back({1, 1, BoundMode::AtMost, Venue::Home, {2}, all_slots(6)});
    CHECK(validate(circle_method(6), homeonly).feasible);
}

TEST_CASE("sports: CA3 flags runs of three at the same venue") {
    SportsInstance inst = plain(4);
    inst.constraints.ca3 = true;
    Verdict v = validate(craft4(), inst);
    require_all_id(v, "CA3", 4);
    for (const Violation& viol : v.violations) CHECK(viol.magnitude == 1);

    CHECK(validate(alt4(), plain(4)).feasible);
    CHECK(validate(alt4(), inst).feasible);
}

TEST_CASE("sports: CA4 bounds home games of one group against another") {
    SportsInstance inst = plain(6);
    inst.constraints.ca4.push_back({{1}, {2}, 0, all_slots(6)});
    Verdict v = validate(circle_method(6), inst);
    require_all_id(v, "CA4", 1);
    CHECK(v.violations[0].magnitude == 1);
}

TEST_CASE("sports: BR1 bounds breaks of a single team") {
    SportsInstance inst = plain(4);
    // team 1 sits on venue runs HHH AAA, so it has four breaks in total
    inst.constraints.br1.push_back({1, 3, all_slots(4)});
    Verdict v = validate(craft4(), inst);
    require_all_id(v, "BR1", 1);
    CHECK(v.violations[0].magnitude == 1);

    SportsInstance ok = plain(4);
    ok.constraints.br1.push_back({1, 4, all_slots(4)});
    CHECK(validate(craft4(), ok).feasible);
}

TEST_CASE("sports: BR2 bounds the total break count") {
    CHECK(total_breaks(craft4()) == 8);

    SportsInstance inst = plain(6);
    inst.constraints.br2.push_back({0});
    Verdict v = validate(circle_method(6), inst);
    require_all_id(v, "BR2", 1);
}

TEST_CASE("sports: break counts survive flipping every venue") {
    for (int n : {4, 6, 8, 12}) {
        CAPTURE(n);
        Timetable tt = circle_method(n);
        CHECK(total_breaks(tt) == total_breaks(flip_all(tt)));
        CHECK(validate(flip_all(tt), plain(n)).feasible);
    }
    CHECK(total_breaks(craft4()) == total_breaks(flip_all(craft4())));
}

TEST_CASE("sports: GA1 bounds listed games inside a window") {
    SportsInstance inst = plain(6);
    inst.constraints.ga1.push_back({{{1, 2}}, 0, 0, all_slots(6)});
    Verdict v = validate(circle_method(6), inst);
    require_all_id(v, "GA1", 1);
    CHECK(v.violations[0].magnitude == 1);

    SportsInstance shortfall = plain(6);
    shortfall.constraints.ga1.push_back({{{1, 2}, {2, 1}}, 3, 9, all_slots(6)});
    Verdict w = validate(circle_method(6), shortfall);
    require_all_id(w, "GA1", 1);
    CHECK(w.violations[0].magnitude == 1);
}

TEST_CASE("sports: FA2 flags a home-count spread above two") {
    SportsInstance inst = plain(4);
    inst.constraints.fa2 = true;
    Verdict v = validate(craft4(), inst);
    require_all_id(v, "FA2", 1);
    CHECK(v.violations[0].magnitude == 1);
    CHECK(v.violations[0].detail.find("slot 3") != std::string::npos);
}

TEST_CASE("sports: SE1 flags meetings that are too close together") {
    SportsInstance inst = plain(6);
    inst.constraints.se1.push_back({10});
    Verdict v = validate(circle_method(6), inst);
    // every pair meets again five slots later, fifteen pairs in total
    require_all_id(v, "SE1", 15);
    for (const Violation& viol : v.violations) CHECK(viol.magnitude == 6);

    SportsInstance lax = plain(6);
    lax.constraints.se1.push_back({4});
    CHECK(validate(circle_method(6), lax).feasible);
}

TEST_CASE("sports: constraint checks are independent") {
    SportsInstance inst = plain(6);
    inst.constraints.ca1.push_back({1, 0, BoundMode::AtMost, all_slots(6), true});
    inst.constraints.ga1.push_back({{{1, 2}}, 0, 0, all_slots(6)});
    Verdict v = validate(circle_method(6), inst);
    REQUIRE_FALSE(v.feasible);
    REQUIRE(v.violations.size() == 2);
    CHECK(v.violations[0].id == "CA1");
    CHECK(v.violations[0].magnitude == 5);
    CHECK(v.violations[1].id == "GA1");
    CHECK(v.violations[1].magnitude == 1);
}

TEST_CASE("sports: timetable text round trip") {
    for (int n : {2, 4, 6, 12}) {
        CAPTURE(n);
        Timetable tt = circle_method(n);
        std::string text = write_timetable(tt);
        Timetable back = parse_timetable(text);
        CHECK(back.n == tt.n);
        CHECK(back.slots == tt.slots);
        CHECK(write_timetable(back) == text);
    }
}

TEST_CASE("sports: timetable text tolerates comments and blank lines") {
    Timetable tt = parse_timetable("# title\n\n1-2\n\n2-1\n");
    CHECK(tt.n == 2);
    CHECK(tt.slots[0] == std::vector<std::pair<int, int>>{{1, 2}});
}

TEST_CASE("sports: timetable text rejects malformed input") {
    CHECK_THROWS_AS(parse_timetable(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_timetable("1+2\n2-1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timetable("1-2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timetable("0-1\n1-0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timetable("2-2\n1-2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timetable("1-2 3-4\n2-1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timetable("1-2\n2-1\n1-2\n"), std::invalid_argument);
}

TEST_CASE("sports: robin xml minimal document") {
    std::string xml =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<!-- four teams -->\n" +
        wrap_xml(4, kPhased,
                 "<CapacityConstraints>"
                 "<CA1 teams=\"0\" max=\"0\" mode=\"H\" slots=\"0;1;2\" type=\"HARD\"/>"
                 "</CapacityConstraints>");
    SportsInstance inst = parse_robinx(xml);
    CHECK(inst.n == 4);
    CHECK(inst.phased);
    REQUIRE(inst.constraints.ca1.size() == 1);
    const Ca1& c = inst.constraints.ca1[0];
    CHECK(c.team == 1);
    CHECK(c.k == 0);
    CHECK(c.mode == BoundMode::AtMost);
    CHECK(c.home);
    CHECK(c.slots == std::vector<int>{1, 2, 3});

    // ties the parsed constraint to the checker: team 1 hosts all of slots 1..3
    Verdict v = validate(craft4(), inst);
    require_all_id(v, "CA1", 1);
    CHECK(v.violations[0].magnitude == 3);
}

TEST_CASE("sports: robin xml full constraint grammar") {
    std::vector<std::string> warnings;
    std::string xml = wrap_xml(
        6, kPhased,
        "<CapacityConstraints>"
        "<CA1 teams=\"0;1;\" min=\"1\" max=\"4\" mode=\"H\" slots=\"0;1;2;3;4\"/>"
        "<CA2 teams1=\"0\" teams2=\"1;2\" min=\"0\" max=\"3\" mode1=\"A\" mode2=\"GLOBAL\" "
        "slots=\"0;1;2;3;4;5;6;7;8;9\"/>"
        "<CA3 max=\"2\" intp=\"3\" mode1=\"HA\" mode2=\"SLOTS\" teams1=\"0;1;2;3;4;5\"/>"
        "<CA4 teams1=\"0;1\" teams2=\"2;3\" max=\"2\" mode1=\"H\" mode2=\"GLOBAL\" "
        "slots=\"0;1;2\"/>"
        "</CapacityConstraints>"
        "<BreakConstraints>"
        "<BR1 teams=\"2\" intp=\"1\" mode1=\"HA\" mode2=\"LEQ\" slots=\"1;2;3\"/>"
        "<BR2 intp=\"6\" homeMode=\"HA\" mode2=\"LEQ\" teams=\"0;1;2;3;4;5\" "
        "slots=\"0;1;2;3;4;5;6;7;8;9\"/>"
        "</BreakConstraints>"
        "<GameConstraints>"
        "<GA1 min=\"1\" max=\"2\" meetings=\"0,1;2,3\" slots=\"0;1;2;3\"/>"
        "</GameConstraints>"
        "<FairnessConstraints>"
        "<FA2 intp=\"2\" mode=\"H\" teams=\"0;1;2;3;4;5\" slots=\"0;1;2;3;4;5;6;7;8;9\"/>"
        "</FairnessConstraints>"
        "<SeparationConstraints>"
        "<SE1 min=\"4\" mode1=\"SLOTS\" teams=\"0;1;2;3;4;5\"/>"
        "</SeparationConstraints>");
    SportsInstance inst = parse_robinx(xml, true, &warnings);
    CHECK(warnings.empty());
    CHECK(inst.n == 6);

    REQUIRE(inst.constraints.ca1.size() == 4);
    CHECK(inst.constraints.ca1[0].team == 1);
    CHECK(inst.constraints.ca1[0].mode == BoundMode::AtLeast);
    CHECK(inst.constraints.ca1[0].k == 1);
    CHECK(inst.constraints.ca1[1].mode == BoundMode::AtMost);
    CHECK(inst.constraints.ca1[1].k == 4);
    CHECK(inst.constraints.ca1[2].team == 2);
    CHECK(inst.constraints.ca1[0].slots == std::vector<int>{1, 2, 3, 4, 5});

    REQUIRE(inst.constraints.ca2.size() == 1);
    CHECK(inst.constraints.ca2[0].team == 1);
    CHECK(inst.constraints.ca2[0].venue == Venue::Away);
    CHECK(inst.constraints.ca2[0].opponents == std::vector<int>{2, 3});
    CHECK(inst.constraints.ca2[0].k == 3);

    CHECK(inst.constraints.ca3);

    REQUIRE(inst.constraints.ca4.size() == 1);
    CHECK(inst.constraints.ca4[0].t1 == std::vector<int>{1, 2});
    CHECK(inst.constraints.ca4[0].t2 == std::vector<int>{3, 4});
    CHECK(inst.constraints.ca4[0].k == 2);

    REQUIRE(inst.constraints.br1.size() == 1);
    CHECK(inst.constraints.br1[0].team == 3);
    CHECK(inst.constraints.br1[0].k == 1);
    CHECK(inst.constraints.br1[0].slots == std::vector<int>{2, 3, 4});

    REQUIRE(inst.constraints.br2.size() == 1);
    CHECK(inst.constraints.br2[0].k == 6);

    REQUIRE(inst.constraints.ga1.size() == 1);
    CHECK(inst.constraints.ga1[0].games ==
          std::vector<std::pair<int, int>>{{1, 2}, {3, 4}});
    CHECK(inst.constraints.ga1[0].k_min == 1);
    CHECK(inst.constraints.ga1[0].k_max == 2);

    CHECK(inst.constraints.fa2);

    REQUIRE(inst.constraints.se1.size() == 1);
    CHECK(inst.constraints.se1[0].min_separation == 4);
}

TEST_CASE("sports: robin xml soft constraints") {
    std::string xml = wrap_xml(4, kPhased,
                               "<FairnessConstraints>"
                               "<FA2 type=\"SOFT\" intp=\"2\" mode=\"H\"/>"
                               "</FairnessConstraints>");
    std::vector<std::string> warnings;
    SportsInstance inst = parse_robinx(xml, true, &warnings);
    CHECK_FALSE(inst.constraints.fa2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("FA2") != std::string::npos);

    CHECK_THROWS_AS(parse_robinx(xml, false), std::invalid_argument);
}

TEST_CASE("sports: robin xml rejects unsupported content") {
    SUBCASE("unknown constraint type") {
        std::string xml = wrap_xml(4, kPhased,
                                   "<CapacityConstraints><CA5 teams=\"0\"/></CapacityConstraints>");
        CHECK_THROWS_WITH_AS(parse_robinx(xml), doctest::Contains("CA5"), std::invalid_argument);
    }
    SUBCASE("unknown constraint group") {
        std::string xml = wrap_xml(4, kPhased, "<CostConstraints/>");
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("triple round robin") {
        std::string xml = wrap_xml(
            4, "<Structure><Format><numberRoundRobin>3</numberRoundRobin></Format></Structure>",
            "");
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("unknown hardness") {
        std::string xml = wrap_xml(4, kPhased,
                                   "<BreakConstraints><BR2 type=\"MEDIUM\" intp=\"0\"/>"
                                   "</BreakConstraints>");
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("relaxed three-in-a-row bound") {
        std::string xml =
            wrap_xml(4, kPhased,
                     "<CapacityConstraints><CA3 max=\"3\" intp=\"4\"/></CapacityConstraints>");
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("unsupported attribute value") {
        std::string xml = wrap_xml(4, kPhased,
                                   "<CapacityConstraints>"
                                   "<CA1 teams=\"0\" max=\"1\" mode=\"HA\" slots=\"0\"/>"
                                   "</CapacityConstraints>");
        CHECK_THROWS_WITH_AS(parse_robinx(xml), doctest::Contains("mode"), std::invalid_argument);
    }
}

TEST_CASE("sports: robin xml rejects malformed resources") {
    SUBCASE("slot count mismatch") {
        std::string xml =
            "<Instance><Resources><Teams><team id=\"0\"/><team id=\"1\"/></Teams>"
            "<Slots><slot id=\"0\"/></Slots></Resources></Instance>";
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("duplicate team id") {
        std::string xml =
            "<Instance><Resources><Teams><team id=\"0\"/><team id=\"0\"/></Teams>"
            "<Slots><slot id=\"0\"/><slot id=\"1\"/></Slots></Resources></Instance>";
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("team ids with a gap") {
        std::string xml =
            "<Instance><Resources><Teams><team id=\"0\"/><team id=\"2\"/></Teams>"
            "<Slots><slot id=\"0\"/><slot id=\"1\"/></Slots></Resources></Instance>";
        CHECK_THROWS_AS(parse_robinx(xml), std::invalid_argument);
    }
    SUBCASE("missing resources") {
        CHECK_THROWS_AS(parse_robinx("<Instance/>"), std::invalid_argument);
    }
    SUBCASE("wrong root") {
        CHECK_THROWS_AS(parse_robinx("<Timetable/>"), std::invalid_argument);
    }
}

TEST_CASE("sports: robin xml syntax errors") {
    CHECK_THROWS_AS(parse_robinx("<Instance><Resources></Instance>"), std::invalid_argument);
    CHECK_THROWS_AS(parse_robinx("<Instance>&bad;</Instance>"), std::invalid_argument);
    CHECK_THROWS_AS(parse_robinx("<Instance attr=value/>"), std::invalid_argument);
    CHECK_THROWS_AS(parse_robinx("<Instance/><Instance/>"), std::invalid_argument);
    CHECK_THROWS_AS(parse_robinx("<Instance><!-- open"), std::invalid_argument);
}

TEST_CASE("sports: robin xml entities and defaults") {
    std::string xml =
        "<Instance><Resources><Teams>"
        "<team id=\"0\" name=\"A &amp; B &lt;x&gt;\"/><team id=\"1\"/></Teams>"
        "<Slots><slot id=\"0\"/><slot id=\"1\"/></Slots></Resources></Instance>";
    std::vector<std::string> warnings;
    SportsInstance inst = parse_robinx(xml, true, &warnings);
    CHECK(inst.n == 2);
    CHECK_FALSE(inst.phased);
    CHECK(warnings.empty());

    Verdict v = validate(circle_method(2), inst);
    CHECK(v.feasible);
}

TEST_CASE("sports: robin xml warns about inactive bounds") {
    std::string xml = wrap_xml(4, kPhased,
                               "<CapacityConstraints>"
                               "<CA1 teams=\"0\" min=\"0\" mode=\"H\" slots=\"0\"/>"
                               "</CapacityConstraints>");
    std::vector<std::string> warnings;
    SportsInstance inst = parse_robinx(xml, true, &warnings);
    CHECK(inst.constraints.ca1.empty());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("CA1") != std::string::npos);
}

TEST_CASE("sports: bundled tournament fixture validates cleanly") {
    std::string xml = read_file(std::string(FIXTURES_DIR) + "/sports/itc_test.xml");
    std::vector<std::string> warnings;
    SportsInstance inst = parse_robinx(xml, true, &warnings);
    CHECK(inst.n == 12);
    CHECK(inst.phased);
    CHECK_FALSE(inst.constraints.ca1.empty());
    CHECK_FALSE(inst.constraints.ca2.empty());
    CHECK(inst.constraints.ca3);
    CHECK_FALSE(inst.constraints.ca4.empty());
    CHECK_FALSE(inst.constraints.br1.empty());
    CHECK_FALSE(inst.constraints.br2.empty());
    CHECK_FALSE(inst.constraints.ga1.empty());
    CHECK(inst.constraints.fa2);
    CHECK_FALSE(inst.constraints.se1.empty());
    CHECK(warnings.size() == 1);  // one soft constraint is part of the file

    Timetable tt = parse_timetable(read_file(std::string(FIXTURES_DIR) + "/sports/itc_test.sol"));
    CHECK(tt.n == 12);
    Verdict v = validate(tt, inst);
    CHECK(v.feasible);
    CHECK(v.violations.empty());

    // tightening the total break bound by one must flip the verdict
    SportsInstance tighter = inst;
    REQUIRE(tighter.constraints.br2.size() == 1);
    REQUIRE(tighter.constraints.br2[0].k > 0);
    --tighter.constraints.br2[0].k;
    CHECK_FALSE(validate(tt, tighter).feasible);
}
