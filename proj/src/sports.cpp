#include "optbench/sports.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace optbench {

namespace {

std::string slot_list_str(size_t count) { return std::to_string(count) + " given slots"; }

void check_team(int t, int n, const char* what) {
    if (t < 1 || t > n)
        throw std::invalid_argument(std::string("sports: ") + what + " team " + std::to_string(t) +
                                    " out of range");
}

void check_slots(const std::vector<int>& slots, int max_slot, const char* what) {
    for (int s : slots)
        if (s < 1 || s > max_slot)
            throw std::invalid_argument(std::string("sports: ") + what + " slot " +
                                        std::to_string(s) + " out of range");
}

}  // namespace

Timetable circle_method(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("circle_method: team count must be even and at least 2");
    Timetable tt;
    tt.n = n;
    int m = n - 1;
    tt.slots.resize(static_cast<size_t>(2 * m));
    for (int r = 1; r <= m; ++r) {
        auto& games = tt.slots[static_cast<size_t>(r - 1)];
        if (r % 2 == 1)
            games.push_back({r, n});
        else
            games.push_back({n, r});
        for (int i = 1; i <= n / 2 - 1; ++i) {
            int a = (r - 1 + i) % m + 1;
            int b = ((r - 1 - i) % m + m) % m + 1;
            if (i % 2 == 1)
                games.push_back({a, b});
            else
                games.push_back({b, a});
        }
        auto& mirror = tt.slots[static_cast<size_t>(m + r - 1)];
        for (auto [h, a] : games) mirror.push_back({a, h});
    }
    return tt;
}

void SportsInstance::validate() const {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("sports: team count must be even and at least 2");
    int max_slot = 2 * (n - 1);
    for (const Ca1& c : constraints.ca1) {
        check_team(c.team, n, "CA1");
        check_slots(c.slots, max_slot, "CA1");
        if (c.k < 0) throw std::invalid_argument("sports: CA1 bound must be nonnegative");
    }
    for (const Ca2& c : constraints.ca2) {
        check_team(c.team, n, "CA2");
        for (int o : c.opponents) check_team(o, n, "CA2");
        check_slots(c.slots, max_slot, "CA2");
        if (c.k < 0) throw std::invalid_argument("sports: CA2 bound must be nonnegative");
    }
    for (const Ca4& c : constraints.ca4) {
        for (int t : c.t1) check_team(t, n, "CA4");
        for (int t : c.t2) check_team(t, n, "CA4");
        check_slots(c.slots, max_slot, "CA4");
        if (c.k < 0) throw std::invalid_argument("sports: CA4 bound must be nonnegative");
    }
    for (const Br1& c : constraints.br1) {
        check_team(c.team, n, "BR1");
        check_slots(c.slots, max_slot, "BR1");
        if (c.k < 0) throw std::invalid_argument("sports: BR1 bound must be nonnegative");
    }
    for (const Br2& c : constraints.br2)
        if (c.k < 0) throw std::invalid_argument("sports: BR2 bound must be nonnegative");
    for (const Ga1& c : constraints.ga1) {
        for (auto [h, a] : c.games) {
            check_team(h, n, "GA1");
            check_team(a, n, "GA1");
            if (h == a) throw std::invalid_argument("sports: GA1 game has equal teams");
        }
        check_slots(c.slots, max_slot, "GA1");
        if (c.k_min < 0 || c.k_max < c.k_min)
            throw std::invalid_argument("sports: GA1 bounds must satisfy 0 <= min <= max");
    }
    for (const Se1& c : constraints.se1)
        if (c.min_separation < 0)
            throw std::invalid_argument("sports: SE1 separation must be nonnegative");
}

Verdict validate(const Timetable& tt, const SportsInstance& inst) {
    inst.validate();
    if (tt.n != inst.n)
        throw std::invalid_argument("validate: timetable and instance team counts differ");
    int n = tt.n;
    int total_slots = 2 * (n - 1);
    if (static_cast<int>(tt.slots.size()) != total_slots)
        throw std::invalid_argument("validate: expected " + std::to_string(total_slots) +
                                    " slots, got " + std::to_string(tt.slots.size()));
    for (const auto& games : tt.slots)
        for (auto [h, a] : games) {
            if (h < 1 || h > n || a < 1 || a > n)
                throw std::invalid_argument("validate: team index out of range");
            if (h == a)
                throw std::invalid_argument("validate: team " + std::to_string(h) +
                                            " paired with itself");
        }

    Verdict verdict = Verdict::ok();

    // venue[t][s]: +1 home, -1 away, 0 idle (malformed tables only)
    std::vector<std::vector<int>> venue(static_cast<size_t>(n + 1),
                                        std::vector<int>(static_cast<size_t>(total_slots + 1), 0));
    std::vector<std::vector<int>> pair_count(static_cast<size_t>(n + 1),
                                             std::vector<int>(static_cast<size_t>(n + 1), 0));
    std::map<std::pair<int, int>, std::vector<int>> meetings;  // unordered pair -> slots

    for (int s = 1; s <= total_slots; ++s) {
        std::vector<int> plays(static_cast<size_t>(n + 1), 0);
        for (auto [h, a] : tt.slots[static_cast<size_t>(s - 1)]) {
            ++plays[static_cast<size_t>(h)];
            ++plays[static_cast<size_t>(a)];
            venue[static_cast<size_t>(h)][static_cast<size_t>(s)] = 1;
            venue[static_cast<size_t>(a)][static_cast<size_t>(s)] = -1;
            ++pair_count[static_cast<size_t>(h)][static_cast<size_t>(a)];
            meetings[std::minmax(h, a)].push_back(s);
        }
        for (int t = 1; t <= n; ++t)
            if (plays[static_cast<size_t>(t)] != 1)
                verdict.add_violation("matching",
                                      "team " + std::to_string(t) + " plays " +
                                          std::to_string(plays[static_cast<size_t>(t)]) +
                                          " times in slot " + std::to_string(s),
                                      std::abs(plays[static_cast<size_t>(t)] - 1));
    }

    for (int h = 1; h <= n; ++h)
        for (int a = 1; a <= n; ++a) {
            if (h == a) continue;
            int c = pair_count[static_cast<size_t>(h)][static_cast<size_t>(a)];
            if (c != 1)
                verdict.add_violation("pairing",
                                      "home game " + std::to_string(h) + "-" + std::to_string(a) +
                                          " occurs " + std::to_string(c) + " times",
                                      std::abs(c - 1));
        }

    if (inst.phased) {
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                int first = 0;
                auto it = meetings.find({i, j});
                if (it != meetings.end())
                    for (int s : it->second)
                        if (s <= n - 1) ++first;
                if (first != 1)
                    verdict.add_violation("phase",
                                          "teams " + std::to_string(i) + " and " +
                                              std::to_string(j) + " meet " +
                                              std::to_string(first) + " times in the first phase",
                                          std::abs(first - 1));
            }
    }

    auto is_break = [&](int t, int s) {
        return s >= 2 && venue[static_cast<size_t>(t)][static_cast<size_t>(s)] != 0 &&
               venue[static_cast<size_t>(t)][static_cast<size_t>(s)] ==
                   venue[static_cast<size_t>(t)][static_cast<size_t>(s - 1)];
    };

    for (const Ca1& c : inst.constraints.ca1) {
        std::set<int> window(c.slots.begin(), c.slots.end());
        long long count = 0;
        for (int s : window)
            if (venue[static_cast<size_t>(c.team)][static_cast<size_t>(s)] == (c.home ? 1 : -1))
                ++count;
        const char* kind = c.home ? "home" : "away";
        if (c.mode == BoundMode::AtMost && count > c.k)
            verdict.add_violation("CA1",
                                  "team " + std::to_string(c.team) + " has " +
                                      std::to_string(count) + " " + kind + " games in " +
                                      slot_list_str(window.size()) + ", at most " +
                                      std::to_string(c.k) + " allowed",
                                  count - c.k);
        if (c.mode == BoundMode::AtLeast && count < c.k)
            verdict.add_violation("CA1",
                                  "team " + std::to_string(c.team) + " has " +
                                      std::to_string(count) + " " + kind + " games in " +
                                      slot_list_str(window.size()) + ", at least " +
                                      std::to_string(c.k) + " required",
                                  c.k - count);
    }

    for (const Ca2& c : inst.constraints.ca2) {
        std::set<int> window(c.slots.begin(), c.slots.end());
        std::set<int> opp(c.opponents.begin(), c.opponents.end());
        long long count = 0;
        for (int s : window)
            for (auto [h, a] : tt.slots[static_cast<size_t>(s - 1)]) {
                bool at_home = h == c.team && opp.count(a) > 0;
                bool on_road = a == c.team && opp.count(h) > 0;
                if (c.venue == Venue::Home && at_home) ++count;
                if (c.venue == Venue::Away && on_road) ++count;
                if (c.venue == Venue::Any && (at_home || on_road)) ++count;
            }
        if (c.mode == BoundMode::AtMost && count > c.k)
            verdict.add_violation("CA2",
                                  "team " + std::to_string(c.team) + " meets the listed opponents " +
                                      std::to_string(count) + " times, at most " +
                                      std::to_string(c.k) + " allowed",
                                  count - c.k);
        if (c.mode == BoundMode::AtLeast && count < c.k)
            verdict.add_violation("CA2",
                                  "team " + std::to_string(c.team) + " meets the listed opponents " +
                                      std::to_string(count) + " times, at least " +
                                      std::to_string(c.k) + " required",
                                  c.k - count);
    }

    if (inst.constraints.ca3) {
        for (int t = 1; t <= n; ++t) {
            int run = 0;
            int prev = 0;
            for (int s = 1; s <= total_slots + 1; ++s) {
                int v = s <= total_slots ? venue[static_cast<size_t>(t)][static_cast<size_t>(s)] : 0;
                if (v != 0 && v == prev) {
                    ++run;
                } else {
                    if (prev != 0 && run >= 3)
                        verdict.add_violation(
                            "CA3",
                            "team " + std::to_string(t) + " plays " + std::to_string(run) +
                                " consecutive " + (prev == 1 ? "home" : "away") +
                                " games ending at slot " + std::to_string(s - 1),
                            run - 2);
                    run = v == 0 ? 0 : 1;
                }
                prev = v;
            }
        }
    }

    for (const Ca4& c : inst.constraints.ca4) {
        std::set<int> window(c.slots.begin(), c.slots.end());
        std::set<int> t1(c.t1.begin(), c.t1.end());
        std::set<int> t2(c.t2.begin(), c.t2.end());
        long long count = 0;
        for (int s : window)
            for (auto [h, a] : tt.slots[static_cast<size_t>(s - 1)])
                if (t1.count(h) > 0 && t2.count(a) > 0) ++count;
        if (count > c.k)
            verdict.add_violation("CA4",
                                  "group plays " + std::to_string(count) +
                                      " home games against the second group, at most " +
                                      std::to_string(c.k) + " allowed",
                                  count - c.k);
    }

    for (const Br1& c : inst.constraints.br1) {
        std::set<int> window(c.slots.begin(), c.slots.end());
        long long count = 0;
        for (int s : window)
            if (is_break(c.team, s)) ++count;
        if (count > c.k)
            verdict.add_violation("BR1",
                                  "team " + std::to_string(c.team) + " has " +
                                      std::to_string(count) + " breaks in " +
                                      slot_list_str(window.size()) + ", at most " +
                                      std::to_string(c.k) + " allowed",
                                  count - c.k);
    }

    for (const Br2& c : inst.constraints.br2) {
        long long count = 0;
        for (int t = 1; t <= n; ++t)
            for (int s = 2; s <= total_slots; ++s)
                if (is_break(t, s)) ++count;
        if (count > c.k)
            verdict.add_violation("BR2",
                                  std::to_string(count) + " breaks in total, at most " +
                                      std::to_string(c.k) + " allowed",
                                  count - c.k);
    }

    for (const Ga1& c : inst.constraints.ga1) {
        std::set<int> window(c.slots.begin(), c.slots.end());
        std::set<std::pair<int, int>> wanted(c.games.begin(), c.games.end());
        long long count = 0;
        for (int s : window)
            for (auto [h, a] : tt.slots[static_cast<size_t>(s - 1)])
                if (wanted.count({h, a}) > 0) ++count;
        if (count > c.k_max)
            verdict.add_violation("GA1",
                                  std::to_string(count) + " of the listed games in " +
                                      slot_list_str(window.size()) + ", at most " +
                                      std::to_string(c.k_max) + " allowed",
                                  count - c.k_max);
        if (count < c.k_min)
            verdict.add_violation("GA1",
                                  std::to_string(count) + " of the listed games in " +
                                      slot_list_str(window.size()) + ", at least " +
                                      std::to_string(c.k_min) + " required",
                                  c.k_min - count);
    }

    if (inst.constraints.fa2) {
        std::vector<long long> played_home(static_cast<size_t>(n + 1), 0);
        for (int s = 1; s <= total_slots; ++s) {
            for (auto [h, a] : tt.slots[static_cast<size_t>(s - 1)]) {
                (void)a;
                ++played_home[static_cast<size_t>(h)];
            }
            int lo = 1;
            int hi = 1;
            for (int t = 2; t <= n; ++t) {
                if (played_home[static_cast<size_t>(t)] < played_home[static_cast<size_t>(lo)])
                    lo = t;
                if (played_home[static_cast<size_t>(t)] > played_home[static_cast<size_t>(hi)])
                    hi = t;
            }
            long long diff =
                played_home[static_cast<size_t>(hi)] - played_home[static_cast<size_t>(lo)];
            if (diff > 2)
                verdict.add_violation("FA2",
                                      "after slot " + std::to_string(s) + " teams " +
                                          std::to_string(hi) + " and " + std::to_string(lo) +
                                          " differ by " + std::to_string(diff) + " home games",
                                      diff - 2);
        }
    }

    for (const Se1& c : inst.constraints.se1) {
        for (const auto& [pair, slots] : meetings) {
            for (size_t i = 1; i < slots.size(); ++i) {
                int gap = slots[i] - slots[i - 1] - 1;
                if (gap < c.min_separation)
                    verdict.add_violation("SE1",
                                          "games of teams " + std::to_string(pair.first) + " and " +
                                              std::to_string(pair.second) + " are only " +
                                              std::to_string(gap) + " slots apart, at least " +
                                              std::to_string(c.min_separation) + " required",
                                          c.min_separation - gap);
            }
        }
    }

    return verdict;
}

namespace {

struct XmlNode {
    std::string tag;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlNode> kids;
    std::string text;

    const std::string* attr(const std::string& name) const {
        for (const auto& [k, v] : attrs)
            if (k == name) return &v;
        return nullptr;
    }
    const XmlNode* kid(const std::string& name) const {
        for (const XmlNode& k : kids)
            if (k.tag == name) return &k;
        return nullptr;
    }
};

struct XmlReader {
    const std::string& s;
    size_t i = 0;

    explicit XmlReader(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("parse_robinx: " + why + " near offset " + std::to_string(i));
    }
    void skip_space() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool consume(const std::string& word) {
        if (s.compare(i, word.size(), word) == 0) {
            i += word.size();
            return true;
        }
        return false;
    }
    void skip_misc() {
        while (true) {
            skip_space();
            if (consume("<?")) {
                size_t end = s.find("?>", i);
                if (end == std::string::npos) fail("unterminated processing instruction");
                i = end + 2;
            } else if (consume("<!--")) {
                size_t end = s.find("-->", i);
                if (end == std::string::npos) fail("unterminated comment");
                i = end + 3;
            } else {
                return;
            }
        }
    }
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' ||
               c == '.';
    }
    std::string read_name() {
        size_t start = i;
        while (i < s.size() && name_char(s[i])) ++i;
        if (i == start) fail("expected a name");
        return s.substr(start, i - start);
    }
    std::string decode(const std::string& raw) {
        std::string out;
        for (size_t p = 0; p < raw.size(); ++p) {
            if (raw[p] != '&') {
                out += raw[p];
                continue;
            }
            size_t semi = raw.find(';', p);
            if (semi == std::string::npos) fail("bad entity reference");
            std::string name = raw.substr(p + 1, semi - p - 1);
            if (name == "amp")
                out += '&';
            else if (name == "lt")
                out += '<';
            else if (name == "gt")
                out += '>';
            else if (name == "quot")
                out += '"';
            else if (name == "apos")
                out += '\'';
            else
                fail("unknown entity '" + name + "'");
            p = semi;
        }
        return out;
    }
    XmlNode read_element() {
        skip_misc();
        if (!consume("<")) fail("expected an element");
        XmlNode node;
        node.tag = read_name();
        while (true) {
            skip_space();
            if (consume("/>")) return node;
            if (consume(">")) break;
            std::string key = read_name();
            skip_space();
            if (!consume("=")) fail("expected '=' after attribute " + key);
            skip_space();
            if (i >= s.size() || (s[i] != '"' && s[i] != '\'')) fail("expected a quoted value");
            char quote = s[i++];
            size_t end = s.find(quote, i);
            if (end == std::string::npos) fail("unterminated attribute value");
            node.attrs.push_back({key, decode(s.substr(i, end - i))});
            i = end + 1;
        }
        // content: children and text until the closing tag
        std::string text;
        while (true) {
            size_t lt = s.find('<', i);
            if (lt == std::string::npos) fail("missing closing tag for " + node.tag);
            text += s.substr(i, lt - i);
            i = lt;
            if (consume("<!--")) {
                size_t end = s.find("-->", i);
                if (end == std::string::npos) fail("unterminated comment");
                i = end + 3;
                continue;
            }
            if (s.compare(i, 2, "</") == 0) {
                i += 2;
                std::string closing = read_name();
                if (closing != node.tag)
                    fail("mismatched closing tag " + closing + " for " + node.tag);
                skip_space();
                if (!consume(">")) fail("malformed closing tag");
                break;
            }
            node.kids.push_back(read_element());
        }
        size_t a = text.find_first_not_of(" \t\r\n");
        if (a != std::string::npos) {
            size_t b = text.find_last_not_of(" \t\r\n");
            node.text = decode(text.substr(a, b - a + 1));
        }
        return node;
    }
};

long long to_int(const std::string& raw, const std::string& what) {
    size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(raw, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_robinx: bad integer in " + what + ": '" + raw + "'");
    }
    if (used != raw.size())
        throw std::invalid_argument("parse_robinx: bad integer in " + what + ": '" + raw + "'");
    return value;
}

// "0;3;4" -> values shifted to 1-based; empty items from trailing ';' ignored
std::vector<int> id_list(const std::string& raw, const std::string& what) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ';')) {
        if (item.empty()) continue;
        out.push_back(static_cast<int>(to_int(item, what)) + 1);
    }
    return out;
}

// "0,1;2,3" -> ordered pairs shifted to 1-based
std::vector<std::pair<int, int>> meeting_list(const std::string& raw, const std::string& what) {
    std::vector<std::pair<int, int>> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ';')) {
        if (item.empty()) continue;
        size_t comma = item.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("parse_robinx: bad meeting '" + item + "' in " + what);
        out.push_back({static_cast<int>(to_int(item.substr(0, comma), what)) + 1,
                       static_cast<int>(to_int(item.substr(comma + 1), what)) + 1});
    }
    return out;
}

struct ConstraintContext {
    bool ignore_soft;
    std::vector<std::string>* warnings;

    void warn(const std::string& msg) const {
        if (warnings) warnings->push_back(msg);
    }
};

// returns false if the element is soft and should be skipped
bool accept_hardness(const XmlNode& e, const ConstraintContext& ctx) {
    const std::string* type = e.attr("type");
    if (!type || *type == "HARD") return true;
    if (*type != "SOFT")
        throw std::invalid_argument("parse_robinx: unknown constraint type attribute '" + *type +
                                    "' on " + e.tag);
    if (!ctx.ignore_soft)
        throw std::invalid_argument("parse_robinx: soft " + e.tag +
                                    " not supported in the feasibility setting");
    ctx.warn("dropped soft " + e.tag);
    return false;
}

void require_value(const XmlNode& e, const char* key, const std::set<std::string>& allowed) {
    const std::string* v = e.attr(key);
    if (!v) return;
    if (!allowed.count(*v))
        throw std::invalid_argument("parse_robinx: unsupported " + e.tag + " " + key + "='" + *v +
                                    "'");
}

long long attr_int(const XmlNode& e, const char* key, long long fallback) {
    const std::string* v = e.attr(key);
    return v ? to_int(*v, e.tag) : fallback;
}

}  // namespace

SportsInstance parse_robinx(const std::string& xml, bool ignore_soft,
                            std::vector<std::string>* warnings) {
    XmlReader reader(xml);
    XmlNode root = reader.read_element();
    reader.skip_misc();
    if (reader.i != xml.size())
        throw std::invalid_argument("parse_robinx: trailing content after the root element");
    if (root.tag != "Instance")
        throw std::invalid_argument("parse_robinx: root element must be Instance, got " + root.tag);

    SportsInstance inst;
    inst.phased = false;
    ConstraintContext ctx{ignore_soft, warnings};

    const XmlNode* resources = root.kid("Resources");
    if (!resources) throw std::invalid_argument("parse_robinx: missing Resources");
    const XmlNode* teams = resources->kid("Teams");
    if (!teams) throw std::invalid_argument("parse_robinx: missing Teams");
    std::set<long long> team_ids;
    for (const XmlNode& t : teams->kids) {
        if (t.tag != "team")
            throw std::invalid_argument("parse_robinx: unexpected element " + t.tag + " in Teams");
        const std::string* id = t.attr("id");
        if (!id) throw std::invalid_argument("parse_robinx: team without id");
        if (!team_ids.insert(to_int(*id, "team id")).second)
            throw std::invalid_argument("parse_robinx: duplicate team id " + *id);
    }
    inst.n = static_cast<int>(team_ids.size());
    if (inst.n < 2 || !team_ids.count(0) || !team_ids.count(inst.n - 1))
        throw std::invalid_argument("parse_robinx: team ids must be 0..n-1");

    const XmlNode* slots = resources->kid("Slots");
    if (!slots) throw std::invalid_argument("parse_robinx: missing Slots");
    std::set<long long> slot_ids;
    for (const XmlNode& t : slots->kids) {
        if (t.tag != "slot")
            throw std::invalid_argument("parse_robinx: unexpected element " + t.tag + " in Slots");
        const std::string* id = t.attr("id");
        if (!id) throw std::invalid_argument("parse_robinx: slot without id");
        if (!slot_ids.insert(to_int(*id, "slot id")).second)
            throw std::invalid_argument("parse_robinx: duplicate slot id " + *id);
    }
    if (static_cast<int>(slot_ids.size()) != 2 * (inst.n - 1))
        throw std::invalid_argument("parse_robinx: expected " + std::to_string(2 * (inst.n - 1)) +
                                    " slots for " + std::to_string(inst.n) + " teams");

    if (const XmlNode* structure = root.kid("Structure")) {
        if (const XmlNode* format = structure->kid("Format")) {
            if (const XmlNode* rr = format->kid("numberRoundRobin")) {
                if (rr->text != "2")
                    throw std::invalid_argument(
                        "parse_robinx: only double round robins are supported, got "
                        "numberRoundRobin=" +
                        rr->text);
            }
            if (const XmlNode* mode = format->kid("gameMode")) {
                if (mode->text == "P")
                    inst.phased = true;
                else if (mode->text != "NP")
                    throw std::invalid_argument("parse_robinx: unsupported gameMode " + mode->text);
            }
        }
    }

    const XmlNode* constraints = root.kid("Constraints");
    ConstraintSet& cs = inst.constraints;
    if (constraints) {
        for (const XmlNode& group : constraints->kids) {
            static const std::set<std::string> kGroups = {
                "CapacityConstraints", "BreakConstraints", "GameConstraints",
                "FairnessConstraints", "SeparationConstraints"};
            if (!kGroups.count(group.tag))
                throw std::invalid_argument("parse_robinx: unsupported constraint group " +
                                            group.tag);
            for (const XmlNode& e : group.kids) {
                if (e.tag == "CA1") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode", {"H", "A"});
                    const std::string* mode = e.attr("mode");
                    bool home = !mode || *mode == "H";
                    const std::string* ts = e.attr("teams");
                    const std::string* sl = e.attr("slots");
                    if (!ts || !sl)
                        throw std::invalid_argument("parse_robinx: CA1 needs teams and slots");
                    long long lo = attr_int(e, "min", 0);
                    const std::string* max_raw = e.attr("max");
                    if (lo == 0 && !max_raw) ctx.warn("CA1 with no active bound ignored");
                    for (int team : id_list(*ts, "CA1 teams")) {
                        if (lo > 0)
                            cs.ca1.push_back(
                                {team, lo, BoundMode::AtLeast, id_list(*sl, "CA1 slots"), home});
                        if (max_raw)
                            cs.ca1.push_back({team, to_int(*max_raw, "CA1 max"), BoundMode::AtMost,
                                              id_list(*sl, "CA1 slots"), home});
                    }
                } else if (e.tag == "CA2") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode1", {"H", "A", "HA"});
                    require_value(e, "mode2", {"GLOBAL"});
                    const std::string* mode1 = e.attr("mode1");
                    Venue venue = Venue::Any;
                    if (mode1 && *mode1 == "H") venue = Venue::Home;
                    if (mode1 && *mode1 == "A") venue = Venue::Away;
                    const std::string* t1 = e.attr("teams1");
                    const std::string* t2 = e.attr("teams2");
                    const std::string* sl = e.attr("slots");
                    if (!t1 || !t2 || !sl)
                        throw std::invalid_argument(
                            "parse_robinx: CA2 needs teams1, teams2 and slots");
                    long long lo = attr_int(e, "min", 0);
                    const std::string* max_raw = e.attr("max");
                    if (lo == 0 && !max_raw) ctx.warn("CA2 with no active bound ignored");
                    for (int team : id_list(*t1, "CA2 teams1")) {
                        if (lo > 0)
                            cs.ca2.push_back({team, lo, BoundMode::AtLeast, venue,
                                              id_list(*t2, "CA2 teams2"),
                                              id_list(*sl, "CA2 slots")});
                        if (max_raw)
                            cs.ca2.push_back({team, to_int(*max_raw, "CA2 max"), BoundMode::AtMost,
                                              venue, id_list(*t2, "CA2 teams2"),
                                              id_list(*sl, "CA2 slots")});
                    }
                } else if (e.tag == "CA3") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode1", {"HA"});
                    require_value(e, "mode2", {"SLOTS"});
                    if (attr_int(e, "max", 2) != 2 || attr_int(e, "intp", 3) != 3)
                        throw std::invalid_argument(
                            "parse_robinx: only the two-in-a-row form of CA3 is supported");
                    cs.ca3 = true;
                } else if (e.tag == "CA4") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode1", {"H"});
                    require_value(e, "mode2", {"GLOBAL"});
                    if (attr_int(e, "min", 0) != 0)
                        throw std::invalid_argument("parse_robinx: CA4 lower bounds not supported");
                    const std::string* t1 = e.attr("teams1");
                    const std::string* t2 = e.attr("teams2");
                    const std::string* sl = e.attr("slots");
                    if (!t1 || !t2 || !sl)
                        throw std::invalid_argument(
                            "parse_robinx: CA4 needs teams1, teams2 and slots");
                    cs.ca4.push_back({id_list(*t1, "CA4 teams1"), id_list(*t2, "CA4 teams2"),
                                      attr_int(e, "max", 0), id_list(*sl, "CA4 slots")});
                } else if (e.tag == "BR1") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode1", {"HA"});
                    require_value(e, "betype", {"HA"});
                    require_value(e, "mode2", {"LEQ"});
                    const std::string* ts = e.attr("teams");
                    const std::string* sl = e.attr("slots");
                    if (!ts || !sl)
                        throw std::invalid_argument("parse_robinx: BR1 needs teams and slots");
                    for (int team : id_list(*ts, "BR1 teams"))
                        cs.br1.push_back({team, attr_int(e, "intp", 0), id_list(*sl, "BR1 slots")});
                } else if (e.tag == "BR2") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "homeMode", {"HA"});
                    require_value(e, "betype", {"HA"});
                    require_value(e, "mode2", {"LEQ"});
                    cs.br2.push_back({attr_int(e, "intp", 0)});
                } else if (e.tag == "GA1") {
                    if (!accept_hardness(e, ctx)) continue;
                    const std::string* games = e.attr("meetings");
                    const std::string* sl = e.attr("slots");
                    if (!games || !sl)
                        throw std::invalid_argument("parse_robinx: GA1 needs meetings and slots");
                    long long lo = attr_int(e, "min", 0);
                    long long hi = attr_int(e, "max", -1);
                    if (hi < 0) hi = static_cast<long long>(meeting_list(*games, "GA1").size()) *
                                     2 * (inst.n - 1);
                    cs.ga1.push_back(
                        {meeting_list(*games, "GA1 meetings"), lo, hi, id_list(*sl, "GA1 slots")});
                } else if (e.tag == "FA2") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode", {"H"});
                    if (attr_int(e, "intp", 2) != 2)
                        throw std::invalid_argument(
                            "parse_robinx: only the spread-two form of FA2 is supported");
                    cs.fa2 = true;
                } else if (e.tag == "SE1") {
                    if (!accept_hardness(e, ctx)) continue;
                    require_value(e, "mode1", {"SLOTS"});
                    cs.se1.push_back({static_cast<int>(attr_int(e, "min", 10))});
                } else {
                    throw std::invalid_argument("parse_robinx: unsupported constraint type " +
                                                e.tag);
                }
            }
        }
    }

    inst.validate();
    return inst;
}

std::string write_timetable(const Timetable& tt) {
    std::ostringstream out;
    for (const auto& games : tt.slots) {
        for (size_t g = 0; g < games.size(); ++g) {
            if (g) out << " ";
            out << games[g].first << "-" << games[g].second;
        }
        out << "\n";
    }
    return out.str();
}

Timetable parse_timetable(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::pair<int, int>>> slots;
    while (std::getline(in, line)) {
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::istringstream ls(line);
        std::string token;
        std::vector<std::pair<int, int>> games;
        while (ls >> token) {
            size_t dash = token.find('-');
            if (dash == std::string::npos || dash == 0 || dash + 1 == token.size())
                throw std::invalid_argument("parse_timetable: bad game '" + token + "'");
            games.push_back({static_cast<int>(to_int(token.substr(0, dash), "timetable")),
                             static_cast<int>(to_int(token.substr(dash + 1), "timetable"))});
        }
        if (games.empty()) throw std::invalid_argument("parse_timetable: empty slot line");
        slots.push_back(std::move(games));
    }
    if (slots.empty()) throw std::invalid_argument("parse_timetable: no slots");

    Timetable tt;
    tt.n = static_cast<int>(slots[0].size()) * 2;
    if (static_cast<int>(slots.size()) != 2 * (tt.n - 1))
        throw std::invalid_argument("parse_timetable: got " + std::to_string(slots.size()) +
                                    " slots for " + std::to_string(tt.n) + " teams");
    for (const auto& games : slots) {
        if (games.size() != slots[0].size())
            throw std::invalid_argument("parse_timetable: ragged slot sizes");
        for (auto [h, a] : games)
            if (h < 1 || h > tt.n || a < 1 || a > tt.n || h == a)
                throw std::invalid_argument("parse_timetable: team out of range in game " +
                                            std::to_string(h) + "-" + std::to_string(a));
    }
    tt.slots = std::move(slots);
    return tt;
}

}  // namespace optbench
