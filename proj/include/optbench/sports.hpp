#pragma once

#include <string>
#include <utility>
#include <vector>

#include "optbench/core.hpp"

namespace optbench {

// Double round robin timetable for n teams (even): slots[s] lists the games
// of time slot s+1 as ordered (home, away) pairs, teams 1-based. A valid
// table has 2(n-1) slots, each a perfect matching, and every ordered pair
// exactly once overall.
struct Timetable {
    int n = 0;
    std::vector<std::vector<std::pair<int, int>>> slots;
};

// First n-1 slots come from the circle one-factorization of K_n; the second
// phase repeats the pairings with home and away swapped, so the result is a
// phased double round robin.
Timetable circle_method(int n);

enum class BoundMode { AtLeast, AtMost };
enum class Venue { Home, Away, Any };

// team plays at least/at most k home (or away) games in the given slots
struct Ca1 {
    int team = 0;
    long long k = 0;
    BoundMode mode = BoundMode::AtMost;
    std::vector<int> slots;
    bool home = true;
};

// like Ca1 but restricted to games against the listed opponents
struct Ca2 {
    int team = 0;
    long long k = 0;
    BoundMode mode = BoundMode::AtMost;
    Venue venue = Venue::Any;
    std::vector<int> opponents;
    std::vector<int> slots;
};

// teams in t1 play at most k home games against teams in t2 in the slots
struct Ca4 {
    std::vector<int> t1;
    std::vector<int> t2;
    long long k = 0;
    std::vector<int> slots;
};

// team has at most k breaks located in the given slots
struct Br1 {
    int team = 0;
    long long k = 0;
    std::vector<int> slots;
};

// at most k breaks in total
struct Br2 {
    long long k = 0;
};

// between k_min and k_max of the listed ordered games in the given slots
struct Ga1 {
    std::vector<std::pair<int, int>> games;
    long long k_min = 0;
    long long k_max = 0;
    std::vector<int> slots;
};

// at least min_separation slots strictly between successive meetings of any
// two teams
struct Se1 {
    int min_separation = 10;
};

// ca3 bounds consecutive same-venue games by two for every team; fa2 caps
// the spread of played home games across teams at two after every slot.
struct ConstraintSet {
    std::vector<Ca1> ca1;
    std::vector<Ca2> ca2;
    bool ca3 = false;
    std::vector<Ca4> ca4;
    std::vector<Br1> br1;
    std::vector<Br2> br2;
    std::vector<Ga1> ga1;
    bool fa2 = false;
    std::vector<Se1> se1;
};

struct SportsInstance {
    int n = 0;
    bool phased = true;
    ConstraintSet constraints;

    void validate() const;
};

// Structural check (perfect matchings, every ordered pair once, phase split
// when inst.phased) followed by every constraint in the set. Violation ids
// are "matching", "pairing", "phase" and the constraint type names "CA1"
// through "SE1". A break is a game at the same venue as the previous slot;
// slot 1 never counts. Team indices outside [1, n] or a wrong slot count
// throw.
Verdict validate(const Timetable& tt, const SportsInstance& inst);

// Reads the XML subset used by the round robin timetabling competition
// format: an Instance with Resources/Teams + Slots, an optional
// Structure/Format (numberRoundRobin must be 2, gameMode P means phased)
// and Constraints groups holding CA1, CA2, CA3, CA4, BR1, BR2, GA1, FA2 and
// SE1 elements with 0-based team/slot ids. Constraints marked type="SOFT"
// are dropped with a warning when ignore_soft is set and rejected
// otherwise; unsupported constraint types or attribute values raise an
// error naming them.
SportsInstance parse_robinx(const std::string& xml, bool ignore_soft = true,
                            std::vector<std::string>* warnings = nullptr);

// One line per slot, games as "home-away" separated by spaces, teams
// 1-based.
std::string write_timetable(const Timetable& tt);
Timetable parse_timetable(const std::string& text);

}  // namespace optbench
