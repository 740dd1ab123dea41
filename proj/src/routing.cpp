#include "optbench/routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace optbench {

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(mix64(seed)) {}
    uint64_t next() { return state = mix64(state); }
    uint64_t below(uint64_t bound) { return next() % bound; }
};

long long to_ll(const std::string& tok) {
    size_t pos = 0;
    long long v;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cvrp: bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("cvrp: bad integer '" + tok + "'");
    return v;
}

std::string trimmed(const std::string& line) {
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = line.find_last_not_of(" \t\r");
    return line.substr(a, b - a + 1);
}

}  // namespace

long long euclidean_cost(std::pair<long long, long long> a, std::pair<long long, long long> b) {
    double dx = (double)(a.first - b.first);
    double dy = (double)(a.second - b.second);
    return (long long)(std::sqrt(dx * dx + dy * dy) + 0.5);
}

bool triangle_holds(const std::vector<std::vector<long long>>& cost) {
    const size_t m = cost.size();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k < m; ++k)
                if (cost[i][j] > cost[i][k] + cost[k][j]) return false;
    return true;
}

void CvrpInstance::validate() const {
    if (n < 1) throw std::invalid_argument("CvrpInstance: need at least one customer");
    if (vehicles < 1) throw std::invalid_argument("CvrpInstance: need at least one vehicle");
    if (capacity < 1) throw std::invalid_argument("CvrpInstance: capacity must be positive");
    if (demand.size() != (size_t)n) throw std::invalid_argument("CvrpInstance: demand size mismatch");
    for (long long d : demand) {
        if (d < 1) throw std::invalid_argument("CvrpInstance: demands start at one");
        if (d > capacity) throw std::invalid_argument("CvrpInstance: demand exceeds capacity");
    }
    if (cost.size() != (size_t)n + 1) throw std::invalid_argument("CvrpInstance: cost size mismatch");
    for (size_t i = 0; i <= (size_t)n; ++i) {
        if (cost[i].size() != (size_t)n + 1)
            throw std::invalid_argument("CvrpInstance: cost row size mismatch");
        if (cost[i][i] != 0) throw std::invalid_argument("CvrpInstance: nonzero cost diagonal");
        for (size_t j = 0; j < i; ++j) {
            if (cost[i][j] < 0) throw std::invalid_argument("CvrpInstance: negative cost");
            if (cost[i][j] != cost[j][i]) throw std::invalid_argument("CvrpInstance: asymmetric cost");
        }
    }
    if (euclidean) {
        if (coords.size() != (size_t)n + 1)
            throw std::invalid_argument("CvrpInstance: coordinate count mismatch");
        for (size_t i = 0; i <= (size_t)n; ++i)
            for (size_t j = 0; j <= (size_t)n; ++j)
                if (i != j && cost[i][j] != euclidean_cost(coords[i], coords[j]))
                    throw std::invalid_argument("CvrpInstance: cost does not match coordinates");
    }
    if (metric && !triangle_holds(cost))
        throw std::invalid_argument("CvrpInstance: metric claim fails the triangle inequality");
}

Verdict check(const CvrpInstance& inst, const RouteSet& rs) {
    inst.validate();
    Verdict verdict;
    std::vector<int> visits((size_t)inst.n + 1, 0);
    long long total = 0;
    for (size_t r = 0; r < rs.routes.size(); ++r) {
        const auto& route = rs.routes[r];
        if (route.empty()) throw std::invalid_argument("cvrp: empty route");
        long long load = 0;
        int prev = 0;
        for (int c : route) {
            if (c < 1 || c > inst.n) throw std::invalid_argument("cvrp: unknown customer index");
            ++visits[(size_t)c];
            load += inst.demand[(size_t)c - 1];
            total += inst.cost[(size_t)prev][(size_t)c];
            prev = c;
        }
        total += inst.cost[(size_t)prev][0];
        if (load > inst.capacity) {
            std::ostringstream os;
            os << "route " << (r + 1) << " carries " << load << ", capacity " << inst.capacity;
            verdict.add_violation("capacity", os.str(), load - inst.capacity);
        }
    }
    for (int c = 1; c <= inst.n; ++c) {
        if (visits[(size_t)c] == 1) continue;
        std::ostringstream os;
        if (visits[(size_t)c] == 0) {
            os << "customer " << c << " is never visited";
            verdict.add_violation("visit", os.str(), 1);
        } else {
            os << "customer " << c << " is visited " << visits[(size_t)c] << " times";
            verdict.add_violation("visit", os.str(), visits[(size_t)c] - 1);
        }
    }
    if ((long long)rs.routes.size() > inst.vehicles) {
        std::ostringstream os;
        os << rs.routes.size() << " routes for " << inst.vehicles << " vehicles";
        verdict.add_violation("fleet", os.str(), (long long)rs.routes.size() - inst.vehicles);
    }
    if (verdict.feasible) verdict.objective = total;
    return verdict;
}

RouteSet savings(const CvrpInstance& inst) {
    inst.validate();
    const int n = inst.n;
    std::vector<std::vector<int>> routes((size_t)n);
    std::vector<long long> load((size_t)n);
    std::vector<int> route_of((size_t)n + 1);
    for (int c = 1; c <= n; ++c) {
        routes[(size_t)c - 1] = {c};
        load[(size_t)c - 1] = inst.demand[(size_t)c - 1];
        route_of[(size_t)c] = c - 1;
    }

    struct Saving {
        long long s;
        int i, j;
    };
    std::vector<Saving> order;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            order.push_back({inst.cost[0][(size_t)i] + inst.cost[0][(size_t)j] -
                                 inst.cost[(size_t)i][(size_t)j],
                             i, j});
    std::sort(order.begin(), order.end(), [](const Saving& a, const Saving& b) {
        if (a.s != b.s) return a.s > b.s;
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    int alive = n;
    bool merged = true;
    while (merged) {
        merged = false;
        for (const auto& sv : order) {
            int ra = route_of[(size_t)sv.i], rb = route_of[(size_t)sv.j];
            if (ra == rb) continue;
            if (load[(size_t)ra] + load[(size_t)rb] > inst.capacity) continue;
            auto& A = routes[(size_t)ra];
            auto& B = routes[(size_t)rb];
            if (A.front() != sv.i && A.back() != sv.i) continue;
            if (B.front() != sv.j && B.back() != sv.j) continue;
            if (A.front() == sv.i) std::reverse(A.begin(), A.end());
            if (B.back() == sv.j) std::reverse(B.begin(), B.end());
            for (int c : B) route_of[(size_t)c] = ra;
            A.insert(A.end(), B.begin(), B.end());
            load[(size_t)ra] += load[(size_t)rb];
            B.clear();
            load[(size_t)rb] = 0;
            --alive;
            merged = true;
        }
    }
    if (alive > inst.vehicles) {
        std::ostringstream os;
        os << "savings: stuck at " << alive << " routes for " << inst.vehicles << " vehicles";
        throw std::runtime_error(os.str());
    }
    RouteSet rs;
    for (auto& r : routes)
        if (!r.empty()) rs.routes.push_back(std::move(r));
    return rs;
}

Model build_mtz(const CvrpInstance& inst) {
    inst.validate();
    const int n = inst.n;
    const int stop = n + 1;  // second depot copy, tours end here
    auto base_cost = [&](int i, int j) {
        int a = i == stop ? 0 : i;
        int b = j == stop ? 0 : j;
        return inst.cost[(size_t)a][(size_t)b];
    };
    auto node_demand = [&](int i) {
        return i == 0 || i == stop ? 0ll : inst.demand[(size_t)i - 1];
    };

    Model m;
    m.sense = Sense::Minimize;
    std::map<std::pair<int, int>, int> xid;
    for (int i = 0; i <= stop; ++i)
        for (int j = 0; j <= stop; ++j)
            if (i != j) xid[{i, j}] = m.add_binary_var();
    std::vector<int> yid((size_t)stop + 1);
    for (int i = 0; i <= stop; ++i) yid[(size_t)i] = m.add_integer_var(node_demand(i), inst.capacity);

    for (const auto& [arc, id] : xid) {
        long long c = base_cost(arc.first, arc.second);
        if (c != 0) m.objective.add({id}, c);
    }
    for (int i = 1; i <= n; ++i) {
        LinearConstraint leave;
        leave.relation = Relation::Eq;
        leave.rhs = 1;
        for (int j = 1; j <= stop; ++j)
            if (j != i) leave.coeffs[xid.at({i, j})] = 1;
        m.constraints.push_back(std::move(leave));
    }
    for (int h = 1; h <= n; ++h) {
        LinearConstraint flow;
        flow.relation = Relation::Eq;
        flow.rhs = 0;
        for (int i = 0; i <= n; ++i)
            if (i != h) flow.coeffs[xid.at({i, h})] += 1;
        for (int j = 1; j <= stop; ++j)
            if (j != h) flow.coeffs[xid.at({h, j})] -= 1;
        m.constraints.push_back(std::move(flow));
    }
    {
        LinearConstraint fleet;
        fleet.relation = Relation::Le;
        fleet.rhs = inst.vehicles;
        for (int j = 1; j <= n; ++j) fleet.coeffs[xid.at({0, j})] = 1;
        m.constraints.push_back(std::move(fleet));
    }
    for (int i = 0; i <= stop; ++i) {
        for (int j = 0; j <= stop; ++j) {
            if (i == j) continue;
            LinearConstraint lift;  // y_j >= y_i + d_j when the arc is used
            lift.relation = Relation::Ge;
            lift.rhs = -inst.capacity;
            lift.coeffs[yid[(size_t)j]] += 1;
            lift.coeffs[yid[(size_t)i]] -= 1;
            lift.coeffs[xid.at({i, j})] = -(node_demand(j) + inst.capacity);
            m.constraints.push_back(std::move(lift));
        }
    }
    m.validate();
    return m;
}

CvrpInstance generate_tight(int n, int vehicles, uint64_t seed) {
    if (n < 1 || vehicles < 1 || n < vehicles)
        throw std::invalid_argument("generate_tight: need n >= vehicles >= 1");
    Rng rng(mix64(seed) ^ mix64(((uint64_t)n << 20) | (uint64_t)vehicles));

    CvrpInstance inst;
    inst.n = n;
    inst.vehicles = vehicles;
    {
        std::ostringstream os;
        os << "tight-n" << n << "-k" << vehicles << "-s" << seed;
        inst.name = os.str();
    }
    inst.euclidean = true;
    for (int i = 0; i <= n; ++i)
        inst.coords.push_back({(long long)rng.below(101), (long long)rng.below(101)});

    inst.demand.assign((size_t)n, 0);
    for (auto& d : inst.demand) d = 1 + (long long)rng.below(9);

    // deal customers into one group per vehicle, then pad every group to the
    // heaviest sum so each truck is filled exactly
    std::vector<int> deal((size_t)n);
    for (int i = 0; i < n; ++i) deal[(size_t)i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(deal[(size_t)i], deal[(size_t)rng.below((uint64_t)i + 1)]);
    std::vector<std::vector<int>> group((size_t)vehicles);
    for (int i = 0; i < n; ++i) group[(size_t)(i % vehicles)].push_back(deal[(size_t)i]);
    long long cap = 0;
    for (const auto& g : group) {
        long long sum = 0;
        for (int c : g) sum += inst.demand[(size_t)c];
        cap = std::max(cap, sum);
    }
    for (const auto& g : group) {
        long long sum = 0;
        for (int c : g) sum += inst.demand[(size_t)c];
        for (size_t at = 0; sum < cap; at = (at + 1) % g.size()) {
            ++inst.demand[(size_t)g[at]];
            ++sum;
        }
    }
    inst.capacity = cap;

    inst.cost.assign((size_t)n + 1, std::vector<long long>((size_t)n + 1, 0));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if (i != j) inst.cost[(size_t)i][(size_t)j] = euclidean_cost(inst.coords[(size_t)i],
                                                                         inst.coords[(size_t)j]);
    inst.metric = triangle_holds(inst.cost);
    inst.validate();
    return inst;
}

namespace {

struct Lines {
    std::vector<std::string> rows;
    size_t pos = 0;

    const std::string& peek() const {
        if (pos >= rows.size()) throw std::invalid_argument("cvrp: truncated file");
        return rows[pos];
    }
    std::string take() {
        std::string r = peek();
        ++pos;
        return r;
    }
    bool done() const { return pos >= rows.size(); }
};

Lines split_lines(const std::string& text) {
    Lines out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trimmed(line);
        if (!t.empty()) out.rows.push_back(std::move(t));
    }
    return out;
}

// "KEY : value" or "KEY: value"; returns false when the line is a section name
bool split_header(const std::string& line, std::string& key, std::string& value) {
    size_t colon = line.find(':');
    if (colon == std::string::npos) return false;
    key = trimmed(line.substr(0, colon));
    value = trimmed(line.substr(colon + 1));
    return !key.empty() && key.find(' ') == std::string::npos;
}

}  // namespace

CvrpInstance parse_cvrplib(const std::string& text) {
    Lines lines = split_lines(text);
    CvrpInstance inst;
    int dimension = -1;
    std::string weight_type, weight_format;
    bool have_capacity = false;
    long long vehicles_key = -1;

    while (!lines.done()) {
        std::string key, value;
        if (!split_header(lines.peek(), key, value)) break;
        lines.take();
        if (key == "NAME") {
            inst.name = value;
        } else if (key == "TYPE") {
            if (value != "CVRP") throw std::invalid_argument("cvrp: unsupported TYPE " + value);
        } else if (key == "COMMENT") {
            // carried by real-world files, nothing to keep
        } else if (key == "DIMENSION") {
            dimension = (int)to_ll(value);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            weight_type = value;
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            weight_format = value;
        } else if (key == "CAPACITY") {
            inst.capacity = to_ll(value);
            have_capacity = true;
        } else if (key == "VEHICLES") {
            vehicles_key = to_ll(value);
        } else {
            throw std::invalid_argument("cvrp: unknown key " + key);
        }
    }
    if (dimension < 2) throw std::invalid_argument("cvrp: missing or bad DIMENSION");
    if (!have_capacity) throw std::invalid_argument("cvrp: missing CAPACITY");
    if (weight_type != "EUC_2D" && weight_type != "EXPLICIT")
        throw std::invalid_argument("cvrp: unsupported EDGE_WEIGHT_TYPE");
    inst.n = dimension - 1;

    if (vehicles_key > 0) {
        inst.vehicles = (int)vehicles_key;
    } else {
        size_t at = inst.name.rfind("-k");
        if (at == std::string::npos)
            throw std::invalid_argument("cvrp: vehicle count absent from keys and name");
        size_t end = at + 2;
        while (end < inst.name.size() && std::isdigit((unsigned char)inst.name[end])) ++end;
        if (end == at + 2) throw std::invalid_argument("cvrp: vehicle count absent from keys and name");
        inst.vehicles = (int)to_ll(inst.name.substr(at + 2, end - at - 2));
    }

    bool saw_costs = false, saw_demand = false, saw_depot = false;
    while (!lines.done()) {
        std::string section = lines.take();
        if (section == "NODE_COORD_SECTION") {
            if (weight_type != "EUC_2D")
                throw std::invalid_argument("cvrp: coordinates need EUC_2D");
            for (int i = 0; i < dimension; ++i) {
                std::istringstream in(lines.take());
                std::string id, x, y, extra;
                if (!(in >> id >> x >> y) || (in >> extra))
                    throw std::invalid_argument("cvrp: bad coordinate line");
                if (to_ll(id) != i + 1) throw std::invalid_argument("cvrp: coordinates out of order");
                inst.coords.push_back({to_ll(x), to_ll(y)});
            }
            inst.euclidean = true;
            inst.cost.assign((size_t)dimension, std::vector<long long>((size_t)dimension, 0));
            for (int i = 0; i < dimension; ++i)
                for (int j = 0; j < dimension; ++j)
                    if (i != j)
                        inst.cost[(size_t)i][(size_t)j] =
                            euclidean_cost(inst.coords[(size_t)i], inst.coords[(size_t)j]);
            saw_costs = true;
        } else if (section == "EDGE_WEIGHT_SECTION") {
            if (weight_type != "EXPLICIT")
                throw std::invalid_argument("cvrp: weight matrix needs EXPLICIT");
            if (weight_format != "FULL_MATRIX")
                throw std::invalid_argument("cvrp: unsupported EDGE_WEIGHT_FORMAT");
            std::vector<long long> flat;
            while (flat.size() < (size_t)dimension * (size_t)dimension) {
                std::istringstream in(lines.take());
                std::string tok;
                while (in >> tok) flat.push_back(to_ll(tok));
            }
            if (flat.size() != (size_t)dimension * (size_t)dimension)
                throw std::invalid_argument("cvrp: weight matrix size mismatch");
            inst.cost.assign((size_t)dimension, std::vector<long long>((size_t)dimension, 0));
            for (int i = 0; i < dimension; ++i)
                for (int j = 0; j < dimension; ++j)
                    inst.cost[(size_t)i][(size_t)j] = flat[(size_t)(i * dimension + j)];
            saw_costs = true;
        } else if (section == "DEMAND_SECTION") {
            inst.demand.assign((size_t)dimension - 1, 0);
            for (int i = 0; i < dimension; ++i) {
                std::istringstream in(lines.take());
                std::string id, d, extra;
                if (!(in >> id >> d) || (in >> extra))
                    throw std::invalid_argument("cvrp: bad demand line");
                if (to_ll(id) != i + 1) throw std::invalid_argument("cvrp: demands out of order");
                long long dv = to_ll(d);
                if (i == 0) {
                    if (dv != 0) throw std::invalid_argument("cvrp: depot demand must be zero");
                } else {
                    inst.demand[(size_t)i - 1] = dv;
                }
            }
            saw_demand = true;
        } else if (section == "DEPOT_SECTION") {
            if (to_ll(lines.take()) != 1)
                throw std::invalid_argument("cvrp: depot must be the first node");
            if (to_ll(lines.take()) != -1)
                throw std::invalid_argument("cvrp: depot list must end with -1");
            saw_depot = true;
        } else if (section == "EOF") {
            break;
        } else {
            throw std::invalid_argument("cvrp: unknown section " + section);
        }
    }
    if (!lines.done()) throw std::invalid_argument("cvrp: content after EOF");
    if (!saw_costs || !saw_demand || !saw_depot)
        throw std::invalid_argument("cvrp: missing required section");

    inst.metric = triangle_holds(inst.cost);
    inst.validate();
    return inst;
}

std::string write_cvrplib(const CvrpInstance& inst) {
    inst.validate();
    std::ostringstream os;
    os << "NAME : " << inst.name << "\n";
    os << "TYPE : CVRP\n";
    os << "DIMENSION : " << inst.n + 1 << "\n";
    os << "EDGE_WEIGHT_TYPE : " << (inst.euclidean ? "EUC_2D" : "EXPLICIT") << "\n";
    if (!inst.euclidean) os << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n";
    os << "CAPACITY : " << inst.capacity << "\n";
    os << "VEHICLES : " << inst.vehicles << "\n";
    if (inst.euclidean) {
        os << "NODE_COORD_SECTION\n";
        for (int i = 0; i <= inst.n; ++i)
            os << i + 1 << " " << inst.coords[(size_t)i].first << " "
               << inst.coords[(size_t)i].second << "\n";
    } else {
        os << "EDGE_WEIGHT_SECTION\n";
        for (int i = 0; i <= inst.n; ++i) {
            for (int j = 0; j <= inst.n; ++j) os << (j ? " " : "") << inst.cost[(size_t)i][(size_t)j];
            os << "\n";
        }
    }
    os << "DEMAND_SECTION\n1 0\n";
    for (int i = 1; i <= inst.n; ++i) os << i + 1 << " " << inst.demand[(size_t)i - 1] << "\n";
    os << "DEPOT_SECTION\n1\n-1\nEOF\n";
    return os.str();
}

RouteSet parse_routes(const std::string& text, long long* cost_out) {
    Lines lines = split_lines(text);
    RouteSet rs;
    bool saw_cost = false;
    while (!lines.done()) {
        std::string line = lines.take();
        if (line.rfind("Route #", 0) == 0) {
            if (saw_cost) throw std::invalid_argument("cvrp: route after cost footer");
            size_t colon = line.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("cvrp: bad route line");
            long long number = to_ll(trimmed(line.substr(7, colon - 7)));
            if (number != (long long)rs.routes.size() + 1)
                throw std::invalid_argument("cvrp: route numbers must count up from one");
            std::istringstream in(line.substr(colon + 1));
            std::vector<int> route;
            std::string tok;
            while (in >> tok) route.push_back((int)to_ll(tok));
            if (route.empty()) throw std::invalid_argument("cvrp: empty route line");
            rs.routes.push_back(std::move(route));
        } else if (line.rfind("Cost", 0) == 0) {
            std::istringstream in(line);
            std::string word, value, extra;
            if (!(in >> word >> value) || (in >> extra))
                throw std::invalid_argument("cvrp: bad cost line");
            if (cost_out) *cost_out = to_ll(value);
            saw_cost = true;
        } else {
            throw std::invalid_argument("cvrp: unrecognized solution line");
        }
    }
    if (!saw_cost) throw std::invalid_argument("cvrp: missing cost footer");
    return rs;
}

std::string write_routes(const RouteSet& rs, long long cost) {
    std::ostringstream os;
    for (size_t r = 0; r < rs.routes.size(); ++r) {
        os << "Route #" << r + 1 << ":";
        for (int c : rs.routes[r]) os << " " << c;
        os << "\n";
    }
    os << "Cost " << cost << "\n";
    return os.str();
}

}  // namespace optbench
