#include "optbench/steiner.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

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
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t bound) { return next() % bound; }
};

std::string coord_str(const GridSteinerInstance& inst, int v) {
    GridCoord c = inst.at(v);
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

std::string edge_str(const GridSteinerInstance& inst, int u, int v) {
    return coord_str(inst, u) + "-" + coord_str(inst, v);
}

// All surviving grid edges, lower id first, ascending.
std::vector<std::pair<int, int>> grid_edges(const GridSteinerInstance& inst) {
    std::vector<std::pair<int, int>> out;
    int nv = inst.vertex_count();
    for (int v = 0; v < nv; ++v) {
        if (inst.holes.count(v)) continue;
        GridCoord c = inst.at(v);
        int steps[3] = {1, inst.side, inst.side * inst.side};
        int room[3] = {inst.side - 1 - c.x, inst.side - 1 - c.y, inst.layers - 1 - c.z};
        for (int a = 0; a < 3; ++a) {
            if (room[a] < 1) continue;
            int w = v + steps[a];
            if (!inst.holes.count(w)) out.push_back({v, w});
        }
    }
    return out;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(static_cast<size_t>(n), -1) {}
    int find(int v) {
        while (parent[static_cast<size_t>(v)] >= 0) {
            int p = parent[static_cast<size_t>(v)];
            int g = parent[static_cast<size_t>(p)];
            if (g >= 0) parent[static_cast<size_t>(v)] = g;
            v = p;
        }
        return v;
    }
    // false if already joined
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (parent[static_cast<size_t>(a)] > parent[static_cast<size_t>(b)]) std::swap(a, b);
        parent[static_cast<size_t>(a)] += parent[static_cast<size_t>(b)];
        parent[static_cast<size_t>(b)] = a;
        return true;
    }
};

}  // namespace

bool GridSteinerInstance::adjacent(int u, int v) const {
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) return false;
    GridCoord a = at(u);
    GridCoord b = at(v);
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z) == 1;
}

bool GridSteinerInstance::on_top_border(int v) const {
    GridCoord c = at(v);
    return c.z == 0 && (c.x == 0 || c.x == side - 1 || c.y == 0 || c.y == side - 1);
}

void GridSteinerInstance::validate() const {
    if (side < 2 || side > 512) throw std::invalid_argument("steiner: side must be in [2, 512]");
    if (layers < 1 || layers > 16) throw std::invalid_argument("steiner: layers must be in [1, 16]");
    for (int h : holes)
        if (h < 0 || h >= vertex_count())
            throw std::invalid_argument("steiner: hole outside the grid");
    std::set<int> seen;
    for (size_t i = 0; i < nets.size(); ++i) {
        if (nets[i].empty())
            throw std::invalid_argument("steiner: net " + std::to_string(i + 1) + " has no terminals");
        for (int t : nets[i]) {
            if (t < 0 || t >= vertex_count())
                throw std::invalid_argument("steiner: terminal outside the grid");
            if (holes.count(t))
                throw std::invalid_argument("steiner: terminal " + coord_str(*this, t) + " is a hole");
            if (!on_top_border(t))
                throw std::invalid_argument("steiner: terminal " + coord_str(*this, t) +
                                            " is not on the top layer border");
            if (!seen.insert(t).second)
                throw std::invalid_argument("steiner: terminal " + coord_str(*this, t) +
                                            " appears in two nets");
        }
    }
}

Verdict check(const GridSteinerInstance& inst, const PackingSolution& sol) {
    inst.validate();
    int nv = inst.vertex_count();

    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : sol.edges) {
        if (a < 0 || a >= nv || b < 0 || b >= nv)
            throw std::invalid_argument("check: edge endpoint outside the grid");
        if (!inst.adjacent(a, b))
            throw std::invalid_argument("check: " + edge_str(inst, a, b) + " is not a grid edge");
        if (inst.holes.count(a) || inst.holes.count(b))
            throw std::invalid_argument("check: " + edge_str(inst, a, b) + " passes through a hole");
        if (!seen.insert(std::minmax(a, b)).second)
            throw std::invalid_argument("check: duplicate edge " + edge_str(inst, a, b));
    }

    Verdict verdict = Verdict::ok(static_cast<long long>(sol.edges.size()));

    DisjointSets ds(nv);
    std::vector<uint8_t> touched(static_cast<size_t>(nv), 0);
    for (auto [a, b] : sol.edges) {
        touched[static_cast<size_t>(a)] = touched[static_cast<size_t>(b)] = 1;
        if (!ds.unite(a, b))
            verdict.add_violation("forest", "cycle closed at " + edge_str(inst, a, b));
    }

    // components keyed by their smallest vertex
    std::vector<int> comp_key(static_cast<size_t>(nv), -1);
    std::map<int, std::set<int>> comp_nets;  // key -> net indices
    std::map<int, long long> comp_edges;
    for (int v = 0; v < nv; ++v) {
        if (!touched[static_cast<size_t>(v)]) continue;
        int r = ds.find(v);
        if (comp_key[static_cast<size_t>(r)] < 0) comp_key[static_cast<size_t>(r)] = v;
        comp_nets[comp_key[static_cast<size_t>(r)]];
    }
    for (auto [a, b] : sol.edges) ++comp_edges[comp_key[static_cast<size_t>(ds.find(a))]];

    for (size_t i = 0; i < inst.nets.size(); ++i) {
        std::vector<int> missing;
        std::set<int> keys;
        for (int t : inst.nets[i]) {
            if (!touched[static_cast<size_t>(t)]) {
                missing.push_back(t);
            } else {
                int key = comp_key[static_cast<size_t>(ds.find(t))];
                keys.insert(key);
                comp_nets[key].insert(static_cast<int>(i));
            }
        }
        std::string net_id = "net " + std::to_string(i + 1);
        if (!missing.empty())
            verdict.add_violation(net_id, "terminal " + coord_str(inst, missing.front()) +
                                              " has no incident edge",
                                  static_cast<long long>(missing.size()));
        else if (keys.size() != 1)
            verdict.add_violation(net_id, "terminals split across " + std::to_string(keys.size()) +
                                              " trees",
                                  static_cast<long long>(keys.size()));
    }

    for (const auto& [key, nets_here] : comp_nets) {
        if (nets_here.size() >= 2) {
            auto it = nets_here.begin();
            int first = *it + 1;
            int second = *++it + 1;
            verdict.add_violation("overlap", "nets " + std::to_string(first) + " and " +
                                                 std::to_string(second) + " share a tree",
                                  static_cast<long long>(nets_here.size()));
        } else if (nets_here.empty()) {
            verdict.add_violation("stray", "tree with no terminals at " + coord_str(inst, key),
                                  comp_edges[key]);
        }
    }
    return verdict;
}

std::pair<GridSteinerInstance, PackingSolution> generate_steiner(int side, int layers,
                                                                 int max_terminals, int holes,
                                                                 uint64_t seed) {
    if (side < 2 || side > 512) throw std::invalid_argument("generate_steiner: side must be in [2, 512]");
    if (layers < 1 || layers > 16)
        throw std::invalid_argument("generate_steiner: layers must be in [1, 16]");
    if (max_terminals < 2)
        throw std::invalid_argument("generate_steiner: max_terminals must be at least 2");
    if (holes < 0) throw std::invalid_argument("generate_steiner: holes must be nonnegative");

    int nv = side * side * layers;
    int net_target = std::max(1, side * layers / 5);
    Rng rng(mix64(seed) ^ mix64(static_cast<uint64_t>(side) * 1000003ull +
                                static_cast<uint64_t>(layers) * 10007ull +
                                static_cast<uint64_t>(max_terminals) * 101ull +
                                static_cast<uint64_t>(holes)));

    GridSteinerInstance shape;
    shape.side = side;
    shape.layers = layers;

    std::vector<int> border;
    for (int v = 0; v < nv; ++v)
        if (shape.on_top_border(v)) border.push_back(v);

    std::string last_fail = "no attempt ran";
    const int kSteps[3] = {1, side, side * side};

    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<uint8_t> used(static_cast<size_t>(nv), 0);
        std::vector<int> mine_stamp(static_cast<size_t>(nv), -1);
        std::vector<std::vector<int>> nets;
        std::vector<std::pair<int, int>> edges;
        bool ok = true;

        for (int net = 0; net < net_target && ok; ++net) {
            int k = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(max_terminals - 1)));
            bool routed = false;
            for (int retry = 0; retry < 30 && !routed; ++retry) {
                std::vector<int> free;
                for (int v : border)
                    if (!used[static_cast<size_t>(v)]) free.push_back(v);
                if (static_cast<int>(free.size()) < k) {
                    last_fail = "net " + std::to_string(net + 1) + ": only " +
                                std::to_string(free.size()) + " free border cells for " +
                                std::to_string(k) + " terminals";
                    break;
                }
                std::vector<int> terms;
                for (int j = 0; j < k; ++j) {
                    size_t pick = static_cast<size_t>(rng.below(free.size() - static_cast<size_t>(j))) +
                                  static_cast<size_t>(j);
                    std::swap(free[static_cast<size_t>(j)], free[pick]);
                    terms.push_back(free[static_cast<size_t>(j)]);
                }

                std::vector<int> tree;
                std::vector<std::pair<int, int>> tree_edges;
                auto claim = [&](int v) {
                    used[static_cast<size_t>(v)] = 1;
                    mine_stamp[static_cast<size_t>(v)] = net;
                    tree.push_back(v);
                };
                claim(terms[0]);
                bool net_ok = true;
                for (int j = 1; j < k && net_ok; ++j) {
                    int goal = terms[static_cast<size_t>(j)];
                    if (mine_stamp[static_cast<size_t>(goal)] == net) continue;  // absorbed earlier

                    int dirs[6] = {kSteps[0], -kSteps[0], kSteps[1], -kSteps[1], kSteps[2], -kSteps[2]};
                    for (int a = 5; a > 0; --a)
                        std::swap(dirs[a], dirs[rng.below(static_cast<uint64_t>(a) + 1)]);

                    std::vector<int> prev(static_cast<size_t>(nv), -2);
                    std::vector<int> queue;
                    for (int v : tree) {
                        prev[static_cast<size_t>(v)] = -1;
                        queue.push_back(v);
                    }
                    bool found = false;
                    for (size_t head = 0; head < queue.size() && !found; ++head) {
                        int v = queue[head];
                        GridCoord c = shape.at(v);
                        for (int d : dirs) {
                            int w = v + d;
                            if (d == 1 && c.x == side - 1) continue;
                            if (d == -1 && c.x == 0) continue;
                            if (d == side && c.y == side - 1) continue;
                            if (d == -side && c.y == 0) continue;
                            if (d == side * side && c.z == layers - 1) continue;
                            if (d == -side * side && c.z == 0) continue;
                            if (prev[static_cast<size_t>(w)] != -2) continue;
                            if (used[static_cast<size_t>(w)] && w != goal) continue;
                            prev[static_cast<size_t>(w)] = v;
                            if (w == goal) {
                                found = true;
                                break;
                            }
                            queue.push_back(w);
                        }
                    }
                    if (!found) {
                        net_ok = false;
                        last_fail = "net " + std::to_string(net + 1) + ": terminal " +
                                    coord_str(shape, goal) + " unreachable";
                        break;
                    }
                    for (int v = goal; prev[static_cast<size_t>(v)] >= 0;
                         v = prev[static_cast<size_t>(v)]) {
                        tree_edges.push_back(std::minmax(v, prev[static_cast<size_t>(v)]));
                        if (mine_stamp[static_cast<size_t>(v)] != net) claim(v);
                    }
                }
                if (!net_ok) {
                    for (int v : tree) {
                        used[static_cast<size_t>(v)] = 0;
                        mine_stamp[static_cast<size_t>(v)] = -1;
                    }
                    continue;
                }
                std::sort(terms.begin(), terms.end());
                nets.push_back(terms);
                edges.insert(edges.end(), tree_edges.begin(), tree_edges.end());
                routed = true;
            }
            if (!routed) ok = false;
        }
        if (!ok) continue;

        std::set<int> hole_cells;
        for (int h = 0; h < holes && ok; ++h) {
            bool placed = false;
            for (int tries = 0; tries < 300 && !placed; ++tries) {
                int dx = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(3, side))));
                int dy = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::min(3, side))));
                int dz = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(layers)));
                int x0 = static_cast<int>(rng.below(static_cast<uint64_t>(side - dx + 1)));
                int y0 = static_cast<int>(rng.below(static_cast<uint64_t>(side - dy + 1)));
                int z0 = static_cast<int>(rng.below(static_cast<uint64_t>(layers - dz + 1)));
                std::vector<int> box;
                bool clear = true;
                for (int z = z0; z < z0 + dz && clear; ++z)
                    for (int y = y0; y < y0 + dy && clear; ++y)
                        for (int x = x0; x < x0 + dx && clear; ++x) {
                            int v = shape.id({x, y, z});
                            if (used[static_cast<size_t>(v)] || hole_cells.count(v)) clear = false;
                            box.push_back(v);
                        }
                if (!clear) continue;
                hole_cells.insert(box.begin(), box.end());
                placed = true;
            }
            if (!placed) {
                ok = false;
                last_fail = "hole " + std::to_string(h + 1) + " of " + std::to_string(holes) +
                            " found no clear box";
            }
        }
        if (!ok) continue;

        GridSteinerInstance inst;
        inst.side = side;
        inst.layers = layers;
        inst.holes = std::move(hole_cells);
        inst.nets = std::move(nets);
        inst.validate();
        std::sort(edges.begin(), edges.end());
        return {std::move(inst), PackingSolution{std::move(edges)}};
    }
    throw std::runtime_error("generate_steiner: gave up after 40 attempts (side=" +
                             std::to_string(side) + ", layers=" + std::to_string(layers) +
                             ", max_terminals=" + std::to_string(max_terminals) +
                             ", holes=" + std::to_string(holes) + "): " + last_fail);
}

std::string write_steiner(const GridSteinerInstance& inst) {
    inst.validate();
    std::ostringstream out;
    out << "SECTION Comment\n";
    out << "Grid " << inst.side << " " << inst.layers << "\n";
    for (int h : inst.holes) {
        GridCoord c = inst.at(h);
        out << "Hole " << c.x << " " << c.y << " " << c.z << "\n";
    }
    out << "END\n\n";

    auto es = grid_edges(inst);
    out << "SECTION Graph\n";
    out << "Nodes " << inst.vertex_count() << "\n";
    out << "Edges " << es.size() << "\n";
    for (auto [u, v] : es) out << "E " << u + 1 << " " << v + 1 << " 1\n";
    out << "END\n\n";

    for (const auto& net : inst.nets) {
        std::vector<int> terms = net;
        std::sort(terms.begin(), terms.end());
        out << "SECTION Terminals\n";
        out << "Terminals " << terms.size() << "\n";
        for (int t : terms) out << "T " << t + 1 << "\n";
        out << "END\n\n";
    }
    out << "EOF\n";
    return out.str();
}

namespace {

// next nonempty line, or empty string at end of input
std::string next_line(std::istringstream& in) {
    std::string line;
    while (std::getline(in, line)) {
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        return line.substr(a, b - a + 1);
    }
    return "";
}

void expect(const std::string& got, const std::string& want) {
    if (got != want)
        throw std::invalid_argument("parse_steiner: expected '" + want + "', got '" + got + "'");
}

}  // namespace

GridSteinerInstance parse_steiner(const std::string& text) {
    std::istringstream in(text);
    GridSteinerInstance inst;

    expect(next_line(in), "SECTION Comment");
    std::string line = next_line(in);
    {
        std::istringstream ls(line);
        std::string tag;
        char extra;
        if (!(ls >> tag >> inst.side >> inst.layers) || tag != "Grid" || ls >> extra)
            throw std::invalid_argument("parse_steiner: bad grid line '" + line + "'");
        if (inst.side < 2 || inst.side > 512 || inst.layers < 1 || inst.layers > 16)
            throw std::invalid_argument("parse_steiner: grid shape out of range");
    }
    while (true) {
        line = next_line(in);
        if (line == "END") break;
        std::istringstream ls(line);
        std::string tag;
        GridCoord c;
        char extra;
        if (!(ls >> tag >> c.x >> c.y >> c.z) || tag != "Hole" || ls >> extra)
            throw std::invalid_argument("parse_steiner: bad hole line '" + line + "'");
        if (c.x < 0 || c.x >= inst.side || c.y < 0 || c.y >= inst.side || c.z < 0 ||
            c.z >= inst.layers)
            throw std::invalid_argument("parse_steiner: hole outside the grid: '" + line + "'");
        if (!inst.holes.insert(inst.id(c)).second)
            throw std::invalid_argument("parse_steiner: duplicate hole '" + line + "'");
    }

    expect(next_line(in), "SECTION Graph");
    long long nodes = -1, edge_count = -1;
    {
        std::istringstream ls(next_line(in));
        std::string tag;
        char extra;
        if (!(ls >> tag >> nodes) || tag != "Nodes" || ls >> extra)
            throw std::invalid_argument("parse_steiner: bad Nodes line");
        if (nodes != inst.vertex_count())
            throw std::invalid_argument("parse_steiner: Nodes does not match the grid shape");
    }
    {
        std::istringstream ls(next_line(in));
        std::string tag;
        char extra;
        if (!(ls >> tag >> edge_count) || tag != "Edges" || edge_count < 0 || ls >> extra)
            throw std::invalid_argument("parse_steiner: bad Edges line");
    }
    std::vector<std::pair<int, int>> listed;
    for (long long e = 0; e < edge_count; ++e) {
        line = next_line(in);
        std::istringstream ls(line);
        std::string tag;
        int u, v, w;
        char extra;
        if (!(ls >> tag >> u >> v >> w) || tag != "E" || w != 1 || ls >> extra)
            throw std::invalid_argument("parse_steiner: bad edge line '" + line + "'");
        if (u < 1 || u > nodes || v < 1 || v > nodes || u == v)
            throw std::invalid_argument("parse_steiner: edge endpoint out of range: '" + line + "'");
        listed.push_back(std::minmax(u - 1, v - 1));
    }
    expect(next_line(in), "END");
    std::sort(listed.begin(), listed.end());
    if (listed != grid_edges(inst))
        throw std::invalid_argument("parse_steiner: edge list does not match the grid minus holes");

    line = next_line(in);
    while (line == "SECTION Terminals") {
        long long count = -1;
        {
            std::istringstream ls(next_line(in));
            std::string tag;
            char extra;
            if (!(ls >> tag >> count) || tag != "Terminals" || count < 1 || ls >> extra)
                throw std::invalid_argument("parse_steiner: bad Terminals line");
        }
        std::vector<int> net;
        for (long long t = 0; t < count; ++t) {
            line = next_line(in);
            std::istringstream ls(line);
            std::string tag;
            int v;
            char extra;
            if (!(ls >> tag >> v) || tag != "T" || ls >> extra)
                throw std::invalid_argument("parse_steiner: bad terminal line '" + line + "'");
            if (v < 1 || v > nodes)
                throw std::invalid_argument("parse_steiner: terminal out of range: '" + line + "'");
            net.push_back(v - 1);
        }
        expect(next_line(in), "END");
        inst.nets.push_back(std::move(net));
        line = next_line(in);
    }
    expect(line, "EOF");
    if (!next_line(in).empty())
        throw std::invalid_argument("parse_steiner: trailing content after EOF");
    inst.validate();
    return inst;
}

std::string write_packing(const GridSteinerInstance& inst, const PackingSolution& sol) {
    int nv = inst.vertex_count();
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : sol.edges) {
        if (a < 0 || a >= nv || b < 0 || b >= nv)
            throw std::invalid_argument("write_packing: edge endpoint outside the grid");
        edges.push_back(std::minmax(a, b));
    }
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    for (auto [u, v] : edges) {
        GridCoord a = inst.at(u);
        GridCoord b = inst.at(v);
        out << a.x << " " << a.y << " " << a.z << " " << b.x << " " << b.y << " " << b.z << "\n";
    }
    return out.str();
}

PackingSolution parse_packing(const GridSteinerInstance& inst, const std::string& text) {
    PackingSolution sol;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::istringstream ls(line);
        GridCoord p, q;
        char extra;
        if (!(ls >> p.x >> p.y >> p.z >> q.x >> q.y >> q.z) || ls >> extra)
            throw std::invalid_argument("parse_packing: bad edge on line " + std::to_string(lineno));
        for (const GridCoord& c : {p, q})
            if (c.x < 0 || c.x >= inst.side || c.y < 0 || c.y >= inst.side || c.z < 0 ||
                c.z >= inst.layers)
                throw std::invalid_argument("parse_packing: coordinate outside the grid on line " +
                                            std::to_string(lineno));
        sol.edges.push_back({inst.id(p), inst.id(q)});
    }
    return sol;
}

}  // namespace optbench
