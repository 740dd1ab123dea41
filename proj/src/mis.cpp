#include "optbench/mis.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace optbench {

void Graph::validate() const {
    if (n < 1) throw std::invalid_argument("Graph: vertex count must be positive");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (u >= v) throw std::invalid_argument("Graph: edges must satisfy u < v");
        if (!seen.insert({u, v}).second) throw std::invalid_argument("Graph: duplicate edge");
    }
}

Verdict check(const Graph& g, const VertexSet& s) {
    g.validate();
    std::vector<uint8_t> in_set(static_cast<size_t>(g.n), 0);
    int prev = -1;
    for (int v : s.members) {
        if (v < 0 || v >= g.n) throw std::invalid_argument("VertexSet: vertex out of range");
        if (v <= prev) throw std::invalid_argument("VertexSet: members must be sorted and distinct");
        prev = v;
        in_set[static_cast<size_t>(v)] = 1;
    }
    Verdict verdict = Verdict::ok(static_cast<long long>(s.members.size()));
    for (const auto& [u, v] : g.edges) {
        if (in_set[static_cast<size_t>(u)] && in_set[static_cast<size_t>(v)]) {
            std::ostringstream id;
            id << "edge " << u << ' ' << v;
            verdict.add_violation(id.str(), "both endpoints selected", 1);
        }
    }
    return verdict;
}

VertexSet greedy_postprocess(const Graph& g, const std::vector<uint8_t>& x) {
    g.validate();
    if (static_cast<int>(x.size()) != g.n)
        throw std::invalid_argument("greedy_postprocess: candidate length mismatch");
    for (uint8_t b : x)
        if (b > 1) throw std::invalid_argument("greedy_postprocess: candidate entries must be 0/1");

    std::vector<std::vector<int>> adj(static_cast<size_t>(g.n));
    for (const auto& [u, v] : g.edges) {
        adj[static_cast<size_t>(u)].push_back(v);
        adj[static_cast<size_t>(v)].push_back(u);
    }

    std::vector<uint8_t> sel = x;
    std::vector<uint8_t> candidate(static_cast<size_t>(g.n), 1);

    auto violations_of = [&](int u) {
        if (!sel[static_cast<size_t>(u)]) return 0;
        int count = 0;
        for (int w : adj[static_cast<size_t>(u)])
            if (sel[static_cast<size_t>(w)]) ++count;
        return count;
    };

    while (true) {
        int worst = -1;
        int worst_count = 0;
        for (int u = 0; u < g.n; ++u) {
            int count = violations_of(u);
            if (count > worst_count) {
                worst_count = count;
                worst = u;
            }
        }
        if (worst < 0) break;
        sel[static_cast<size_t>(worst)] = 0;
        candidate[static_cast<size_t>(worst)] = 0;
    }

    for (int u = g.n - 1; u >= 0; --u) {
        if (!candidate[static_cast<size_t>(u)] || sel[static_cast<size_t>(u)]) continue;
        bool ok = true;
        for (int w : adj[static_cast<size_t>(u)])
            if (sel[static_cast<size_t>(w)]) {
                ok = false;
                break;
            }
        if (ok) sel[static_cast<size_t>(u)] = 1;
    }

    VertexSet out;
    for (int u = 0; u < g.n; ++u)
        if (sel[static_cast<size_t>(u)]) out.members.push_back(u);
    return out;
}

Model build_blp(const Graph& g) {
    g.validate();
    Model m;
    m.sense = Sense::Maximize;
    for (int i = 0; i < g.n; ++i) {
        m.add_binary_var();
        m.objective.add({i}, 1);
    }
    for (const auto& [u, v] : g.edges) {
        LinearConstraint c;
        c.coeffs[u] = 1;
        c.coeffs[v] = 1;
        c.relation = Relation::Le;
        c.rhs = 1;
        m.constraints.push_back(std::move(c));
    }
    m.validate();
    return m;
}

Qubo build_qubo(const Graph& g, long long lambda) {
    g.validate();
    if (lambda <= 0) throw std::invalid_argument("build_qubo: lambda must be positive");
    Qubo q;
    q.n = g.n;
    for (int i = 0; i < g.n; ++i) q.add(i, i, -1);
    for (const auto& [u, v] : g.edges) q.add(u, v, lambda);
    return q;
}

std::string write_graph(const Graph& g) {
    g.validate();
    std::vector<std::pair<int, int>> sorted_edges = g.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    std::ostringstream out;
    out << "p edge " << g.n << ' ' << sorted_edges.size() << '\n';
    for (const auto& [u, v] : sorted_edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Graph g;
    long long declared_edges = -1;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "c") continue;
        if (tag == "p") {
            if (declared_edges >= 0) throw std::invalid_argument("parse_graph: repeated header");
            std::string kind;
            long long n = 0, m = 0;
            if (!(ls >> kind >> n >> m) || kind != "edge")
                throw std::invalid_argument("parse_graph: header must be 'p edge n m'");
            if (n < 1) throw std::invalid_argument("parse_graph: bad vertex count");
            g.n = static_cast<int>(n);
            declared_edges = m;
        } else if (tag == "e") {
            if (declared_edges < 0) throw std::invalid_argument("parse_graph: edge before header");
            long long u = 0, v = 0;
            if (!(ls >> u >> v)) throw std::invalid_argument("parse_graph: bad edge line");
            std::string extra;
            if (ls >> extra) throw std::invalid_argument("parse_graph: trailing tokens on edge line");
            if (u == v) throw std::invalid_argument("parse_graph: self-loop");
            if (u < 1 || v < 1 || u > g.n || v > g.n)
                throw std::invalid_argument("parse_graph: endpoint out of range");
            int a = static_cast<int>(u - 1), b = static_cast<int>(v - 1);
            g.edges.push_back({std::min(a, b), std::max(a, b)});
        } else {
            throw std::invalid_argument("parse_graph: unknown line tag '" + tag + "'");
        }
    }
    if (declared_edges < 0) throw std::invalid_argument("parse_graph: missing header");
    if (static_cast<long long>(g.edges.size()) != declared_edges)
        throw std::invalid_argument("parse_graph: edge count differs from header");
    g.validate();
    return g;
}

std::string write_vertex_set(const VertexSet& s) {
    std::ostringstream out;
    for (size_t i = 0; i < s.members.size(); ++i) {
        if (i) out << ' ';
        out << s.members[i] + 1;
    }
    out << '\n';
    return out.str();
}

VertexSet parse_vertex_set(const std::string& text, int n) {
    std::istringstream in(text);
    VertexSet s;
    long long v = 0;
    while (in >> v) {
        if (v < 1 || v > n) throw std::invalid_argument("parse_vertex_set: vertex out of range");
        s.members.push_back(static_cast<int>(v - 1));
    }
    if (!in.eof()) throw std::invalid_argument("parse_vertex_set: bad token");
    std::sort(s.members.begin(), s.members.end());
    for (size_t i = 1; i < s.members.size(); ++i)
        if (s.members[i] == s.members[i - 1])
            throw std::invalid_argument("parse_vertex_set: repeated vertex");
    return s;
}

}  // namespace optbench
