#include "optbench/topology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
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
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t bound) { return next() % bound; }
};

std::vector<std::vector<int>> adjacency(const Graph& g) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(g.n));
    for (const auto& [u, v] : g.edges) {
        adj[static_cast<size_t>(u)].push_back(v);
        adj[static_cast<size_t>(v)].push_back(u);
    }
    return adj;
}

}  // namespace

void OdpInstance::validate() const {
    if (n < 2) throw std::invalid_argument("OdpInstance: order must be at least 2");
    if (d < 1) throw std::invalid_argument("OdpInstance: degree bound must be positive");
    if (k_target && *k_target < 1)
        throw std::invalid_argument("OdpInstance: diameter target must be positive");
}

PathStats diameter_aspl(const Graph& g) {
    g.validate();
    const int n = g.n;
    std::vector<std::vector<int>> adj = adjacency(g);
    PathStats stats;
    long long dist_total = 0;     // over ordered reachable pairs
    long long reachable_ordered = 0;
    int diam = 0;
    std::vector<int> dist(static_cast<size_t>(n));
    std::deque<int> queue;
    for (int src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<size_t>(src)] = 0;
        queue.clear();
        queue.push_back(src);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int w : adj[static_cast<size_t>(u)]) {
                if (dist[static_cast<size_t>(w)] < 0) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (int v = 0; v < n; ++v) {
            if (v == src) continue;
            if (dist[static_cast<size_t>(v)] < 0) {
                ++stats.unreachable_pairs;
            } else {
                dist_total += dist[static_cast<size_t>(v)];
                ++reachable_ordered;
                diam = std::max(diam, dist[static_cast<size_t>(v)]);
            }
        }
    }
    stats.unreachable_pairs /= 2;  // counted from both endpoints
    if (stats.unreachable_pairs == 0) stats.diameter = diam;
    if (reachable_ordered > 0) {
        // Ordered sums double both numerator and denominator, so the ratio
        // is already the unordered-pair mean.
        long long g_ = std::gcd(dist_total, reachable_ordered);
        stats.aspl = {dist_total / g_, reachable_ordered / g_};
    } else {
        stats.aspl = {0, 1};
    }
    return stats;
}

Verdict check(const OdpInstance& inst, const Graph& g, int k) {
    inst.validate();
    g.validate();
    if (k < 0) throw std::invalid_argument("check: claimed diameter must be non-negative");
    Verdict verdict = Verdict::ok();
    if (g.n != inst.n) {
        std::ostringstream detail;
        detail << "expected " << inst.n << " vertices, got " << g.n;
        verdict.add_violation("order", detail.str(),
                              g.n > inst.n ? g.n - inst.n : inst.n - g.n);
    }
    std::vector<int> degree(static_cast<size_t>(g.n), 0);
    for (const auto& [u, v] : g.edges) {
        ++degree[static_cast<size_t>(u)];
        ++degree[static_cast<size_t>(v)];
    }
    for (int v = 0; v < g.n; ++v) {
        if (degree[static_cast<size_t>(v)] > inst.d) {
            std::ostringstream id;
            id << "degree " << v;
            std::ostringstream detail;
            detail << degree[static_cast<size_t>(v)] << " exceeds " << inst.d;
            verdict.add_violation(id.str(), detail.str(),
                                  degree[static_cast<size_t>(v)] - inst.d);
        }
    }
    PathStats stats = diameter_aspl(g);
    if (!stats.diameter) {
        std::ostringstream detail;
        detail << stats.unreachable_pairs << " unreachable pairs";
        verdict.add_violation("diameter", detail.str(), stats.unreachable_pairs);
    } else if (*stats.diameter > k) {
        std::ostringstream detail;
        detail << "measured " << *stats.diameter << " exceeds " << k;
        verdict.add_violation("diameter", detail.str(), *stats.diameter - k);
    }
    if (verdict.feasible && stats.diameter) verdict.objective = *stats.diameter;
    return verdict;
}

namespace {

// (connected, diameter, aspl) lexicographic comparison; disconnected is
// worse than any connected metric.
struct Metric {
    bool connected = false;
    int diameter = 0;
    Ratio aspl;
};

Metric measure(const Graph& g) {
    PathStats stats = diameter_aspl(g);
    Metric m;
    m.connected = stats.diameter.has_value();
    m.diameter = stats.diameter.value_or(0);
    m.aspl = stats.aspl;
    return m;
}

bool better(const Metric& a, const Metric& b) {  // strictly better
    if (a.connected != b.connected) return a.connected;
    if (!a.connected) return false;
    if (a.diameter != b.diameter) return a.diameter < b.diameter;
    return static_cast<__int128>(a.aspl.num) * b.aspl.den <
           static_cast<__int128>(b.aspl.num) * a.aspl.den;
}

bool not_worse(const Metric& a, const Metric& b) { return !better(b, a); }

Graph pairing_graph(int n, int d, Rng& rng) {
    // One stub short when n*d is odd; the last vertex ends at degree d-1.
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < d; ++i) {
            if (v == n - 1 && (n * d) % 2 == 1 && i == d - 1) break;
            stubs.push_back(v);
        }
    for (int attempt = 0; attempt < 200; ++attempt) {
        for (size_t i = stubs.size() - 1; i > 0; --i)
            std::swap(stubs[i], stubs[rng.below(i + 1)]);
        std::set<std::pair<int, int>> seen;
        bool simple = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) {
                simple = false;
                break;
            }
            if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
                simple = false;
                break;
            }
        }
        if (simple) {
            Graph g;
            g.n = n;
            g.edges.assign(seen.begin(), seen.end());
            return g;
        }
    }
    // Deterministic circulant fallback: offsets 1..d/2, plus an
    // antipodal matching when d is odd.
    Graph g;
    g.n = n;
    std::set<std::pair<int, int>> edges;
    for (int off = 1; off <= d / 2; ++off)
        for (int v = 0; v < n; ++v) {
            int w = (v + off) % n;
            if (v != w) edges.insert({std::min(v, w), std::max(v, w)});
        }
    if (d % 2 == 1) {
        int half = (n + 1) / 2;  // odd n leaves one vertex at degree d-1
        for (int v = 0; v + half < n; ++v) edges.insert({v, v + half});
    }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

}  // namespace

Graph construct_topology(int n, int d, uint64_t seed, int budget) {
    if (n < 2) throw std::invalid_argument("construct_topology: order must be at least 2");
    if (d < 1) throw std::invalid_argument("construct_topology: degree must be positive");
    if (budget < 0) throw std::invalid_argument("construct_topology: negative budget");

    if (n <= d + 1) {
        Graph g;
        g.n = n;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v});
        return g;
    }

    Rng rng(mix64(seed) ^ mix64(static_cast<uint64_t>(n) * 1000003ull + static_cast<uint64_t>(d)));
    Graph current = pairing_graph(n, d, rng);
    std::set<std::pair<int, int>> edge_set(current.edges.begin(), current.edges.end());
    Metric cur_metric = measure(current);
    Graph best = current;
    Metric best_metric = cur_metric;

    for (int step = 0; step < budget; ++step) {
        const size_t m = current.edges.size();
        if (m < 2) break;
        size_t i = rng.below(m);
        size_t j = rng.below(m);
        if (i == j) continue;
        auto [a, b] = current.edges[i];
        auto [c, e] = current.edges[j];
        if (rng.next() & 1) std::swap(c, e);
        // Rewire (a,b),(c,e) to (a,c),(b,e).
        if (a == c || b == e) continue;
        std::pair<int, int> e1{std::min(a, c), std::max(a, c)};
        std::pair<int, int> e2{std::min(b, e), std::max(b, e)};
        if (edge_set.count(e1) || edge_set.count(e2) || e1 == e2) continue;

        std::pair<int, int> old1 = current.edges[i];
        std::pair<int, int> old2 = current.edges[j];
        edge_set.erase(old1);
        edge_set.erase(old2);
        edge_set.insert(e1);
        edge_set.insert(e2);
        current.edges[i] = e1;
        current.edges[j] = e2;

        Metric next = measure(current);
        if (not_worse(next, cur_metric)) {
            cur_metric = next;
            if (better(next, best_metric)) {
                best = current;
                best_metric = next;
            }
        } else {
            edge_set.erase(e1);
            edge_set.erase(e2);
            edge_set.insert(old1);
            edge_set.insert(old2);
            current.edges[i] = old1;
            current.edges[j] = old2;
        }
    }
    std::sort(best.edges.begin(), best.edges.end());
    return best;
}

std::string write_edge_list(const Graph& g) {
    g.validate();
    std::vector<std::pair<int, int>> sorted_edges = g.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    std::ostringstream out;
    for (const auto& [u, v] : sorted_edges) out << u << ' ' << v << '\n';
    return out.str();
}

Graph parse_edge_list(const std::string& text, int n) {
    if (n < 1) throw std::invalid_argument("parse_edge_list: bad vertex count");
    Graph g;
    g.n = n;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed;
        for (char ch : line) {
            if (ch == '#') break;
            trimmed += ch;
        }
        std::istringstream ls(trimmed);
        long long u = 0, v = 0;
        if (!(ls >> u)) continue;  // blank or comment line
        if (!(ls >> v)) throw std::invalid_argument("parse_edge_list: line needs two endpoints");
        std::string extra;
        if (ls >> extra) throw std::invalid_argument("parse_edge_list: trailing tokens");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("parse_edge_list: endpoint out of range");
        if (u == v) throw std::invalid_argument("parse_edge_list: self-loop");
        int a = static_cast<int>(std::min(u, v));
        int b = static_cast<int>(std::max(u, v));
        g.edges.push_back({a, b});
    }
    g.validate();
    return g;
}

}  // namespace optbench
