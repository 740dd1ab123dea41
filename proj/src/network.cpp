#include "optbench/network.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace optbench {

namespace {

void check_vertex(int v, int n, const char* what) {
    if (v < 0 || v >= n)
        throw std::invalid_argument(std::string("network: ") + what + " index out of range");
}

// peels origin-to-destination paths off one commodity's flow; whatever
// remains is circulation
bool has_circulation(int n, int k, const DemandMatrix& T,
                     std::map<std::pair<int, int>, long long> residual) {
    for (auto it = residual.begin(); it != residual.end();) {
        if (it->second == 0) {
            it = residual.erase(it);
        } else {
            ++it;
        }
    }
    for (int dest = 0; dest < n; ++dest) {
        long long need = T.t[(size_t)k][(size_t)dest];
        while (need > 0) {
            std::vector<int> prev((size_t)n, -1);
            std::vector<char> seen((size_t)n, 0);
            std::vector<int> stack{k};
            seen[(size_t)k] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                if (u == dest) break;
                for (const auto& [arc, f] : residual) {
                    if (arc.first != u || f <= 0 || seen[(size_t)arc.second]) continue;
                    seen[(size_t)arc.second] = 1;
                    prev[(size_t)arc.second] = u;
                    stack.push_back(arc.second);
                }
            }
            if (!seen[(size_t)dest]) return true;  // cannot decompose, treat as leftover
            long long delta = need;
            for (int v = dest; v != k; v = prev[(size_t)v])
                delta = std::min(delta, residual[{prev[(size_t)v], v}]);
            for (int v = dest; v != k; v = prev[(size_t)v]) residual[{prev[(size_t)v], v}] -= delta;
            need -= delta;
        }
    }
    for (const auto& [arc, f] : residual) {
        (void)arc;
        if (f > 0) return true;
    }
    return false;
}

}  // namespace

void DemandMatrix::validate() const {
    if (n < 1) throw std::invalid_argument("DemandMatrix: need at least one vertex");
    if (t.size() != (size_t)n) throw std::invalid_argument("DemandMatrix: row count mismatch");
    for (int i = 0; i < n; ++i) {
        if (t[(size_t)i].size() != (size_t)n)
            throw std::invalid_argument("DemandMatrix: column count mismatch");
        if (t[(size_t)i][(size_t)i] != 0)
            throw std::invalid_argument("DemandMatrix: diagonal must be zero");
        for (long long v : t[(size_t)i])
            if (v < 0) throw std::invalid_argument("DemandMatrix: negative demand");
    }
}

long long DemandMatrix::total() const {
    long long sum = 0;
    for (const auto& row : t)
        for (long long v : row) sum += v;
    return sum;
}

DemandMatrix DemandMatrix::head(int m) const {
    validate();
    if (m < 1 || m > n) throw std::invalid_argument("DemandMatrix: head size out of range");
    DemandMatrix out;
    out.n = m;
    out.t.assign((size_t)m, std::vector<long long>((size_t)m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.t[(size_t)i][(size_t)j] = t[(size_t)i][(size_t)j];
    return out;
}

Verdict check(int n, int p, const DemandMatrix& T, const DesignSolution& sol,
              std::vector<std::string>* warnings) {
    T.validate();
    if (T.n != n) throw std::invalid_argument("network: demand matrix size mismatch");
    if (p < 1 || p > n - 1) throw std::invalid_argument("network: degree out of range");
    for (const auto& [i, j] : sol.arcs) {
        check_vertex(i, n, "arc tail");
        check_vertex(j, n, "arc head");
        if (i == j) throw std::invalid_argument("network: self-loop arc");
    }
    for (const auto& [key, f] : sol.flows) {
        const auto& [k, i, j] = key;
        check_vertex(k, n, "commodity");
        check_vertex(i, n, "flow tail");
        check_vertex(j, n, "flow head");
        if (i == j) throw std::invalid_argument("network: self-loop flow");
        if (f < 0) throw std::invalid_argument("network: negative flow");
    }

    Verdict verdict;
    std::vector<int> outdeg((size_t)n, 0), indeg((size_t)n, 0);
    for (const auto& [i, j] : sol.arcs) {
        ++outdeg[(size_t)i];
        ++indeg[(size_t)j];
    }
    for (int v = 0; v < n; ++v) {
        if (outdeg[(size_t)v] != p) {
            std::ostringstream os;
            os << "vertex " << (v + 1) << " has outdegree " << outdeg[(size_t)v] << ", wants " << p;
            verdict.add_violation("degree", os.str(), std::llabs(outdeg[(size_t)v] - p));
        }
        if (indeg[(size_t)v] != p) {
            std::ostringstream os;
            os << "vertex " << (v + 1) << " has indegree " << indeg[(size_t)v] << ", wants " << p;
            verdict.add_violation("degree", os.str(), std::llabs(indeg[(size_t)v] - p));
        }
    }

    std::vector<std::map<std::pair<int, int>, long long>> per_commodity((size_t)n);
    std::map<std::pair<int, int>, long long> load;
    for (const auto& [key, f] : sol.flows) {
        const auto& [k, i, j] = key;
        if (f == 0) continue;
        if (!sol.arcs.count({i, j})) {
            std::ostringstream os;
            os << "commodity " << (k + 1) << " sends " << f << " units over unselected arc "
               << (i + 1) << "->" << (j + 1);
            verdict.add_violation("confinement", os.str(), f);
        }
        per_commodity[(size_t)k][{i, j}] += f;
        load[{i, j}] += f;
    }

    std::vector<char> conserved((size_t)n, 1);
    for (int k = 0; k < n; ++k) {
        std::vector<long long> net((size_t)n, 0);  // outflow minus inflow
        for (const auto& [arc, f] : per_commodity[(size_t)k]) {
            net[(size_t)arc.first] += f;
            net[(size_t)arc.second] -= f;
        }
        for (int i = 0; i < n; ++i) {
            long long want = 0;
            if (i == k) {
                for (long long v : T.t[(size_t)k]) want += v;
            } else {
                want = -T.t[(size_t)k][(size_t)i];
            }
            if (net[(size_t)i] != want) {
                conserved[(size_t)k] = 0;
                std::ostringstream os;
                os << "commodity " << (k + 1) << " at vertex " << (i + 1) << ": net outflow "
                   << net[(size_t)i] << ", wants " << want;
                verdict.add_violation("conservation", os.str(), std::llabs(net[(size_t)i] - want));
            }
        }
    }

    long long max_load = 0;
    for (const auto& [arc, f] : load) {
        (void)arc;
        max_load = std::max(max_load, f);
    }
    if (warnings) {
        if (sol.z != max_load) {
            std::ostringstream os;
            os << "stated objective " << sol.z << " differs from recomputed " << max_load;
            warnings->push_back(os.str());
        }
        for (int k = 0; k < n; ++k) {
            if (!conserved[(size_t)k] || per_commodity[(size_t)k].empty()) continue;
            if (has_circulation(n, k, T, per_commodity[(size_t)k])) {
                std::ostringstream os;
                os << "commodity " << (k + 1) << " carries circulating flow";
                warnings->push_back(os.str());
            }
        }
    }
    if (verdict.feasible) verdict.objective = max_load;
    return verdict;
}

DesignSolution trivial_solution(int n, int p, const DemandMatrix& T) {
    T.validate();
    if (T.n != n) throw std::invalid_argument("network: demand matrix size mismatch");
    if (n < 2 || p < 1 || p > n - 1) throw std::invalid_argument("network: degree out of range");
    DesignSolution sol;
    for (int i = 0; i < n; ++i)
        for (int s = 1; s <= p; ++s) sol.arcs.insert({i, (i + s) % n});
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            long long demand = T.t[(size_t)k][(size_t)i];
            if (demand == 0) continue;
            for (int v = k; v != i; v = (v + 1) % n) sol.flows[{k, v, (v + 1) % n}] += demand;
        }
    }
    long long max_load = 0;
    std::map<std::pair<int, int>, long long> load;
    for (const auto& [key, f] : sol.flows) load[{std::get<1>(key), std::get<2>(key)}] += f;
    for (const auto& [arc, f] : load) {
        (void)arc;
        max_load = std::max(max_load, f);
    }
    sol.z = max_load;
    return sol;
}

Model build_mip(int n, int p, const DemandMatrix& T, std::optional<long long> M) {
    T.validate();
    if (T.n != n) throw std::invalid_argument("network: demand matrix size mismatch");
    if (n < 2 || p < 1 || p > n - 1) throw std::invalid_argument("network: degree out of range");
    const long long total = T.total();
    const long long big = M.value_or(total);
    if (big < 0) throw std::invalid_argument("network: negative flow bound");

    Model model;
    model.sense = Sense::Minimize;
    std::map<std::pair<int, int>, int> xid;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) xid[{i, j}] = model.add_binary_var();
    std::vector<long long> row_total((size_t)n, 0);
    for (int k = 0; k < n; ++k)
        for (long long v : T.t[(size_t)k]) row_total[(size_t)k] += v;
    std::map<std::tuple<int, int, int>, int> fid;
    for (int k = 0; k < n; ++k) {
        if (row_total[(size_t)k] == 0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && j != k)
                    fid[{k, i, j}] = model.add_integer_var(0, std::min(big, row_total[(size_t)k]));
    }
    const int zid = model.add_integer_var(0, total);
    model.objective.add({zid}, 1);

    for (int i = 0; i < n; ++i) {
        LinearConstraint out;
        out.relation = Relation::Eq;
        out.rhs = p;
        for (int j = 0; j < n; ++j)
            if (j != i) out.coeffs[xid[{i, j}]] = 1;
        model.constraints.push_back(std::move(out));
    }
    for (int i = 0; i < n; ++i) {
        LinearConstraint in;
        in.relation = Relation::Eq;
        in.rhs = p;
        for (int j = 0; j < n; ++j)
            if (j != i) in.coeffs[xid[{j, i}]] = 1;
        model.constraints.push_back(std::move(in));
    }
    if (big > 0) {
        for (const auto& [key, id] : fid) {
            const auto& [k, i, j] = key;
            (void)k;
            LinearConstraint link;
            link.relation = Relation::Le;
            link.rhs = 0;
            link.coeffs[id] = 1;
            link.coeffs[xid.at({i, j})] = -big;
            model.constraints.push_back(std::move(link));
        }
    }
    for (int k = 0; k < n; ++k) {
        if (row_total[(size_t)k] == 0) continue;
        for (int i = 0; i < n; ++i) {
            LinearConstraint keep;
            keep.relation = Relation::Eq;
            keep.rhs = i == k ? row_total[(size_t)k] : -T.t[(size_t)k][(size_t)i];
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                if (j != k) keep.coeffs[fid.at({k, i, j})] += 1;
                if (i != k) keep.coeffs[fid.at({k, j, i})] -= 1;
            }
            model.constraints.push_back(std::move(keep));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            LinearConstraint cap;
            cap.relation = Relation::Le;
            cap.rhs = 0;
            for (int k = 0; k < n; ++k) {
                if (row_total[(size_t)k] == 0 || j == k) continue;
                cap.coeffs[fid.at({k, i, j})] = 1;
            }
            if (cap.coeffs.empty()) continue;
            cap.coeffs[zid] = -1;
            model.constraints.push_back(std::move(cap));
        }
    }
    model.validate();
    return model;
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        lines.push_back(line.substr(start));
    }
    return lines;
}

long long to_ll(const std::string& tok) {
    size_t pos = 0;
    long long v;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("network: bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("network: bad integer '" + tok + "'");
    return v;
}

}  // namespace

std::string write_demands(const DemandMatrix& T) {
    T.validate();
    std::ostringstream os;
    os << T.n << "\n";
    for (const auto& row : T.t) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[(size_t)j];
        os << "\n";
    }
    return os.str();
}

DemandMatrix parse_demands(const std::string& text) {
    std::vector<std::string> lines = content_lines(text);
    if (lines.empty()) throw std::invalid_argument("network: empty demand file");
    DemandMatrix T;
    T.n = (int)to_ll(lines[0]);
    if (T.n < 1 || T.n > 10000) throw std::invalid_argument("network: vertex count out of range");
    if (lines.size() != (size_t)T.n + 1) throw std::invalid_argument("network: wrong demand row count");
    for (int i = 0; i < T.n; ++i) {
        std::istringstream in(lines[(size_t)(i + 1)]);
        std::string tok;
        std::vector<long long> row;
        while (in >> tok) row.push_back(to_ll(tok));
        if (row.size() != (size_t)T.n) throw std::invalid_argument("network: wrong demand column count");
        T.t.push_back(std::move(row));
    }
    T.validate();
    return T;
}

std::string write_design(const DesignSolution& sol) {
    std::ostringstream os;
    os << "ARCS\n";
    for (const auto& [i, j] : sol.arcs) os << (i + 1) << " " << (j + 1) << "\n";
    os << "FLOWS\n";
    for (const auto& [key, f] : sol.flows) {
        if (f == 0) continue;
        const auto& [k, i, j] = key;
        os << (k + 1) << " " << (i + 1) << " " << (j + 1) << " " << f << "\n";
    }
    os << "Z " << sol.z << "\nEND\n";
    return os.str();
}

DesignSolution parse_design(const std::string& text, int n) {
    std::vector<std::string> lines = content_lines(text);
    size_t pos = 0;
    auto need = [&]() -> const std::string& {
        if (pos >= lines.size()) throw std::invalid_argument("network: truncated design file");
        return lines[pos++];
    };
    if (need() != "ARCS") throw std::invalid_argument("network: missing ARCS section");
    DesignSolution sol;
    while (pos < lines.size() && lines[pos] != "FLOWS") {
        std::istringstream in(need());
        std::string a, b, extra;
        if (!(in >> a >> b) || (in >> extra)) throw std::invalid_argument("network: bad arc line");
        int i = (int)to_ll(a) - 1, j = (int)to_ll(b) - 1;
        check_vertex(i, n, "arc tail");
        check_vertex(j, n, "arc head");
        if (!sol.arcs.insert({i, j}).second) throw std::invalid_argument("network: duplicate arc");
    }
    if (need() != "FLOWS") throw std::invalid_argument("network: missing FLOWS section");
    while (pos < lines.size() && lines[pos].rfind("Z ", 0) != 0) {
        std::istringstream in(need());
        std::string a, b, c, d, extra;
        if (!(in >> a >> b >> c >> d) || (in >> extra))
            throw std::invalid_argument("network: bad flow line");
        int k = (int)to_ll(a) - 1, i = (int)to_ll(b) - 1, j = (int)to_ll(c) - 1;
        check_vertex(k, n, "commodity");
        check_vertex(i, n, "flow tail");
        check_vertex(j, n, "flow head");
        long long f = to_ll(d);
        if (f < 0) throw std::invalid_argument("network: negative flow");
        sol.flows[{k, i, j}] += f;
    }
    {
        std::istringstream in(need());
        std::string word, val, extra;
        if (!(in >> word >> val) || word != "Z" || (in >> extra))
            throw std::invalid_argument("network: missing Z line");
        sol.z = to_ll(val);
    }
    if (need() != "END") throw std::invalid_argument("network: missing END");
    if (pos != lines.size()) throw std::invalid_argument("network: trailing content");
    return sol;
}

}  // namespace optbench
