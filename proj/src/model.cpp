#include "optbench/model.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace optbench {

namespace {

long long checked_ll(__int128 v, const char* ctx) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw std::overflow_error(std::string(ctx) + ": value out of 64-bit range");
  return (long long)v;
}

void add_term(std::map<Monomial, long long>& terms, Monomial m, long long c, const char* ctx) {
  if (c == 0) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(std::move(m), c);
    return;
  }
  it->second = checked_ll((__int128)it->second + c, ctx);
  if (it->second == 0) terms.erase(it);
}

}  // namespace

void Polynomial::add(Monomial m, long long c) {
  std::sort(m.begin(), m.end());
  add_term(terms, std::move(m), c, "Polynomial::add");
}

void Polynomial::add_binary(Monomial m, long long c) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  add_term(terms, std::move(m), c, "Polynomial::add");
}

long long Polynomial::constant() const {
  auto it = terms.find(Monomial{});
  return it == terms.end() ? 0 : it->second;
}

int Polynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms) d = std::max(d, m.size());
  return (int)d;
}

__int128 eval(const Polynomial& p, const std::vector<long long>& x) {
  __int128 total = 0;
  for (const auto& [m, c] : p.terms) {
    __int128 prod = c;
    for (int v : m) {
      if (v < 0 || (std::size_t)v >= x.size())
        throw std::out_of_range("Polynomial eval: variable index out of range");
      prod *= x[v];
      if (prod == 0) break;
    }
    total += prod;
  }
  return total;
}

int Model::add_binary_var() {
  variables.push_back(VariableSpec{VariableSpec::Binary, 0, 1});
  return (int)variables.size() - 1;
}

int Model::add_integer_var(long long lower, long long upper) {
  if (lower > upper) throw std::invalid_argument("Model: integer bounds reversed");
  variables.push_back(VariableSpec{VariableSpec::Integer, lower, upper});
  return (int)variables.size() - 1;
}

void Model::validate() const {
  const int nv = n();
  for (const auto& v : variables)
    if (v.lower > v.upper) throw std::invalid_argument("Model: variable bounds reversed");
  for (const auto& [m, c] : objective.terms) {
    if (c == 0) throw std::invalid_argument("Model: zero objective coefficient stored");
    for (std::size_t i = 0; i < m.size(); i++) {
      if (m[i] < 0 || m[i] >= nv) throw std::invalid_argument("Model: objective variable undeclared");
      if (i > 0 && m[i] < m[i - 1]) throw std::invalid_argument("Model: monomial not sorted");
      if (i > 0 && m[i] == m[i - 1] && variables[m[i]].kind == VariableSpec::Binary)
        throw std::invalid_argument("Model: repeated binary variable in monomial");
    }
  }
  for (const auto& c : constraints) {
    if (c.coeffs.empty()) throw std::invalid_argument("Model: constraint without coefficients");
    for (const auto& [v, a] : c.coeffs) {
      if (v < 0 || v >= nv) throw std::invalid_argument("Model: constraint variable undeclared");
      if (a == 0) throw std::invalid_argument("Model: zero constraint coefficient stored");
    }
  }
}

bool satisfies(const LinearConstraint& c, const std::vector<long long>& x) {
  __int128 lhs = 0;
  for (const auto& [v, a] : c.coeffs) {
    if (v < 0 || (std::size_t)v >= x.size())
      throw std::out_of_range("constraint eval: variable index out of range");
    lhs += (__int128)a * x[v];
  }
  switch (c.relation) {
    case Relation::Le: return lhs <= c.rhs;
    case Relation::Eq: return lhs == c.rhs;
    case Relation::Ge: return lhs >= c.rhs;
  }
  return false;
}

void Hubo::add(Monomial m, long long c) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  if (!m.empty() && (m.front() < 0 || m.back() >= n))
    throw std::out_of_range("Hubo::add: variable index out of range");
  if (m.empty()) {
    offset = checked_ll((__int128)offset + c, "Hubo::add");
    return;
  }
  add_term(terms, std::move(m), c, "Hubo::add");
}

int Hubo::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms) d = std::max(d, m.size());
  return (int)d;
}

void Qubo::add(int i, int j, long long c) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n) throw std::out_of_range("Qubo::add: variable index out of range");
  if (c == 0) return;
  auto key = std::make_pair(i, j);
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, c);
    return;
  }
  it->second = checked_ll((__int128)it->second + c, "Qubo::add");
  if (it->second == 0) terms.erase(it);
}

long long energy(const Qubo& q, const std::vector<uint8_t>& x) {
  if ((int)x.size() != q.n) throw std::invalid_argument("energy: assignment length mismatch");
  __int128 total = q.offset;
  for (const auto& [ij, c] : q.terms)
    if (x[ij.first] && x[ij.second]) total += c;
  return checked_ll(total, "energy");
}

long long energy(const Hubo& h, const std::vector<uint8_t>& x) {
  if ((int)x.size() != h.n) throw std::invalid_argument("energy: assignment length mismatch");
  __int128 total = h.offset;
  for (const auto& [m, c] : h.terms) {
    bool on = true;
    for (int v : m)
      if (!x[v]) {
        on = false;
        break;
      }
    if (on) total += c;
  }
  return checked_ll(total, "energy");
}

Hubo to_hubo(const Qubo& q) {
  Hubo h;
  h.n = q.n;
  h.offset = q.offset;
  for (const auto& [ij, c] : q.terms) {
    Monomial m = ij.first == ij.second ? Monomial{ij.first} : Monomial{ij.first, ij.second};
    h.add(std::move(m), c);
  }
  return h;
}

PenaltyResult penalty_unconstrain(const Model& m, std::optional<long long> M) {
  m.validate();
  for (const auto& v : m.variables)
    if (v.kind != VariableSpec::Binary)
      throw std::invalid_argument("penalty_unconstrain: model has non-binary variables");
  for (const auto& c : m.constraints)
    if (c.relation != Relation::Eq)
      throw std::invalid_argument(
          "penalty_unconstrain: inequality constraint, add slack variables first");

  PenaltyResult out;
  out.negated = m.sense == Sense::Maximize;

  __int128 coeff_sum = 0;
  for (const auto& [mono, c] : m.objective.terms) coeff_sum += c < 0 ? -(__int128)c : c;
  out.m_min = checked_ll(coeff_sum + 1, "penalty_unconstrain");
  out.m_used = M.value_or(out.m_min);
  if (out.m_used <= 0) throw std::invalid_argument("penalty_unconstrain: M must be positive");
  out.below_bound = out.m_used < out.m_min;

  Hubo h;
  h.n = m.n();
  for (const auto& [mono, c] : m.objective.terms) h.add(mono, out.negated ? -c : c);

  const __int128 big = out.m_used;
  for (const auto& c : m.constraints) {
    // M * (sum a_i x_i - b)^2 over binary x
    std::vector<std::pair<int, long long>> av(c.coeffs.begin(), c.coeffs.end());
    for (std::size_t i = 0; i < av.size(); i++) {
      __int128 diag = (__int128)av[i].second * av[i].second -
                      2 * (__int128)c.rhs * av[i].second;
      h.add({av[i].first}, checked_ll(big * diag, "penalty_unconstrain"));
      for (std::size_t j = i + 1; j < av.size(); j++) {
        __int128 cross = 2 * (__int128)av[i].second * av[j].second;
        h.add({av[i].first, av[j].first}, checked_ll(big * cross, "penalty_unconstrain"));
      }
    }
    h.add({}, checked_ll(big * c.rhs * c.rhs, "penalty_unconstrain"));
  }
  out.hubo = std::move(h);
  return out;
}

namespace {

// product of two multilinear binary polynomials
Polynomial mul_binary(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_binary(std::move(m), checked_ll((__int128)ca * cb, "binarize_integers"));
    }
  return out;
}

}  // namespace

BinarizeResult binarize_integers(const Model& m) {
  m.validate();
  BinarizeResult out;
  out.model.sense = m.sense;
  out.var_map.assign(m.n(), -1);

  // substitution polynomial per original variable
  std::vector<Polynomial> subst(m.n());
  for (int v = 0; v < m.n(); v++) {
    const auto& spec = m.variables[v];
    if (spec.kind == VariableSpec::Binary) {
      int id = out.model.add_binary_var();
      out.var_map[v] = id;
      subst[v].add({id}, 1);
      continue;
    }
    BitGroup g;
    g.original_var = v;
    g.lower = spec.lower;
    const long long range = spec.upper - spec.lower;
    long long covered = 0;
    for (long long w = 1; covered + w <= range; w *= 2) {
      int id = out.model.add_binary_var();
      g.bits.emplace_back(id, w);
      covered += w;
    }
    if (covered < range) {
      int id = out.model.add_binary_var();
      g.bits.emplace_back(id, range - covered);
    }
    if (g.lower != 0) subst[v].add({}, g.lower);
    for (const auto& [id, w] : g.bits) subst[v].add({id}, w);
    out.groups.push_back(std::move(g));
  }

  for (const auto& [mono, c] : m.objective.terms) {
    Polynomial prod;
    prod.add({}, c);
    for (int v : mono) prod = mul_binary(prod, subst[v]);
    for (const auto& [mm, cc] : prod.terms) out.model.objective.add_binary(mm, cc);
  }

  for (const auto& con : m.constraints) {
    LinearConstraint nc;
    nc.relation = con.relation;
    __int128 rhs = con.rhs;
    std::map<int, __int128> coeffs;
    for (const auto& [v, a] : con.coeffs) {
      for (const auto& [mm, cc] : subst[v].terms) {
        if (mm.empty())
          rhs -= (__int128)a * cc;
        else
          coeffs[mm[0]] += (__int128)a * cc;
      }
    }
    nc.rhs = checked_ll(rhs, "binarize_integers");
    for (const auto& [v, a] : coeffs)
      if (a != 0) nc.coeffs[v] = checked_ll(a, "binarize_integers");
    if (nc.coeffs.empty()) {
      const bool sat = nc.relation == Relation::Le   ? 0 <= nc.rhs
                       : nc.relation == Relation::Eq ? 0 == nc.rhs
                                                     : 0 >= nc.rhs;
      if (!sat)
        throw std::invalid_argument("binarize_integers: fixed variables violate a constraint");
      continue;  // constraint became vacuous
    }
    out.model.constraints.push_back(std::move(nc));
  }
  out.model.validate();
  return out;
}

std::vector<long long> BinarizeResult::decode(const std::vector<uint8_t>& x) const {
  if (x.size() != model.variables.size())
    throw std::invalid_argument("BinarizeResult::decode: assignment length mismatch");
  std::vector<long long> values(var_map.size(), 0);
  for (std::size_t v = 0; v < var_map.size(); v++)
    if (var_map[v] >= 0) values[v] = x[var_map[v]];
  for (const auto& g : groups) {
    __int128 val = g.lower;
    for (const auto& [id, w] : g.bits) val += (__int128)w * x[id];
    values[g.original_var] = checked_ll(val, "BinarizeResult::decode");
  }
  return values;
}

std::vector<uint8_t> BinarizeResult::encode_value(const BitGroup& g, long long k) {
  long long r = k - g.lower;
  long long range = 0;
  for (const auto& [id, w] : g.bits) range += w;
  if (r < 0 || r > range)
    throw std::out_of_range("BinarizeResult::encode_value: value outside variable range");
  // take bits greedily from the largest weight down
  std::vector<std::size_t> order(g.bits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return g.bits[a].second > g.bits[b].second; });
  std::vector<uint8_t> bits(g.bits.size(), 0);
  for (std::size_t idx : order) {
    if (g.bits[idx].second <= r) {
      bits[idx] = 1;
      r -= g.bits[idx].second;
    }
  }
  if (r != 0) throw std::logic_error("BinarizeResult::encode_value: greedy encoding failed");
  return bits;
}

QuadratizeResult quadratize(const Hubo& h) {
  QuadratizeResult out;
  std::map<Monomial, long long> cur = h.terms;
  int n = h.n;

  for (;;) {
    std::map<std::pair<int, int>, long long> count;
    for (const auto& [m, c] : cur) {
      if (m.size() < 3) continue;
      for (std::size_t i = 0; i < m.size(); i++)
        for (std::size_t j = i + 1; j < m.size(); j++) count[{m[i], m[j]}]++;
    }
    if (count.empty()) break;
    std::pair<int, int> pick = count.begin()->first;
    long long best = count.begin()->second;
    for (const auto& [pr, cnt] : count)
      if (cnt > best) {
        best = cnt;
        pick = pr;
      }

    __int128 psum = 0;
    for (const auto& [m, c] : cur) {
      if (m.size() < 3) continue;
      if (std::binary_search(m.begin(), m.end(), pick.first) &&
          std::binary_search(m.begin(), m.end(), pick.second))
        psum += c < 0 ? -(__int128)c : c;
    }
    const long long P = checked_ll(psum + 1, "quadratize");
    const int y = n++;
    out.aux.emplace_back(y, pick);

    std::map<Monomial, long long> next;
    for (const auto& [m, c] : cur) {
      if (m.size() >= 3 && std::binary_search(m.begin(), m.end(), pick.first) &&
          std::binary_search(m.begin(), m.end(), pick.second)) {
        Monomial repl;
        repl.reserve(m.size() - 1);
        for (int v : m)
          if (v != pick.first && v != pick.second) repl.push_back(v);
        repl.push_back(y);  // y is larger than every existing index
        add_term(next, std::move(repl), c, "quadratize");
      } else {
        add_term(next, m, c, "quadratize");
      }
    }
    // y := x_a * x_b enforced by P*(x_a x_b - 2 x_a y - 2 x_b y + 3 y)
    add_term(next, Monomial{pick.first, pick.second}, P, "quadratize");
    add_term(next, Monomial{pick.first, y}, checked_ll(-2 * (__int128)P, "quadratize"),
             "quadratize");
    add_term(next, Monomial{pick.second, y}, checked_ll(-2 * (__int128)P, "quadratize"),
             "quadratize");
    add_term(next, Monomial{y}, checked_ll(3 * (__int128)P, "quadratize"), "quadratize");
    cur = std::move(next);
  }

  out.qubo.n = n;
  out.qubo.offset = h.offset;
  for (const auto& [m, c] : cur) {
    if (m.size() == 1)
      out.qubo.add(m[0], m[0], c);
    else if (m.size() == 2)
      out.qubo.add(m[0], m[1], c);
    else
      throw std::logic_error("quadratize: leftover high-degree term");
  }
  return out;
}

std::vector<std::vector<int>> swap_distances(int n) {
  if (n < 1) throw std::invalid_argument("swap_distances: need at least one variable");
  std::vector<std::vector<int>> d(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; i++) d[i][i] = 0;
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  auto mark = [&](int layer) {
    for (int p = 0; p + 1 < n; p++) {
      int a = pos[p], b = pos[p + 1];
      if (d[a][b] < 0) d[a][b] = d[b][a] = layer;
    }
  };
  mark(0);
  for (int layer = 1; layer <= n - 2; layer++) {
    int start = layer % 2 == 1 ? 0 : 1;
    for (int p = start; p + 1 < n; p += 2) std::swap(pos[p], pos[p + 1]);
    mark(layer);
  }
  return d;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Qubo swap_mask(const Qubo& q, int k) {
  if (q.n < 2) throw std::invalid_argument("swap_mask: need at least two variables");
  if (k < 0 || k > q.n - 2) throw std::invalid_argument("swap_mask: layer count out of range");
  const auto d = swap_distances(q.n);
  Qubo out;
  out.n = q.n;
  out.offset = q.offset;
  for (const auto& [ij, c] : q.terms)
    if (ij.first == ij.second || d[ij.first][ij.second] <= k) out.terms.emplace(ij, c);

  UnionFind uf(q.n);
  for (const auto& [ij, c] : out.terms)
    if (ij.first != ij.second) uf.unite(ij.first, ij.second);
  const int root = uf.find(0);
  for (int v = 1; v < q.n; v++)
    if (uf.find(v) != root)
      throw std::runtime_error("swap_mask: masked QUBO left the variable graph disconnected");
  out.swap_layers = k;
  return out;
}

namespace {

void stats_accumulate(ModelStats& s, long long coeff) {
  long long a = coeff < 0 ? -coeff : coeff;
  if (s.n_nonzeros == 0) {
    s.coeff_min = s.coeff_max = a;
  } else {
    s.coeff_min = std::min(s.coeff_min, a);
    s.coeff_max = std::max(s.coeff_max, a);
  }
  s.n_nonzeros++;
}

}  // namespace

ModelStats model_stats(const Model& m) {
  ModelStats s;
  s.n_vars = m.variables.size();
  s.n_constraints = m.constraints.size();
  std::size_t constraint_nnz = 0;
  for (const auto& [mono, c] : m.objective.terms)
    if (!mono.empty()) stats_accumulate(s, c);
  for (const auto& con : m.constraints)
    for (const auto& [v, a] : con.coeffs) {
      stats_accumulate(s, a);
      constraint_nnz++;
    }
  if (s.n_vars > 0)
    s.density = density_classify(s.n_vars, s.n_constraints, constraint_nnz,
                                 MatrixKind::MipConstraintMatrix);
  return s;
}

ModelStats model_stats(const Qubo& q) {
  ModelStats s;
  s.n_vars = q.n;
  for (const auto& [ij, c] : q.terms) stats_accumulate(s, c);
  if (s.n_vars > 0)
    s.density = density_classify(s.n_vars, 0, s.n_nonzeros, MatrixKind::QuboUpperTriangle);
  return s;
}

ModelStats model_stats(const Hubo& h) {
  ModelStats s;
  s.n_vars = h.n;
  for (const auto& [m, c] : h.terms) stats_accumulate(s, c);
  if (s.n_vars > 0)
    s.density = density_classify(s.n_vars, 0, s.n_nonzeros, MatrixKind::QuboUpperTriangle);
  return s;
}

// ---- text formats ----

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
  }
  return tokens;
}

long long to_int(const std::string& tok, const char* ctx) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument(std::string(ctx) + ": expected integer, got '" + tok + "'");
  }
}

}  // namespace

std::string write_qubo(const Qubo& q) {
  std::ostringstream out;
  out << "QUBO n " << q.n << " offset " << q.offset << "\n";
  if (q.swap_layers) out << "# swap_layers " << *q.swap_layers << "\n";
  for (const auto& [ij, c] : q.terms) out << ij.first << " " << ij.second << " " << c << "\n";
  return out.str();
}

Qubo parse_qubo(const std::string& text) {
  // comment lines may carry the swap-layer annotation, so scan them first
  std::optional<int> layers;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string a, b;
      if (ls >> a >> b && a == "#" && b == "swap_layers") {
        std::string v;
        if (ls >> v) layers = (int)to_int(v, "parse_qubo");
      }
    }
  }
  auto tok = tokenize(text);
  if (tok.size() < 5 || tok[0] != "QUBO" || tok[1] != "n" || tok[3] != "offset")
    throw std::invalid_argument("parse_qubo: bad header");
  Qubo q;
  q.n = (int)to_int(tok[2], "parse_qubo");
  if (q.n < 0) throw std::invalid_argument("parse_qubo: negative size");
  q.offset = to_int(tok[4], "parse_qubo");
  if ((tok.size() - 5) % 3 != 0) throw std::invalid_argument("parse_qubo: truncated term line");
  for (std::size_t t = 5; t < tok.size(); t += 3) {
    int i = (int)to_int(tok[t], "parse_qubo");
    int j = (int)to_int(tok[t + 1], "parse_qubo");
    long long c = to_int(tok[t + 2], "parse_qubo");
    if (i > j) throw std::invalid_argument("parse_qubo: term not upper-triangular");
    if (i < 0 || j >= q.n) throw std::invalid_argument("parse_qubo: index out of range");
    if (q.terms.count({i, j})) throw std::invalid_argument("parse_qubo: duplicate term");
    if (c != 0) q.terms.emplace(std::make_pair(i, j), c);
  }
  q.swap_layers = layers;
  return q;
}

std::string write_hubo(const Hubo& h) {
  std::ostringstream out;
  out << "HUBO n " << h.n << " offset " << h.offset << "\n";
  for (const auto& [m, c] : h.terms) {
    out << m.size();
    for (int v : m) out << " " << v;
    out << " " << c << "\n";
  }
  return out.str();
}

Hubo parse_hubo(const std::string& text) {
  auto tok = tokenize(text);
  if (tok.size() < 5 || tok[0] != "HUBO" || tok[1] != "n" || tok[3] != "offset")
    throw std::invalid_argument("parse_hubo: bad header");
  Hubo h;
  h.n = (int)to_int(tok[2], "parse_hubo");
  if (h.n < 0) throw std::invalid_argument("parse_hubo: negative size");
  h.offset = to_int(tok[4], "parse_hubo");
  std::size_t t = 5;
  while (t < tok.size()) {
    long long deg = to_int(tok[t++], "parse_hubo");
    if (deg < 1 || t + deg + 1 > tok.size())
      throw std::invalid_argument("parse_hubo: truncated term line");
    Monomial m;
    for (long long i = 0; i < deg; i++) {
      int v = (int)to_int(tok[t++], "parse_hubo");
      if (v < 0 || v >= h.n) throw std::invalid_argument("parse_hubo: index out of range");
      if (!m.empty() && v <= m.back())
        throw std::invalid_argument("parse_hubo: term indices not strictly increasing");
      m.push_back(v);
    }
    long long c = to_int(tok[t++], "parse_hubo");
    if (h.terms.count(m)) throw std::invalid_argument("parse_hubo: duplicate term");
    if (c != 0) h.terms.emplace(std::move(m), c);
  }
  return h;
}

namespace {

void append_expr_term(std::string& out, bool& first, long long c, const Monomial& m) {
  std::string mag;
  long long a = c < 0 ? -c : c;
  if (a != 1 || m.empty()) mag = std::to_string(a);
  if (first) {
    if (c < 0) out += "- ";
    first = false;
  } else {
    out += c < 0 ? " - " : " + ";
  }
  out += mag;
  for (std::size_t i = 0; i < m.size(); i++) {
    if (!out.empty() && out.back() != ' ') out += ' ';
    out += "x" + std::to_string(m[i]);
  }
}

std::string expr_text(const Polynomial& p) {
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms) {
    if (m.empty()) continue;
    append_expr_term(out, first, c, m);
  }
  long long k = p.constant();
  if (k != 0 || first) append_expr_term(out, first, k, {});
  return out;
}

bool is_var_token(const std::string& t) {
  if (t.size() < 2 || t[0] != 'x') return false;
  for (std::size_t i = 1; i < t.size(); i++)
    if (!std::isdigit((unsigned char)t[i])) return false;
  return true;
}

bool is_int_token(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = t[0] == '-' ? 1 : 0;
  if (i == t.size()) return false;
  for (; i < t.size(); i++)
    if (!std::isdigit((unsigned char)t[i])) return false;
  return true;
}

const char* kSectionWords[] = {"subject", "binary", "integer", "end"};

bool is_section_word(const std::string& t) {
  for (const char* w : kSectionWords)
    if (t == w) return true;
  return false;
}

// expr := term (("+"|"-") term)* ; term := INT VAR* | ["-"] VAR+ with an
// optional leading sign on the first term
Polynomial parse_expr(const std::vector<std::string>& tok, std::size_t& i) {
  Polynomial p;
  bool first = true;
  while (i < tok.size()) {
    long long sign = 1;
    std::size_t save = i;
    if (tok[i] == "+" || tok[i] == "-") {
      sign = tok[i] == "-" ? -1 : 1;
      i++;
    } else if (!first) {
      break;  // next token belongs to the caller
    }
    if (i >= tok.size() || is_section_word(tok[i]) ||
        (!is_int_token(tok[i]) && !is_var_token(tok[i]))) {
      i = save;
      break;
    }
    long long coeff = 1;
    bool have_any = false;
    if (is_int_token(tok[i])) {
      coeff = to_int(tok[i], "parse_model");
      have_any = true;
      i++;
    }
    Monomial m;
    while (i < tok.size() && is_var_token(tok[i])) {
      m.push_back((int)to_int(tok[i].substr(1), "parse_model"));
      have_any = true;
      i++;
    }
    if (!have_any) throw std::invalid_argument("parse_model: empty term in expression");
    p.add(std::move(m), checked_ll((__int128)sign * coeff, "parse_model"));
    first = false;
  }
  return p;
}

}  // namespace

std::string write_model(const Model& m) {
  m.validate();
  std::ostringstream out;
  switch (m.sense) {
    case Sense::Minimize: out << "minimize\n"; break;
    case Sense::Maximize: out << "maximize\n"; break;
    case Sense::Feasibility: out << "feasibility\n"; break;
  }
  if (m.sense != Sense::Feasibility) out << "  " << expr_text(m.objective) << "\n";
  if (!m.constraints.empty()) {
    out << "subject to\n";
    for (std::size_t i = 0; i < m.constraints.size(); i++) {
      const auto& c = m.constraints[i];
      Polynomial lhs;
      for (const auto& [v, a] : c.coeffs) lhs.add({v}, a);
      const char* rel = c.relation == Relation::Le ? "<=" : c.relation == Relation::Eq ? "=" : ">=";
      out << "  c" << i << ": " << expr_text(lhs) << " " << rel << " " << c.rhs << "\n";
    }
  }
  std::string bins, ints;
  for (int v = 0; v < m.n(); v++) {
    if (m.variables[v].kind == VariableSpec::Binary) {
      bins += "  x" + std::to_string(v) + "\n";
    } else {
      ints += "  x" + std::to_string(v) + " " + std::to_string(m.variables[v].lower) + " " +
              std::to_string(m.variables[v].upper) + "\n";
    }
  }
  if (!bins.empty()) out << "binary\n" << bins;
  if (!ints.empty()) out << "integer\n" << ints;
  out << "end\n";
  return out.str();
}

Model parse_model(const std::string& text) {
  auto tok = tokenize(text);
  // constraint name tokens like "c0:" are decorative
  std::erase_if(tok, [](const std::string& t) { return t.size() >= 2 && t.back() == ':'; });
  std::size_t i = 0;
  if (tok.empty()) throw std::invalid_argument("parse_model: empty input");
  Model m;
  if (tok[i] == "minimize")
    m.sense = Sense::Minimize;
  else if (tok[i] == "maximize")
    m.sense = Sense::Maximize;
  else if (tok[i] == "feasibility")
    m.sense = Sense::Feasibility;
  else
    throw std::invalid_argument("parse_model: expected sense keyword, got '" + tok[i] + "'");
  i++;

  Polynomial objective;
  if (m.sense != Sense::Feasibility) objective = parse_expr(tok, i);

  std::vector<LinearConstraint> constraints;
  std::vector<long long> binary_ids;
  std::vector<std::array<long long, 3>> integer_decls;

  while (i < tok.size() && tok[i] != "end") {
    if (tok[i] == "subject") {
      if (i + 1 >= tok.size() || tok[i + 1] != "to")
        throw std::invalid_argument("parse_model: expected 'subject to'");
      i += 2;
      while (i < tok.size() && !is_section_word(tok[i])) {
        LinearConstraint c;
        Polynomial lhs = parse_expr(tok, i);
        if (i >= tok.size() || (tok[i] != "<=" && tok[i] != "=" && tok[i] != ">="))
          throw std::invalid_argument("parse_model: expected relation in constraint");
        c.relation = tok[i] == "<=" ? Relation::Le : tok[i] == "=" ? Relation::Eq : Relation::Ge;
        i++;
        if (i >= tok.size()) throw std::invalid_argument("parse_model: missing right-hand side");
        c.rhs = to_int(tok[i++], "parse_model");
        c.rhs = checked_ll((__int128)c.rhs - lhs.constant(), "parse_model");
        for (const auto& [mono, coeff] : lhs.terms) {
          if (mono.empty()) continue;
          if (mono.size() > 1)
            throw std::invalid_argument("parse_model: constraint is not linear");
          c.coeffs[mono[0]] = checked_ll((__int128)c.coeffs[mono[0]] + coeff, "parse_model");
        }
        std::erase_if(c.coeffs, [](const auto& kv) { return kv.second == 0; });
        if (c.coeffs.empty())
          throw std::invalid_argument("parse_model: constraint without variables");
        constraints.push_back(std::move(c));
      }
    } else if (tok[i] == "binary") {
      i++;
      while (i < tok.size() && is_var_token(tok[i]))
        binary_ids.push_back(to_int(tok[i++].substr(1), "parse_model"));
    } else if (tok[i] == "integer") {
      i++;
      while (i < tok.size() && is_var_token(tok[i])) {
        long long id = to_int(tok[i++].substr(1), "parse_model");
        if (i + 1 >= tok.size())
          throw std::invalid_argument("parse_model: integer declaration needs bounds");
        long long lo = to_int(tok[i++], "parse_model");
        long long hi = to_int(tok[i++], "parse_model");
        integer_decls.push_back({id, lo, hi});
      }
    } else {
      throw std::invalid_argument("parse_model: unexpected token '" + tok[i] + "'");
    }
  }
  if (i >= tok.size() || tok[i] != "end")
    throw std::invalid_argument("parse_model: missing 'end'");
  if (i + 1 != tok.size())
    throw std::invalid_argument("parse_model: trailing content after 'end'");

  const std::size_t n = binary_ids.size() + integer_decls.size();
  m.variables.assign(n, VariableSpec{});
  std::vector<bool> seen(n, false);
  auto declare = [&](long long id, VariableSpec spec) {
    if (id < 0 || (std::size_t)id >= n)
      throw std::invalid_argument("parse_model: variable ids must form a contiguous range");
    if (seen[id]) throw std::invalid_argument("parse_model: duplicate declaration of x" +
                                              std::to_string(id));
    seen[id] = true;
    m.variables[id] = spec;
  };
  for (long long id : binary_ids) declare(id, VariableSpec{VariableSpec::Binary, 0, 1});
  for (const auto& d : integer_decls) {
    if (d[1] > d[2]) throw std::invalid_argument("parse_model: integer bounds reversed");
    declare(d[0], VariableSpec{VariableSpec::Integer, d[1], d[2]});
  }

  // binary monomials were parsed kind-blind; normalize duplicates now
  for (const auto& [mono, c] : objective.terms) {
    Monomial norm;
    for (int v : mono) {
      if (v < 0 || (std::size_t)v >= n)
        throw std::invalid_argument("parse_model: undeclared variable x" + std::to_string(v));
      if (!norm.empty() && norm.back() == v && m.variables[v].kind == VariableSpec::Binary)
        continue;
      norm.push_back(v);
    }
    m.objective.add(std::move(norm), c);
  }
  m.constraints = std::move(constraints);
  m.validate();
  return m;
}

}  // namespace optbench
