#include "optbench/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace optbench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

uint64_t splitmix_next(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// counter-based stream keyed by (seed, restart, sweep)
struct KeyedRng {
  uint64_t state;
  KeyedRng(uint64_t seed, uint64_t restart, uint64_t sweep) {
    uint64_t s = seed;
    uint64_t a = splitmix_next(s);
    s = restart ^ 0x9e3779b97f4a7c15ull;
    uint64_t b = splitmix_next(s);
    s = sweep ^ 0xbf58476d1ce4e5b9ull;
    uint64_t c = splitmix_next(s);
    state = a ^ (b * 0xd1342543de82ef95ull) ^ (c * 0xaf251af3b0f025b5ull);
    splitmix_next(state);
  }
  uint64_t next() { return splitmix_next(state); }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
};

// per-variable incidence structure shared by the QUBO and HUBO paths
struct Incidence {
  int n = 0;
  long long offset = 0;
  std::vector<long long> linear;
  std::vector<Monomial> term_vars;          // quadratic and higher terms
  std::vector<long long> term_coeff;
  std::vector<std::vector<int>> by_var;     // term indices touching each var

  explicit Incidence(const Qubo& q) : n(q.n), offset(q.offset), linear(q.n, 0), by_var(q.n) {
    for (const auto& [ij, c] : q.terms) {
      if (ij.first == ij.second) {
        linear[ij.first] += c;
      } else {
        int t = (int)term_vars.size();
        term_vars.push_back({ij.first, ij.second});
        term_coeff.push_back(c);
        by_var[ij.first].push_back(t);
        by_var[ij.second].push_back(t);
      }
    }
  }
  explicit Incidence(const Hubo& h) : n(h.n), offset(h.offset), linear(h.n, 0), by_var(h.n) {
    for (const auto& [m, c] : h.terms) {
      if (m.size() == 1) {
        linear[m[0]] += c;
      } else {
        int t = (int)term_vars.size();
        term_vars.push_back(m);
        term_coeff.push_back(c);
        for (int v : m) by_var[v].push_back(t);
      }
    }
  }

  long long full_energy(const std::vector<uint8_t>& x) const {
    __int128 e = offset;
    for (int i = 0; i < n; i++)
      if (x[i]) e += linear[i];
    for (std::size_t t = 0; t < term_vars.size(); t++) {
      bool on = true;
      for (int v : term_vars[t])
        if (!x[v]) {
          on = false;
          break;
        }
      if (on) e += term_coeff[t];
    }
    return (long long)e;
  }

  // energy change caused by flipping bit i in x
  long long flip_delta(const std::vector<uint8_t>& x, int i) const {
    long long field = linear[i];
    for (int t : by_var[i]) {
      bool others_on = true;
      for (int v : term_vars[t])
        if (v != i && !x[v]) {
          others_on = false;
          break;
        }
      if (others_on) field += term_coeff[t];
    }
    return x[i] ? -field : field;
  }
};

SolveOutcome brute_force_incidence(const Incidence& inc, int limit) {
  if (inc.n > limit) throw std::invalid_argument("brute_force: too many variables");
  if (inc.n >= 63) throw std::invalid_argument("brute_force: too many variables");
  const auto t0 = Clock::now();
  SolveOutcome out;
  std::vector<uint8_t> x(inc.n, 0);
  long long cur = inc.full_energy(x);
  out.best_x = x;
  out.best_energy = cur;
  out.evaluations = 1;
  // gray-code walk; ties resolved by plain lexicographic comparison
  for (unsigned long long k = 1; k < (1ull << inc.n); k++) {
    int bit = __builtin_ctzll(k);
    cur += inc.flip_delta(x, bit);
    x[bit] ^= 1;
    out.evaluations++;
    if (cur < out.best_energy ||
        (cur == out.best_energy &&
         std::lexicographical_compare(x.begin(), x.end(), out.best_x.begin(), out.best_x.end()))) {
      out.best_energy = cur;
      out.best_x = x;
    }
  }
  out.elapsed_s = seconds_since(t0);
  return out;
}

SolveOutcome local_sweeps_incidence(const Incidence& inc, std::vector<uint8_t> x,
                                    std::size_t n_s) {
  if ((int)x.size() != inc.n) throw std::invalid_argument("local_sweeps: start length mismatch");
  const auto t0 = Clock::now();
  SolveOutcome out;
  long long cur = inc.full_energy(x);
  out.evaluations = 1;
  for (std::size_t pass = 0; pass < n_s; pass++) {
    bool changed = false;
    for (int i = 0; i < inc.n; i++) {
      long long d = inc.flip_delta(x, i);
      out.evaluations++;
      if (d < 0) {
        x[i] ^= 1;
        cur += d;
        changed = true;
      }
    }
    if (!changed) break;
  }
  out.best_x = std::move(x);
  out.best_energy = cur;
  out.elapsed_s = seconds_since(t0);
  return out;
}

}  // namespace

SolveOutcome brute_force(const Qubo& q, int limit) {
  return brute_force_incidence(Incidence(q), limit);
}

SolveOutcome brute_force(const Hubo& h, int limit) {
  return brute_force_incidence(Incidence(h), limit);
}

SolveOutcome local_sweeps(const Qubo& q, std::vector<uint8_t> x0, std::size_t n_s) {
  return local_sweeps_incidence(Incidence(q), std::move(x0), n_s);
}

SolveOutcome local_sweeps(const Hubo& h, std::vector<uint8_t> x0, std::size_t n_s) {
  return local_sweeps_incidence(Incidence(h), std::move(x0), n_s);
}

SolveOutcome simulated_annealing(const Qubo& q, const AnnealSchedule& sch) {
  if (sch.sweeps < 1) throw std::invalid_argument("AnnealSchedule: sweeps must be >= 1");
  if (sch.restarts < 1) throw std::invalid_argument("AnnealSchedule: restarts must be >= 1");
  if (!(sch.beta_start > 0) || sch.beta_start > sch.beta_end)
    throw std::invalid_argument("AnnealSchedule: need 0 < beta_start <= beta_end");
  const Incidence inc(q);
  const auto t0 = Clock::now();
  SolveOutcome out;
  bool have_best = false;
  const uint64_t init_tag = ~0ull;
  for (std::size_t r = 0; r < sch.restarts; r++) {
    std::vector<uint8_t> x(inc.n);
    KeyedRng init(sch.seed, r, init_tag);
    for (int i = 0; i < inc.n; i++) x[i] = init.next() & 1;
    long long cur = inc.full_energy(x);
    out.evaluations++;
    auto consider = [&](long long e, const std::vector<uint8_t>& cand) {
      if (!have_best || e < out.best_energy) {
        have_best = true;
        out.best_energy = e;
        out.best_x = cand;
      }
    };
    consider(cur, x);
    for (std::size_t s = 0; s < sch.sweeps; s++) {
      const double beta =
          sch.sweeps == 1
              ? sch.beta_end
              : sch.beta_start + (sch.beta_end - sch.beta_start) * (double)s /
                                     (double)(sch.sweeps - 1);
      KeyedRng rng(sch.seed, r, s);
      for (int i = 0; i < inc.n; i++) {
        long long d = inc.flip_delta(x, i);
        out.evaluations++;
        bool accept = d <= 0;
        if (!accept) accept = rng.uniform() < std::exp(-beta * (double)d);
        if (accept) {
          x[i] ^= 1;
          cur += d;
          if (cur < out.best_energy) consider(cur, x);
        }
      }
    }
  }
  out.elapsed_s = seconds_since(t0);
  return out;
}

namespace {

long long div_floor(__int128 a, long long b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q--;
  if (q > std::numeric_limits<long long>::max() || q < std::numeric_limits<long long>::min())
    throw std::overflow_error("brute_force: bound overflow");
  return (long long)q;
}

long long div_ceil(__int128 a, long long b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) q++;
  if (q > std::numeric_limits<long long>::max() || q < std::numeric_limits<long long>::min())
    throw std::overflow_error("brute_force: bound overflow");
  return (long long)q;
}

struct Box {
  std::vector<long long> lo, hi;
};

// tighten the box against every linear constraint; false means empty
bool propagate(const Model& m, Box& b) {
  for (int round = 0; round < 64; round++) {
    bool changed = false;
    for (const auto& c : m.constraints) {
      __int128 minsum = 0, maxsum = 0;
      for (const auto& [v, a] : c.coeffs) {
        if (a > 0) {
          minsum += (__int128)a * b.lo[v];
          maxsum += (__int128)a * b.hi[v];
        } else {
          minsum += (__int128)a * b.hi[v];
          maxsum += (__int128)a * b.lo[v];
        }
      }
      const bool need_le = c.relation != Relation::Ge;
      const bool need_ge = c.relation != Relation::Le;
      if (need_le && minsum > c.rhs) return false;
      if (need_ge && maxsum < c.rhs) return false;
      for (const auto& [v, a] : c.coeffs) {
        if (need_le) {
          __int128 rest = minsum - (a > 0 ? (__int128)a * b.lo[v] : (__int128)a * b.hi[v]);
          __int128 room = (__int128)c.rhs - rest;
          if (a > 0) {
            long long nhi = div_floor(room, a);
            if (nhi < b.hi[v]) {
              b.hi[v] = nhi;
              changed = true;
            }
          } else {
            long long nlo = div_ceil(room, a);
            if (nlo > b.lo[v]) {
              b.lo[v] = nlo;
              changed = true;
            }
          }
        }
        if (need_ge) {
          __int128 rest = maxsum - (a > 0 ? (__int128)a * b.hi[v] : (__int128)a * b.lo[v]);
          __int128 room = (__int128)c.rhs - rest;
          if (a > 0) {
            long long nlo = div_ceil(room, a);
            if (nlo > b.lo[v]) {
              b.lo[v] = nlo;
              changed = true;
            }
          } else {
            long long nhi = div_floor(room, a);
            if (nhi < b.hi[v]) {
              b.hi[v] = nhi;
              changed = true;
            }
          }
        }
        if (b.lo[v] > b.hi[v]) return false;
      }
    }
    if (!changed) return true;
  }
  return true;
}

struct Interval {
  __int128 lo, hi;
};

Interval objective_range(const Polynomial& p, const Box& b) {
  Interval total{0, 0};
  for (const auto& [m, c] : p.terms) {
    Interval t{c, c};
    for (int v : m) {
      __int128 cands[4] = {t.lo * b.lo[v], t.lo * b.hi[v], t.hi * b.lo[v], t.hi * b.hi[v]};
      t.lo = *std::min_element(cands, cands + 4);
      t.hi = *std::max_element(cands, cands + 4);
    }
    total.lo += t.lo;
    total.hi += t.hi;
  }
  return total;
}

struct ModelSearch {
  const Model& m;
  ModelSolveOutcome out;
  bool have_best = false;
  long long best = 0;
  bool stop = false;

  explicit ModelSearch(const Model& model) : m(model) {}

  void dfs(Box box) {
    if (stop) return;
    if (!propagate(m, box)) return;
    int branch = -1;
    for (int v = 0; v < m.n(); v++)
      if (box.lo[v] < box.hi[v]) {
        branch = v;
        break;
      }
    if (branch < 0) {
      out.evaluations++;
      for (const auto& c : m.constraints)
        if (!satisfies(c, box.lo)) return;
      if (m.sense == Sense::Feasibility) {
        out.feasible = true;
        out.best_x = box.lo;
        stop = true;
        return;
      }
      const long long obj = (long long)eval(m.objective, box.lo);
      const bool better =
          !have_best || (m.sense == Sense::Minimize ? obj < best : obj > best);
      if (better) {
        have_best = true;
        best = obj;
        out.feasible = true;
        out.best_x = box.lo;
        out.objective = obj;
      }
      return;
    }
    if (have_best && m.sense != Sense::Feasibility) {
      auto range = objective_range(m.objective, box);
      if (m.sense == Sense::Minimize ? range.lo >= best : range.hi <= best) return;
    }
    for (long long val = box.lo[branch]; val <= box.hi[branch] && !stop; val++) {
      Box child = box;
      child.lo[branch] = child.hi[branch] = val;
      dfs(std::move(child));
    }
  }
};

}  // namespace

ModelSolveOutcome brute_force(const Model& m, int limit) {
  m.validate();
  if (m.n() > limit) throw std::invalid_argument("brute_force: too many variables");
  const auto t0 = Clock::now();
  ModelSearch search(m);
  Box root;
  for (const auto& v : m.variables) {
    root.lo.push_back(v.lower);
    root.hi.push_back(v.upper);
  }
  search.dfs(std::move(root));
  search.out.elapsed_s = seconds_since(t0);
  return search.out;
}

}  // namespace optbench
