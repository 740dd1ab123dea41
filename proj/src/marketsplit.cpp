#include "optbench/marketsplit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

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
  explicit Rng(uint64_t s) : state(mix64(s)) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  long long below(long long bound) { return (long long)(next() % (uint64_t)bound); }
};

std::string digest_bits(const std::vector<uint8_t>& x) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint8_t b : x) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

long long row_slack(const std::vector<long long>& row, const std::vector<uint8_t>& x,
                    long long b) {
  __int128 s = b;
  for (std::size_t j = 0; j < row.size(); j++)
    if (x[j]) s -= row[j];
  return (long long)s;
}

// one repair attempt over a freshly drawn instance; false = does not close
bool repair_row(std::vector<long long>& row, const std::vector<uint8_t>& x, long long b,
                long long D, Rng& rng) {
  const int n = (int)row.size();
  std::vector<int> ones, zeros;
  for (int j = 0; j < n; j++) (x[j] ? ones : zeros).push_back(j);
  if (ones.empty() || zeros.empty()) return row_slack(row, x, b) == 0;

  // switch values between a 0-column and a 1-column while it shrinks |slack|
  long long s = row_slack(row, x, b);
  while (s != 0) {
    long long best_abs = std::llabs(s);
    int bz = -1, bo = -1;
    for (int z : zeros)
      for (int o : ones) {
        long long ns = s - (row[z] - row[o]);
        if (std::llabs(ns) < best_abs) {
          best_abs = std::llabs(ns);
          bz = z;
          bo = o;
        }
      }
    if (bz < 0) break;
    std::swap(row[bz], row[bo]);
    s = row_slack(row, x, b);
  }
  if (s == 0) return true;

  // spread the remaining slack over c column pairs in integer steps
  const long long c = (long long)(3 * ones.size()) / 2;
  if (c == 0) return false;
  long long lo = s >= 0 ? s / c : -((-s + c - 1) / c);  // floor(s/c)
  long long rem = s - lo * c;                           // rem pairs get lo+1
  for (long long p = 0; p < c; p++) {
    const long long delta = lo + (p < rem ? 1 : 0);
    if (delta == 0) continue;
    bool placed = false;
    for (int tries = 0; tries < 400 && !placed; tries++) {
      int o = ones[(std::size_t)rng.below((long long)ones.size())];
      int z = zeros[(std::size_t)rng.below((long long)zeros.size())];
      long long no = row[o] + delta;
      long long nz = row[z] - delta;
      if (no < 0 || no >= D || nz < 0 || nz >= D) continue;
      row[o] = no;
      row[z] = nz;
      placed = true;
    }
    if (!placed) return false;
  }
  return row_slack(row, x, b) == 0;
}

}  // namespace

void MarketSplitInstance::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("MarketSplitInstance: empty dimensions");
  if ((int)A.size() != m || (int)b.size() != m)
    throw std::invalid_argument("MarketSplitInstance: row count mismatch");
  for (const auto& row : A) {
    if ((int)row.size() != n)
      throw std::invalid_argument("MarketSplitInstance: column count mismatch");
    for (long long v : row)
      if (v < 0) throw std::invalid_argument("MarketSplitInstance: negative entry");
  }
}

MarketSplitInstance generate_market_split(int m, long long D, uint64_t seed) {
  if (m < 2) throw std::invalid_argument("generate_market_split: m must be >= 2");
  if (D < 2) throw std::invalid_argument("generate_market_split: D must be >= 2");
  const int n = 10 * (m - 1);

  for (int attempt = 0; attempt < 256; attempt++) {
    Rng rng(mix64(seed ^ mix64((uint64_t)attempt)) ^ mix64((uint64_t)m * 1000003ull + (uint64_t)D));

    std::vector<uint8_t> x(n, 0);
    const int k = n / 2 + (int)(rng.next() % 5) - 2;
    std::vector<int> order(n);
    for (int i = 0; i < n; i++) order[i] = i;
    for (int i = n - 1; i > 0; i--) std::swap(order[i], order[(int)rng.below(i + 1)]);
    for (int i = 0; i < k; i++) x[order[i]] = 1;

    MarketSplitInstance inst;
    inst.m = m;
    inst.n = n;
    inst.A.assign(m, std::vector<long long>(n));
    inst.b.assign(m, 0);
    for (int i = 0; i < m; i++) {
      long long total = 0;
      for (int j = 0; j < n; j++) {
        inst.A[i][j] = rng.below(D);
        total += inst.A[i][j];
      }
      inst.b[i] = total / 2;
    }

    bool ok = true;
    for (int i = 0; i < m && ok; i++) ok = repair_row(inst.A[i], x, inst.b[i], D, rng);
    if (!ok) continue;

    inst.seed = seed;
    inst.range = D;
    inst.planted_digest = digest_bits(x);
    inst.planted = x;
    inst.regenerations = attempt;
    inst.validate();
    if (!check(inst, x).feasible) continue;
    return inst;
  }
  throw std::runtime_error("generate_market_split: repair failed after bounded retries");
}

Verdict check(const MarketSplitInstance& inst, const std::vector<uint8_t>& x) {
  inst.validate();
  if ((int)x.size() != inst.n)
    throw std::invalid_argument("check: solution length mismatch");
  Verdict v;
  for (int i = 0; i < inst.m; i++) {
    long long s = row_slack(inst.A[i], x, inst.b[i]);
    if (s != 0)
      v.add_violation("row" + std::to_string(i), "slack " + std::to_string(s), std::llabs(s));
  }
  return v;
}

Model to_objective(const MarketSplitInstance& inst, ResidualNorm norm) {
  inst.validate();
  Model model;
  model.sense = Sense::Minimize;
  for (int j = 0; j < inst.n; j++) model.add_binary_var();

  if (norm == ResidualNorm::SquaredL2) {
    for (int i = 0; i < inst.m; i++) {
      const auto& row = inst.A[i];
      const long long bi = inst.b[i];
      for (int j = 0; j < inst.n; j++) {
        if (row[j] == 0) continue;
        model.objective.add({j}, row[j] * row[j] - 2 * bi * row[j]);
        for (int k = j + 1; k < inst.n; k++)
          if (row[k] != 0) model.objective.add({j, k}, 2 * row[j] * row[k]);
      }
      model.objective.add({}, bi * bi);
    }
    return model;
  }

  // LInf: minimize t with -t <= b_i - (A x)_i <= t
  long long bound = 0;
  for (int i = 0; i < inst.m; i++) {
    long long total = 0;
    for (long long v : inst.A[i]) total += v;
    bound = std::max({bound, std::llabs(inst.b[i]), std::llabs(total - inst.b[i])});
  }
  const int t = model.add_integer_var(0, bound);
  model.objective.add({t}, 1);
  for (int i = 0; i < inst.m; i++) {
    LinearConstraint upper, lower;
    for (int j = 0; j < inst.n; j++) {
      if (inst.A[i][j] == 0) continue;
      upper.coeffs[j] = inst.A[i][j];
      lower.coeffs[j] = inst.A[i][j];
    }
    upper.coeffs[t] = -1;
    upper.relation = Relation::Le;
    upper.rhs = inst.b[i];
    lower.coeffs[t] = 1;
    lower.relation = Relation::Ge;
    lower.rhs = inst.b[i];
    model.constraints.push_back(std::move(upper));
    model.constraints.push_back(std::move(lower));
  }
  model.validate();
  return model;
}

namespace {

using u128 = unsigned __int128;

struct PackedKeys {
  int rows = 0;                     // leading rows folded into the key
  std::vector<int> shift;
  u128 target = 0;

  // no-carry packing: each field is wide enough for the full row sum
  static std::optional<PackedKeys> build(const MarketSplitInstance& inst) {
    PackedKeys pk;
    int used = 0;
    for (int i = 0; i < inst.m; i++) {
      u128 total = 0;
      for (long long v : inst.A[i]) total += (u128)v;
      int w = 1;
      while ((u128)1 << w <= total) w++;
      if (used + w > 120) break;
      pk.shift.push_back(used);
      used += w;
      pk.rows++;
    }
    if (pk.rows == 0) return std::nullopt;
    for (int i = 0; i < pk.rows; i++) pk.target += (u128)inst.b[i] << pk.shift[i];
    return pk;
  }

  u128 key_of(const MarketSplitInstance& inst, uint64_t mask, int base) const {
    u128 k = 0;
    for (int i = 0; i < rows; i++) {
      u128 s = 0;
      uint64_t mm = mask;
      while (mm) {
        int j = __builtin_ctzll(mm);
        mm &= mm - 1;
        s += (u128)inst.A[i][base + j];
      }
      k += s << shift[i];
    }
    return k;
  }
};

struct Entry {
  u128 key;
  uint64_t mask;
  bool operator<(const Entry& o) const { return key < o.key || (key == o.key && mask < o.mask); }
};

std::vector<Entry> quarter_list(const MarketSplitInstance& inst, const PackedKeys& pk, int base,
                                int len) {
  std::vector<Entry> out;
  out.reserve(1ull << len);
  for (uint64_t mask = 0; mask < (1ull << len); mask++)
    out.push_back({pk.key_of(inst, mask, base), mask});
  std::sort(out.begin(), out.end());
  return out;
}

// lazily merged pair sums over two sorted quarter lists
struct PairStream {
  const std::vector<Entry>*a, *b;
  bool ascending;
  struct Item {
    u128 sum;
    std::size_t ai, bi;
  };
  std::vector<Item> heap;

  PairStream(const std::vector<Entry>* a_, const std::vector<Entry>* b_, bool asc)
      : a(a_), b(b_), ascending(asc) {
    for (std::size_t i = 0; i < a->size(); i++) push_item(i, asc ? 0 : b->size() - 1);
  }
  bool before(const Item& x, const Item& y) const {
    return ascending ? x.sum > y.sum : x.sum < y.sum;  // heap comparator
  }
  void push_item(std::size_t ai, std::size_t bi) {
    if (b->empty()) return;
    heap.push_back({(*a)[ai].key + (*b)[bi].key, ai, bi});
    std::push_heap(heap.begin(), heap.end(),
                   [this](const Item& x, const Item& y) { return before(x, y); });
  }
  bool empty() const { return heap.empty(); }
  u128 top_sum() const { return heap.front().sum; }
  Item pop() {
    std::pop_heap(heap.begin(), heap.end(),
                  [this](const Item& x, const Item& y) { return before(x, y); });
    Item it = heap.back();
    heap.pop_back();
    if (ascending) {
      if (it.bi + 1 < b->size()) push_item(it.ai, it.bi + 1);
    } else {
      if (it.bi > 0) push_item(it.ai, it.bi - 1);
    }
    return it;
  }
};

}  // namespace

std::vector<std::vector<uint8_t>> meet_in_middle(const MarketSplitInstance& inst, EnumMode mode) {
  inst.validate();
  if (inst.n > 60) throw std::invalid_argument("meet_in_middle: instance exceeds 60 columns");
  std::vector<std::vector<uint8_t>> solutions;

  for (int i = 0; i < inst.m; i++) {
    __int128 total = 0;
    for (long long v : inst.A[i]) total += v;
    if (inst.b[i] < 0 || (__int128)inst.b[i] > total) return solutions;
  }
  auto pk = PackedKeys::build(inst);
  if (!pk) throw std::invalid_argument("meet_in_middle: coefficients too large to pack");

  const int n = inst.n;
  const int half = n / 2;
  const int q1 = half / 2;
  const int q3 = half + (n - half) / 2;
  const int len0 = q1, len1 = half - q1, len2 = q3 - half, len3 = n - q3;

  auto l0 = quarter_list(inst, *pk, 0, len0);
  auto l1 = quarter_list(inst, *pk, q1, len1);
  auto l2 = quarter_list(inst, *pk, half, len2);
  auto l3 = quarter_list(inst, *pk, q3, len3);

  auto verify_and_emit = [&](uint64_t m0, uint64_t m1, uint64_t m2, uint64_t m3) -> bool {
    std::vector<uint8_t> x(n, 0);
    for (int j = 0; j < len0; j++) x[j] = (m0 >> j) & 1;
    for (int j = 0; j < len1; j++) x[q1 + j] = (m1 >> j) & 1;
    for (int j = 0; j < len2; j++) x[half + j] = (m2 >> j) & 1;
    for (int j = 0; j < len3; j++) x[q3 + j] = (m3 >> j) & 1;
    for (int i = 0; i < inst.m; i++)
      if (row_slack(inst.A[i], x, inst.b[i]) != 0) return false;
    solutions.push_back(std::move(x));
    return true;
  };

  PairStream low(&l0, &l1, true);    // sums ascending
  PairStream high(&l2, &l3, false);  // sums descending

  while (!low.empty() && !high.empty()) {
    const u128 s_low = low.top_sum();
    const u128 s_high = high.top_sum();
    if (s_low + s_high < pk->target) {
      low.pop();
      continue;
    }
    if (s_low + s_high > pk->target) {
      high.pop();
      continue;
    }
    // gather the full run on both sides, then cross-match
    std::vector<PairStream::Item> run_low, run_high;
    while (!low.empty() && low.top_sum() == s_low) run_low.push_back(low.pop());
    while (!high.empty() && high.top_sum() == s_high) run_high.push_back(high.pop());
    for (const auto& il : run_low)
      for (const auto& ih : run_high) {
        bool hit = verify_and_emit(l0[il.ai].mask, l1[il.bi].mask, l2[ih.ai].mask,
                                   l3[ih.bi].mask);
        if (hit && mode == EnumMode::First) return solutions;
      }
  }
  return solutions;
}

std::string write_market_split(const MarketSplitInstance& inst) {
  inst.validate();
  std::ostringstream out;
  if (inst.seed) out << "# seed " << *inst.seed << "\n";
  if (inst.range) out << "# range " << *inst.range << "\n";
  if (inst.planted_digest) out << "# planted " << *inst.planted_digest << "\n";
  if (inst.regenerations > 0) out << "# regenerations " << inst.regenerations << "\n";
  out << inst.m << " " << inst.n << "\n";
  for (const auto& row : inst.A) {
    for (int j = 0; j < inst.n; j++) out << (j ? " " : "") << row[j];
    out << "\n";
  }
  for (int i = 0; i < inst.m; i++) out << (i ? " " : "") << inst.b[i];
  out << "\n";
  return out.str();
}

MarketSplitInstance parse_market_split(const std::string& text) {
  MarketSplitInstance inst;
  std::istringstream in(text);
  std::string line;
  std::vector<long long> numbers;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      std::istringstream ls(line);
      std::string hash, key;
      ls >> hash >> key;
      if (key == "seed") {
        unsigned long long v;
        if (ls >> v) inst.seed = v;
      } else if (key == "range") {
        long long v;
        if (ls >> v) inst.range = v;
      } else if (key == "planted") {
        std::string v;
        if (ls >> v) inst.planted_digest = v;
      } else if (key == "regenerations") {
        int v;
        if (ls >> v) inst.regenerations = v;
      }
      continue;
    }
    std::istringstream ls(line);
    long long v;
    while (ls >> v) numbers.push_back(v);
    if (!ls.eof()) throw std::invalid_argument("parse_market_split: non-numeric data");
  }
  if (numbers.size() < 2) throw std::invalid_argument("parse_market_split: missing header");
  inst.m = (int)numbers[0];
  inst.n = (int)numbers[1];
  if (inst.m < 1 || inst.n < 1) throw std::invalid_argument("parse_market_split: bad dimensions");
  const std::size_t want = 2 + (std::size_t)inst.m * inst.n + inst.m;
  if (numbers.size() != want)
    throw std::invalid_argument("parse_market_split: wrong number of values");
  std::size_t pos = 2;
  inst.A.assign(inst.m, std::vector<long long>(inst.n));
  for (int i = 0; i < inst.m; i++)
    for (int j = 0; j < inst.n; j++) inst.A[i][j] = numbers[pos++];
  inst.b.assign(inst.m, 0);
  for (int i = 0; i < inst.m; i++) inst.b[i] = numbers[pos++];
  inst.validate();
  return inst;
}

}  // namespace optbench
