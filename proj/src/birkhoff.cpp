#include "optbench/birkhoff.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
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

unsigned long long factorial_u64(int n) {
    if (n < 0 || n > 20) throw std::invalid_argument("factorial: n must be in [0, 20]");
    unsigned long long f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<unsigned long long>(i);
    return f;
}

// Little-endian base-2^32 natural number, enough for exact binomials.
struct BigUint {
    std::vector<uint32_t> limbs;

    static BigUint one() { return BigUint{{1u}}; }

    void trim() {
        while (!limbs.empty() && limbs.back() == 0) limbs.pop_back();
    }

    void mul_small(unsigned long long m) {
        unsigned __int128 carry = 0;
        for (uint32_t& limb : limbs) {
            unsigned __int128 cur = static_cast<unsigned __int128>(limb) * m + carry;
            limb = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        while (carry) {
            limbs.push_back(static_cast<uint32_t>(carry & 0xffffffffu));
            carry >>= 32;
        }
    }

    void div_small(unsigned long long d) {
        unsigned __int128 rem = 0;
        for (size_t i = limbs.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 32) | limbs[i];
            limbs[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        trim();
    }

    bool le_one() const {
        return limbs.empty() || (limbs.size() == 1 && limbs[0] <= 1);
    }

    void dec() {
        for (uint32_t& limb : limbs) {
            if (limb > 0) {
                --limb;
                break;
            }
            limb = 0xffffffffu;
        }
        trim();
    }

    long long bit_length() const {
        if (limbs.empty()) return 0;
        long long bits = static_cast<long long>(limbs.size() - 1) * 32;
        uint32_t top = limbs.back();
        while (top) {
            ++bits;
            top >>= 1;
        }
        return bits;
    }
};

// True iff C(a, k) > limit; partial products are themselves binomials and
// nondecreasing, so the early exit never overflows.
bool binom_gt(long long a, long long k, unsigned long long limit) {
    if (a < k) return false;
    unsigned __int128 r = 1;
    for (long long i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned long long>(a - k + i) / static_cast<unsigned long long>(i);
        if (r > limit) return true;
    }
    return r > limit;
}

unsigned long long binom_u64(long long a, long long k) {
    if (k < 0) throw std::invalid_argument("binomial: negative k");
    if (a < k) return 0;
    unsigned long long r = 1;
    for (long long i = 1; i <= k; ++i) {
        unsigned __int128 num = static_cast<unsigned __int128>(r) *
                                static_cast<unsigned long long>(a - k + i);
        unsigned __int128 q = num / static_cast<unsigned long long>(i);
        if (q > std::numeric_limits<unsigned long long>::max())
            throw std::overflow_error("binomial: value exceeds 64-bit range");
        r = static_cast<unsigned long long>(q);
    }
    return r;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<long long> line_ints(const std::string& line, const char* what) {
    std::istringstream in(line);
    std::vector<long long> out;
    std::string tok;
    while (in >> tok) {
        size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad integer '" + tok + "'");
        }
        if (used != tok.size())
            throw std::invalid_argument(std::string(what) + ": bad integer '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

void ScaledDoublyStochastic::validate() const {
    if (n < 1) throw std::invalid_argument("ScaledDoublyStochastic: size must be positive");
    if (s <= 0) throw std::invalid_argument("ScaledDoublyStochastic: scale must be positive");
    if (static_cast<int>(M.size()) != n)
        throw std::invalid_argument("ScaledDoublyStochastic: row count mismatch");
    std::vector<long long> col_sum(static_cast<size_t>(n), 0);
    for (int r = 0; r < n; ++r) {
        const auto& row = M[static_cast<size_t>(r)];
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("ScaledDoublyStochastic: column count mismatch");
        long long row_sum = 0;
        for (int c = 0; c < n; ++c) {
            if (row[static_cast<size_t>(c)] < 0)
                throw std::invalid_argument("ScaledDoublyStochastic: negative entry");
            row_sum += row[static_cast<size_t>(c)];
            col_sum[static_cast<size_t>(c)] += row[static_cast<size_t>(c)];
        }
        if (row_sum != s)
            throw std::invalid_argument("ScaledDoublyStochastic: row sum differs from scale");
    }
    for (long long cs : col_sum)
        if (cs != s)
            throw std::invalid_argument("ScaledDoublyStochastic: column sum differs from scale");
}

void Permutation::validate() const {
    const int m = n();
    if (m < 1) throw std::invalid_argument("Permutation: empty");
    std::vector<uint8_t> seen(static_cast<size_t>(m), 0);
    for (int v : p) {
        if (v < 1 || v > m) throw std::invalid_argument("Permutation: value out of range");
        if (seen[static_cast<size_t>(v - 1)]) throw std::invalid_argument("Permutation: repeated value");
        seen[static_cast<size_t>(v - 1)] = 1;
    }
}

void Decomposition::validate(int n) const {
    std::set<std::vector<int>> seen;
    for (const auto& item : items) {
        if (item.c < 0) throw std::invalid_argument("Decomposition: negative weight");
        item.perm.validate();
        if (item.perm.n() != n) throw std::invalid_argument("Decomposition: size mismatch");
        if (!seen.insert(item.perm.p).second)
            throw std::invalid_argument("Decomposition: repeated permutation");
    }
}

DecompositionCheck verify_decomposition(const ScaledDoublyStochastic& D,
                                        const Decomposition& dec) {
    D.validate();
    dec.validate(D.n);
    std::vector<std::vector<long long>> sum(static_cast<size_t>(D.n),
                                            std::vector<long long>(static_cast<size_t>(D.n), 0));
    long long weight_sum = 0;
    DecompositionCheck out;
    for (const auto& item : dec.items) {
        if (item.c > 0) ++out.length;
        weight_sum += item.c;
        for (int r = 0; r < D.n; ++r)
            sum[static_cast<size_t>(r)][static_cast<size_t>(item.perm.p[static_cast<size_t>(r)] - 1)] +=
                item.c;
    }
    for (int r = 0; r < D.n; ++r)
        for (int c = 0; c < D.n; ++c) {
            long long diff = D.M[static_cast<size_t>(r)][static_cast<size_t>(c)] -
                             sum[static_cast<size_t>(r)][static_cast<size_t>(c)];
            out.residual = std::max(out.residual, diff < 0 ? -diff : diff);
        }
    out.exact = out.residual == 0 && weight_sum == D.s;
    return out;
}

std::pair<ScaledDoublyStochastic, Decomposition> generate_birkhoff(int n, Density density,
                                                                   uint64_t seed, int digits) {
    if (n < 3 || n > 16) throw std::invalid_argument("generate_birkhoff: n must be in [3, 16]");
    if (digits < 1 || digits > 9)
        throw std::invalid_argument("generate_birkhoff: digits must be in [1, 9]");
    long long s = 1;
    for (int i = 0; i < digits; ++i) s *= 10;

    unsigned long long want =
        density == Density::Dense ? static_cast<unsigned long long>(n) * n
                                  : static_cast<unsigned long long>(n);
    if (n <= 20) want = std::min(want, factorial_u64(n));
    if (static_cast<unsigned long long>(s) < want)
        throw std::invalid_argument("generate_birkhoff: scale too small for permutation count");

    Rng rng(mix64(seed) ^ mix64(static_cast<uint64_t>(n) * 1000003ull +
                                static_cast<uint64_t>(digits) * 31ull +
                                (density == Density::Dense ? 1ull : 0ull)));

    std::set<std::vector<int>> distinct;
    while (distinct.size() < want) {
        std::vector<int> p(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i + 1;
        for (int i = n - 1; i > 0; --i)
            std::swap(p[static_cast<size_t>(i)],
                      p[static_cast<size_t>(rng.below(static_cast<uint64_t>(i) + 1))]);
        distinct.insert(p);
    }

    // Positive weights summing to s via distinct cut points in [1, s-1].
    std::set<long long> cuts;
    while (cuts.size() + 1 < want)
        cuts.insert(1 + static_cast<long long>(rng.below(static_cast<uint64_t>(s - 1))));
    std::vector<long long> weights;
    long long prev = 0;
    for (long long cut : cuts) {
        weights.push_back(cut - prev);
        prev = cut;
    }
    weights.push_back(s - prev);

    Decomposition dec;
    size_t wi = 0;
    for (const auto& p : distinct) dec.items.push_back({weights[wi++], Permutation{p}});

    ScaledDoublyStochastic D;
    D.n = n;
    D.s = s;
    D.M.assign(static_cast<size_t>(n), std::vector<long long>(static_cast<size_t>(n), 0));
    for (const auto& item : dec.items)
        for (int r = 0; r < n; ++r)
            D.M[static_cast<size_t>(r)][static_cast<size_t>(item.perm.p[static_cast<size_t>(r)] - 1)] +=
                item.c;
    D.validate();
    return {std::move(D), std::move(dec)};
}

namespace {

// Augmenting-path step for row r over columns with positive residual.
bool kuhn_augment(const std::vector<std::vector<long long>>& R, int r,
                  std::vector<int>& col_of_row, std::vector<int>& row_of_col,
                  std::vector<uint8_t>& visited) {
    const int n = static_cast<int>(R.size());
    for (int c = 0; c < n; ++c) {
        if (R[static_cast<size_t>(r)][static_cast<size_t>(c)] <= 0) continue;
        if (visited[static_cast<size_t>(c)]) continue;
        visited[static_cast<size_t>(c)] = 1;
        if (row_of_col[static_cast<size_t>(c)] < 0 ||
            kuhn_augment(R, row_of_col[static_cast<size_t>(c)], col_of_row, row_of_col, visited)) {
            col_of_row[static_cast<size_t>(r)] = c;
            row_of_col[static_cast<size_t>(c)] = r;
            return true;
        }
    }
    return false;
}

}  // namespace

Decomposition greedy_decompose(const ScaledDoublyStochastic& D) {
    D.validate();
    const int n = D.n;
    std::vector<std::vector<long long>> R = D.M;
    long long remaining = D.s;
    Decomposition dec;
    while (remaining > 0) {
        std::vector<int> col_of_row(static_cast<size_t>(n), -1);
        std::vector<int> row_of_col(static_cast<size_t>(n), -1);
        for (int r = 0; r < n; ++r) {
            std::vector<uint8_t> visited(static_cast<size_t>(n), 0);
            if (!kuhn_augment(R, r, col_of_row, row_of_col, visited))
                throw std::runtime_error("greedy_decompose: no perfect matching on positive support");
        }
        long long w = std::numeric_limits<long long>::max();
        for (int r = 0; r < n; ++r)
            w = std::min(w, R[static_cast<size_t>(r)][static_cast<size_t>(col_of_row[static_cast<size_t>(r)])]);
        Permutation perm;
        perm.p.resize(static_cast<size_t>(n));
        for (int r = 0; r < n; ++r) {
            perm.p[static_cast<size_t>(r)] = col_of_row[static_cast<size_t>(r)] + 1;
            R[static_cast<size_t>(r)][static_cast<size_t>(col_of_row[static_cast<size_t>(r)])] -= w;
        }
        dec.items.push_back({w, std::move(perm)});
        remaining -= w;
    }
    return dec;
}

unsigned long long lehmer_encode(const Permutation& perm) {
    perm.validate();
    const int n = perm.n();
    if (n > 20) throw std::invalid_argument("lehmer_encode: n must be at most 20");
    unsigned long long code = 0;
    unsigned long long fact = 1;
    for (int i = 0; i < n; ++i) {
        int smaller_before = 0;
        for (int j = 0; j < i; ++j)
            if (perm.p[static_cast<size_t>(j)] < perm.p[static_cast<size_t>(i)]) ++smaller_before;
        code += fact * static_cast<unsigned long long>(smaller_before);
        fact *= static_cast<unsigned long long>(i + 1);
    }
    return code;
}

Permutation lehmer_decode(unsigned long long index, int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("lehmer_decode: n must be in [1, 20]");
    if (index >= factorial_u64(n)) throw std::out_of_range("lehmer_decode: index out of range");
    std::vector<int> l(static_cast<size_t>(n), 0);
    unsigned long long fact = 1;
    for (int i = 0; i < n; ++i) {
        l[static_cast<size_t>(i)] = static_cast<int>((index / fact) % static_cast<unsigned long long>(i + 1));
        fact *= static_cast<unsigned long long>(i + 1);
    }
    std::vector<int> pool(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i + 1;
    Permutation perm;
    perm.p.resize(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        perm.p[static_cast<size_t>(i)] = pool[static_cast<size_t>(l[static_cast<size_t>(i)])];
        pool.erase(pool.begin() + l[static_cast<size_t>(i)]);
    }
    return perm;
}

std::string to_bitstring(unsigned long long index, int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("to_bitstring: n must be in [1, 20]");
    const unsigned long long nf = factorial_u64(n);
    if (index >= nf) throw std::out_of_range("to_bitstring: index out of range");
    long long width = qubit_count(n, 1);
    std::string bits(static_cast<size_t>(width), '0');
    for (long long b = 0; b < width; ++b)
        if (index & (1ull << b)) bits[static_cast<size_t>(width - 1 - b)] = '1';
    return bits;
}

unsigned long long from_bitstring(const std::string& bits, int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("from_bitstring: n must be in [1, 20]");
    const long long width = qubit_count(n, 1);
    if (static_cast<long long>(bits.size()) != width)
        throw std::invalid_argument("from_bitstring: wrong width");
    unsigned long long index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("from_bitstring: bad character");
        index = (index << 1) | static_cast<unsigned long long>(c - '0');
    }
    if (index >= factorial_u64(n)) throw std::out_of_range("from_bitstring: no such permutation");
    return index;
}

unsigned long long cns_encode(const std::vector<long long>& indices) {
    if (indices.empty()) throw std::invalid_argument("cns_encode: empty input");
    std::vector<long long> a = indices;
    std::sort(a.begin(), a.end());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) throw std::invalid_argument("cns_encode: negative index");
        if (i > 0 && a[i] == a[i - 1]) throw std::invalid_argument("cns_encode: repeated index");
    }
    unsigned long long code = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        unsigned long long term = binom_u64(a[i], static_cast<long long>(i) + 1);
        if (code > std::numeric_limits<unsigned long long>::max() - term)
            throw std::overflow_error("cns_encode: code exceeds 64-bit range");
        code += term;
    }
    return code;
}

std::vector<long long> cns_decode(unsigned long long code, int k) {
    if (k < 1) throw std::invalid_argument("cns_decode: k must be positive");
    std::vector<long long> out(static_cast<size_t>(k), 0);
    for (int i = k; i >= 1; --i) {
        // Largest x with C(x, i) <= remaining code.
        long long x;
        if (i == 1) {
            if (code > static_cast<unsigned long long>(std::numeric_limits<long long>::max()))
                throw std::overflow_error("cns_decode: code exceeds index range");
            x = static_cast<long long>(code);
        } else {
            long long lo = i - 1;  // C(i-1, i) = 0 <= code
            long long hi = i;
            while (!binom_gt(hi, i, code)) {
                lo = hi;
                hi *= 2;
            }
            while (lo + 1 < hi) {
                long long mid = lo + (hi - lo) / 2;
                if (binom_gt(mid, i, code))
                    hi = mid;
                else
                    lo = mid;
            }
            x = lo;
        }
        out[static_cast<size_t>(i - 1)] = x;
        code -= binom_u64(x, i);
    }
    if (code != 0) throw std::logic_error("cns_decode: nonzero remainder");
    for (int i = 1; i < k; ++i)
        if (out[static_cast<size_t>(i)] <= out[static_cast<size_t>(i - 1)])
            throw std::logic_error("cns_decode: indices not increasing");
    return out;
}

long long qubit_count(int n, unsigned long long k) {
    const unsigned long long nf = factorial_u64(n);
    if (k > nf) throw std::invalid_argument("qubit_count: k exceeds the permutation count");
    BigUint b = BigUint::one();
    for (unsigned long long i = 1; i <= k; ++i) {
        b.mul_small(nf - k + i);
        b.div_small(i);
    }
    if (b.le_one()) return 0;
    b.dec();
    return b.bit_length();
}

std::string write_birkhoff(const ScaledDoublyStochastic& D) {
    D.validate();
    std::ostringstream out;
    out << D.n << ' ' << D.s << '\n';
    for (int r = 0; r < D.n; ++r) {
        for (int c = 0; c < D.n; ++c) {
            if (c) out << ' ';
            out << D.M[static_cast<size_t>(r)][static_cast<size_t>(c)];
        }
        out << '\n';
    }
    return out.str();
}

ScaledDoublyStochastic parse_birkhoff(const std::string& text) {
    std::vector<std::vector<long long>> rows;
    for (const std::string& line : split_lines(text)) {
        if (blank_or_comment(line)) continue;
        rows.push_back(line_ints(line, "parse_birkhoff"));
    }
    if (rows.empty()) throw std::invalid_argument("parse_birkhoff: empty input");
    if (rows[0].size() != 2) throw std::invalid_argument("parse_birkhoff: header must be 'n s'");
    ScaledDoublyStochastic D;
    D.n = static_cast<int>(rows[0][0]);
    D.s = rows[0][1];
    if (static_cast<int>(rows.size()) != D.n + 1)
        throw std::invalid_argument("parse_birkhoff: wrong row count");
    for (size_t r = 1; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != D.n)
            throw std::invalid_argument("parse_birkhoff: wrong column count");
        D.M.push_back(rows[r]);
    }
    D.validate();
    return D;
}

std::string write_decomposition(const Decomposition& dec) {
    std::ostringstream out;
    for (const auto& item : dec.items) {
        out << item.c;
        for (int v : item.perm.p) out << ' ' << v;
        out << '\n';
    }
    return out.str();
}

Decomposition parse_decomposition(const std::string& text) {
    Decomposition dec;
    int n = -1;
    for (const std::string& line : split_lines(text)) {
        if (blank_or_comment(line)) continue;
        std::vector<long long> vals = line_ints(line, "parse_decomposition");
        if (vals.size() < 2)
            throw std::invalid_argument("parse_decomposition: line needs a weight and a permutation");
        if (n < 0)
            n = static_cast<int>(vals.size()) - 1;
        else if (static_cast<int>(vals.size()) - 1 != n)
            throw std::invalid_argument("parse_decomposition: inconsistent permutation length");
        DecompositionItem item;
        item.c = vals[0];
        for (size_t i = 1; i < vals.size(); ++i)
            item.perm.p.push_back(static_cast<int>(vals[i]));
        item.perm.validate();
        dec.items.push_back(std::move(item));
    }
    if (dec.items.empty()) throw std::invalid_argument("parse_decomposition: empty input");
    dec.validate(n);
    return dec;
}

}  // namespace optbench
