#include "optbench/labs.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace optbench {

void SpinSequence::validate() const {
    if (s.size() < 2) throw std::invalid_argument("SpinSequence: length must be at least 2");
    for (int8_t v : s)
        if (v != 1 && v != -1) throw std::invalid_argument("SpinSequence: entries must be +1 or -1");
}

long long energy(const SpinSequence& seq) {
    seq.validate();
    const int n = seq.n();
    __int128 total = 0;
    for (int j = 1; j < n; ++j) {
        long long c = 0;
        for (int i = 0; i + j < n; ++i) c += seq.s[i] * seq.s[i + j];
        total += static_cast<__int128>(c) * c;
    }
    if (total > std::numeric_limits<long long>::max())
        throw std::overflow_error("energy: value exceeds 64-bit range");
    return static_cast<long long>(total);
}

SpinSequence decode_runlength(const RunLengthCode& code) {
    if (code.empty()) throw std::invalid_argument("decode_runlength: empty code");
    SpinSequence seq;
    int8_t sign = 1;
    for (int run : code) {
        if (run <= 0) throw std::invalid_argument("decode_runlength: run lengths must be positive");
        seq.s.insert(seq.s.end(), static_cast<size_t>(run), sign);
        sign = static_cast<int8_t>(-sign);
    }
    seq.validate();
    return seq;
}

RunLengthCode encode_runlength(const SpinSequence& seq) {
    seq.validate();
    const int8_t flip = seq.s[0];  // normalize so the first run is positive
    RunLengthCode code;
    int run = 0;
    int8_t cur = 1;
    for (int8_t v : seq.s) {
        int8_t w = static_cast<int8_t>(v * flip);
        if (run > 0 && w != cur) {
            code.push_back(run);
            run = 0;
        }
        cur = w;
        ++run;
    }
    code.push_back(run);
    return code;
}

RunLengthCode parse_runlength(const std::string& text) {
    const bool listed = text.find_first_of(" ,\t") != std::string::npos;
    RunLengthCode code;
    if (listed) {
        std::string spaced = text;
        for (char& c : spaced)
            if (c == ',') c = ' ';
        std::istringstream in(spaced);
        std::string tok;
        while (in >> tok) {
            size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("parse_runlength: bad count '" + tok + "'");
            }
            if (used != tok.size() || v <= 0)
                throw std::invalid_argument("parse_runlength: bad count '" + tok + "'");
            code.push_back(v);
        }
    } else {
        for (char c : text) {
            if (c < '1' || c > '9')
                throw std::invalid_argument("parse_runlength: expected digits 1-9, got '" +
                                            std::string(1, c) + "'");
            code.push_back(c - '0');
        }
    }
    if (code.empty()) throw std::invalid_argument("parse_runlength: empty code");
    return code;
}

std::string format_runlength(const RunLengthCode& code) {
    if (code.empty()) throw std::invalid_argument("format_runlength: empty code");
    bool compact = true;
    for (int v : code) {
        if (v <= 0) throw std::invalid_argument("format_runlength: run lengths must be positive");
        if (v > 9) compact = false;
    }
    std::string out;
    for (size_t i = 0; i < code.size(); ++i) {
        if (!compact && i) out += ' ';
        out += std::to_string(code[i]);
    }
    return out;
}

std::optional<long long> known_labs_optimum(int n) {
    static const std::array<long long, 40> table = {
        1,  1,  2,  2,  7,  3,  8,  12, 13, 5,  10, 6,  19, 15, 24, 32, 25, 29,
        26, 26, 39, 47, 36, 36, 45, 37, 50, 62, 59, 67, 64, 64, 65, 73, 82, 86,
        87, 99, 108, 108};
    if (n < 2 || n > 41) return std::nullopt;
    return table[static_cast<size_t>(n - 2)];
}

namespace {

// Correlations for the current sequence, refreshed incrementally on flips.
struct CorrState {
    int n;
    std::vector<int8_t> s;
    std::vector<long long> c;  // c[j] for shifts 1..n-1, index j-1
    long long e = 0;

    explicit CorrState(int n_) : n(n_), s(static_cast<size_t>(n_), 1), c(static_cast<size_t>(n_ - 1), 0) {
        for (int j = 1; j < n; ++j) {
            c[static_cast<size_t>(j - 1)] = n - j;
            e += static_cast<long long>(n - j) * (n - j);
        }
    }

    void flip(int k) {
        for (int j = 1; j < n; ++j) {
            long long touched = 0;
            if (k + j < n) touched += s[static_cast<size_t>(k)] * s[static_cast<size_t>(k + j)];
            if (k - j >= 0) touched += s[static_cast<size_t>(k - j)] * s[static_cast<size_t>(k)];
            if (touched == 0) continue;
            long long& cj = c[static_cast<size_t>(j - 1)];
            e -= cj * cj;
            cj -= 2 * touched;
            e += cj * cj;
        }
        s[static_cast<size_t>(k)] = static_cast<int8_t>(-s[static_cast<size_t>(k)]);
    }
};

}  // namespace

LabsResult labs_exhaustive(int n) {
    if (n < 2 || n > 28) throw std::invalid_argument("labs_exhaustive: n must be in [2, 28]");
    CorrState st(n);
    LabsResult best;
    best.energy = st.e;
    best.sequence.s = st.s;
    best.evaluations = 1;
    const int free_bits = n - 2;  // spins 2..n-1; the first two stay +1
    const unsigned long long states = 1ull << free_bits;
    // Gray-code walk: one spin flip between consecutive states.
    for (unsigned long long k = 1; k < states; ++k) {
        const int bit = __builtin_ctzll(k);
        st.flip(2 + bit);
        ++best.evaluations;
        if (st.e < best.energy ||
            (st.e == best.energy &&
             std::lexicographical_compare(st.s.begin(), st.s.end(), best.sequence.s.begin(),
                                          best.sequence.s.end(),
                                          [](int8_t a, int8_t b) { return a > b; }))) {
            best.energy = st.e;
            best.sequence.s = st.s;
        }
    }
    return best;
}

Hubo labs_hubo(int n) {
    if (n < 2) throw std::invalid_argument("labs_hubo: n must be at least 2");
    // Expand sum_j (sum_i s_i s_{i+j})^2 over spin monomials; squared spins drop out.
    std::map<std::vector<int>, long long> spin_terms;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i + j < n; ++i) {
            for (int k = 0; k + j < n; ++k) {
                std::array<int, 4> idx = {i, i + j, k, k + j};
                std::sort(idx.begin(), idx.end());
                std::vector<int> mono;
                for (size_t t = 0; t < idx.size();) {
                    size_t u = t;
                    while (u < idx.size() && idx[u] == idx[t]) ++u;
                    if ((u - t) % 2) mono.push_back(idx[t]);
                    t = u;
                }
                spin_terms[mono] += 1;
            }
        }
    }
    // Substitute s_v = 1 - 2 x_v and expand each monomial over subsets.
    Hubo h;
    h.n = n;
    for (const auto& [mono, coeff] : spin_terms) {
        const size_t m = mono.size();
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            std::vector<int> sub;
            long long factor = coeff;
            for (size_t t = 0; t < m; ++t) {
                if (mask & (1u << t)) {
                    sub.push_back(mono[t]);
                    factor *= -2;
                }
            }
            h.add(sub, factor);
        }
    }
    return h;
}

std::string write_sequence(const SpinSequence& seq) {
    seq.validate();
    std::string out;
    out.reserve(seq.s.size() + 1);
    for (int8_t v : seq.s) out += (v > 0 ? '+' : '-');
    out += '\n';
    return out;
}

SpinSequence parse_sequence(const std::string& text) {
    SpinSequence seq;
    for (char c : text) {
        if (c == '+')
            seq.s.push_back(1);
        else if (c == '-')
            seq.s.push_back(-1);
        else if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        else
            throw std::invalid_argument("parse_sequence: unexpected character '" +
                                        std::string(1, c) + "'");
    }
    seq.validate();
    return seq;
}

}  // namespace optbench
