#include "optbench/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
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
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double unit() { return (double)(next() >> 11) * 0x1.0p-53; }
    double gauss() {
        double u = 0;
        while (u <= 0) u = unit();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * unit());
    }
    // Student-t with 5 degrees of freedom, clamped against extreme tails
    double student5() {
        double chi = 0;
        for (int i = 0; i < 5; ++i) {
            double g = gauss();
            chi += g * g;
        }
        double t = gauss() / std::sqrt(std::max(chi / 5.0, 1e-6));
        return std::clamp(t, -6.0, 6.0);
    }
};

__int128 addc(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("portfolio: value overflow");
    return r;
}

__int128 mulc(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("portfolio: value overflow");
    return r;
}

long long pow10ll(int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

__int128 pow10_128(int e) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string i128_str(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
    std::string s;
    while (u > 0) {
        s.push_back((char)('0' + (int)(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

// cyclic Jacobi sweeps; adequate for the covariance sizes we ship
double min_eigen_sym(std::vector<std::vector<double>> a) {
    const int n = (int)a.size();
    if (n == 1) return a[0][0];
    double frob = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) frob += a[i][j] * a[i][j];
    const double stop = 1e-22 * (frob + 1.0);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off <= stop) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[p][q];
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int r = 0; r < n; ++r) {
                    double arp = a[r][p], arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for (int r = 0; r < n; ++r) {
                    double apr = a[p][r], aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
            }
        }
    }
    double mn = a[0][0];
    for (int i = 1; i < n; ++i) mn = std::min(mn, a[i][i]);
    return mn;
}

void check_solution_dims(const PortfolioInstance& inst, const PortfolioSolution& sol) {
    const size_t m = (size_t)inst.m, N = (size_t)inst.slots(), bits = (size_t)inst.cash_bits();
    if (sol.x.size() != m || sol.y.size() != m)
        throw std::invalid_argument("portfolio: solution period count mismatch");
    for (size_t t = 0; t < m; ++t) {
        if (sol.x[t].size() != N) throw std::invalid_argument("portfolio: solution slot count mismatch");
        if (sol.y[t].size() != bits) throw std::invalid_argument("portfolio: solution cash bit count mismatch");
        for (uint8_t b : sol.x[t])
            if (b > 1) throw std::invalid_argument("portfolio: solution entries must be 0 or 1");
        for (uint8_t b : sol.y[t])
            if (b > 1) throw std::invalid_argument("portfolio: solution entries must be 0 or 1");
    }
}

}  // namespace

int PortfolioInstance::cash_bits() const {
    int b = 1;
    while ((cash_units >> b) > 0) ++b;
    return b;
}

void PortfolioInstance::validate() const {
    if (n_assets < 1) throw std::invalid_argument("PortfolioInstance: need at least one asset");
    if (m < 1) throw std::invalid_argument("PortfolioInstance: need at least one period");
    if (k < 1) throw std::invalid_argument("PortfolioInstance: need at least one copy per direction");
    if (position_limit < 0) throw std::invalid_argument("PortfolioInstance: negative position limit");
    if (cash_units < 1 || cash_units > 1000000000000ll)
        throw std::invalid_argument("PortfolioInstance: cash units out of range");
    if (unit_value < 0 || unit_value > 100000000000000ll)
        throw std::invalid_argument("PortfolioInstance: unit value out of range");
    if (price_scale < 0 || price_scale > 6) throw std::invalid_argument("PortfolioInstance: price scale out of range");
    if (rate_scale < 0 || rate_scale > 9) throw std::invalid_argument("PortfolioInstance: rate scale out of range");
    if (cov_scale < 0 || cov_scale > 9) throw std::invalid_argument("PortfolioInstance: covariance scale out of range");
    for (long long r : {risk_aversion, interest_rate, transaction_rate, short_rate})
        if (r < 0 || r > 1000000000000ll) throw std::invalid_argument("PortfolioInstance: rate out of range");
    const size_t N = (size_t)slots();
    if (sign.size() != N) throw std::invalid_argument("PortfolioInstance: sign list size mismatch");
    for (size_t s = 0; s < N; ++s) {
        int8_t expect = (int)(s % (size_t)(2 * k)) < k ? 1 : -1;
        if (sign[s] != expect)
            throw std::invalid_argument("PortfolioInstance: slot signs must be k longs then k shorts per asset");
    }
    if (shortable.size() != N) throw std::invalid_argument("PortfolioInstance: shortable list size mismatch");
    for (uint8_t f : shortable)
        if (f > 1) throw std::invalid_argument("PortfolioInstance: shortable flags must be 0 or 1");
    if (prices.size() != N) throw std::invalid_argument("PortfolioInstance: price row count mismatch");
    for (const auto& row : prices) {
        if (row.size() != (size_t)m) throw std::invalid_argument("PortfolioInstance: price column count mismatch");
        for (long long p : row)
            if (p < 0 || p > 100000000000000ll)
                throw std::invalid_argument("PortfolioInstance: price out of range");
    }
    if (cov.size() != (size_t)m) throw std::invalid_argument("PortfolioInstance: covariance period count mismatch");
    for (const auto& mat : cov) {
        if (mat.size() != (size_t)n_assets)
            throw std::invalid_argument("PortfolioInstance: covariance row count mismatch");
        for (size_t i = 0; i < mat.size(); ++i) {
            if (mat[i].size() != (size_t)n_assets)
                throw std::invalid_argument("PortfolioInstance: covariance column count mismatch");
            for (size_t j = 0; j < mat[i].size(); ++j) {
                if (mat[i][j] < -1000000000000ll || mat[i][j] > 1000000000000ll)
                    throw std::invalid_argument("PortfolioInstance: covariance entry out of range");
                if (mat[i][j] != mat[j][i])
                    throw std::invalid_argument("PortfolioInstance: covariance matrix not symmetric");
            }
        }
        std::vector<std::vector<double>> dm((size_t)n_assets, std::vector<double>((size_t)n_assets));
        double maxabs = 0;
        for (size_t i = 0; i < dm.size(); ++i)
            for (size_t j = 0; j < dm.size(); ++j) {
                dm[i][j] = (double)mat[i][j];
                maxabs = std::max(maxabs, std::fabs(dm[i][j]));
            }
        // integer rounding of a PSD matrix can push eigenvalues below zero
        // by at most n/2 units; allow that plus numerical slack
        double tol = (double)n_assets + 1e-9 * maxabs + 1e-9;
        if (min_eigen_sym(dm) < -tol)
            throw std::invalid_argument("PortfolioInstance: covariance matrix not positive semidefinite");
    }
}

std::string to_string(const PortfolioValue& v) {
    if (v.den == 1) return i128_str(v.num);
    return i128_str(v.num) + "/" + i128_str(v.den);
}

PortfolioValue evaluate_exact(const PortfolioInstance& inst, const PortfolioSolution& sol,
                              bool full_ranges) {
    inst.validate();
    check_solution_dims(inst, sol);
    const int N = inst.slots(), m = inst.m, bits = inst.cash_bits();
    const int per_asset = 2 * inst.k;
    // every term scaled to the common denominator 10^(rate + 2*price + cov)
    const __int128 mult_return = pow10_128(inst.rate_scale + inst.price_scale + inst.cov_scale);
    const __int128 mult_flat = pow10_128(inst.price_scale + inst.cov_scale);
    __int128 total = 0;
    for (int t = 0; t < m; ++t) {
        const auto& xt = sol.x[t];
        if (inst.risk_aversion != 0) {
            for (int i = 0; i < N; ++i) {
                if (!xt[i]) continue;
                const __int128 wi = (__int128)inst.sign[i] * inst.prices[(size_t)i][(size_t)t];
                if (wi == 0) continue;
                for (int j = 0; j < N; ++j) {
                    if (!xt[j]) continue;
                    long long sij = inst.cov[(size_t)t][(size_t)(i / per_asset)][(size_t)(j / per_asset)];
                    if (sij == 0) continue;
                    __int128 wj = (__int128)inst.sign[j] * inst.prices[(size_t)j][(size_t)t];
                    total = addc(total, mulc(mulc(mulc(wi, wj), (__int128)sij),
                                             (__int128)inst.risk_aversion));
                }
            }
        }
        if (t + 1 < m) {
            const int hi = full_ranges ? N : N - 1;
            for (int i = 0; i < hi; ++i) {
                if (!xt[i]) continue;
                __int128 d = (__int128)inst.prices[(size_t)i][(size_t)(t + 1)] -
                             inst.prices[(size_t)i][(size_t)t];
                if (d == 0) continue;
                total = addc(total, mulc(-(__int128)inst.sign[i] * d, mult_return));
            }
        }
        if (inst.transaction_rate != 0) {
            for (int i = full_ranges ? 0 : 1; i < N; ++i) {
                int prev = t > 0 ? sol.x[(size_t)(t - 1)][(size_t)i] : 0;
                if (prev == xt[i]) continue;
                __int128 c = mulc((__int128)inst.transaction_rate * inst.prices[(size_t)i][(size_t)t],
                                  mult_flat);
                total = addc(total, -c);
            }
        }
        if (inst.interest_rate != 0 && inst.unit_value != 0) {
            long long w = 0;
            for (int c = 0; c < bits; ++c)
                if (sol.y[(size_t)t][(size_t)c]) w += 1ll << c;
            if (w != 0)
                total = addc(total, -mulc(mulc((__int128)inst.interest_rate, (__int128)inst.unit_value * w),
                                          mult_flat));
        }
        if (inst.short_rate != 0) {
            for (int i = 0; i < N; ++i) {
                if (!xt[i] || !inst.shortable[(size_t)i]) continue;
                total = addc(total, mulc((__int128)inst.short_rate * inst.prices[(size_t)i][(size_t)t],
                                         mult_flat));
            }
        }
    }
    if (inst.transaction_rate != 0) {
        // first-period purchase and final liquidation charged once more
        for (int i = 0; i < N; ++i) {
            __int128 v = 0;
            if (sol.x[0][(size_t)i]) v += inst.prices[(size_t)i][0];
            if (sol.x[(size_t)(m - 1)][(size_t)i]) v += inst.prices[(size_t)i][(size_t)(m - 1)];
            if (v != 0) total = addc(total, mulc((__int128)inst.transaction_rate * v, mult_flat));
        }
    }
    __int128 den = pow10_128(inst.rate_scale + 2 * inst.price_scale + inst.cov_scale);
    __int128 g = gcd128(total, den);
    if (g == 0) g = 1;
    return PortfolioValue{total / g, den / g};
}

Verdict evaluate(const PortfolioInstance& inst, const PortfolioSolution& sol, bool full_ranges) {
    PortfolioValue value = evaluate_exact(inst, sol, full_ranges);
    const int N = inst.slots(), bits = inst.cash_bits();
    Verdict verdict;
    for (int t = 0; t < inst.m; ++t) {
        long long net = 0, open = 0;
        for (int s = 0; s < N; ++s) {
            if (!sol.x[(size_t)t][(size_t)s]) continue;
            net += inst.sign[(size_t)s];
            ++open;
        }
        long long cash = 0;
        for (int c = 0; c < bits; ++c)
            if (sol.y[(size_t)t][(size_t)c]) cash += 1ll << c;
        if (net + cash != inst.cash_units) {
            std::ostringstream os;
            os << "period " << (t + 1) << ": net position " << net << " plus cash " << cash
               << " misses the capital " << inst.cash_units;
            verdict.add_violation("cash", os.str(), std::llabs(net + cash - inst.cash_units));
        }
        if (open > inst.position_limit) {
            std::ostringstream os;
            os << "period " << (t + 1) << ": " << open << " open positions exceed the limit "
               << inst.position_limit;
            verdict.add_violation("assets", os.str(), open - inst.position_limit);
        }
    }
    if (verdict.feasible && value.den == 1 && value.num >= INT64_MIN && value.num <= INT64_MAX)
        verdict.objective = (long long)value.num;
    return verdict;
}

long long bqp_scale(const PortfolioInstance& inst) {
    bool risk = false;
    if (inst.risk_aversion != 0)
        for (const auto& mat : inst.cov)
            for (const auto& row : mat)
                for (long long v : row)
                    if (v != 0) risk = true;
    int e = inst.rate_scale + inst.price_scale + (risk ? inst.price_scale + inst.cov_scale : 0);
    if (e > 18) throw std::overflow_error("portfolio: model coefficient scale too large");
    return pow10ll(e);
}

Model build_bqp(const PortfolioInstance& inst, bool full_ranges) {
    inst.validate();
    const int N = inst.slots(), m = inst.m, bits = inst.cash_bits();
    const int per_asset = 2 * inst.k;
    const long long scale = bqp_scale(inst);
    const bool risk = scale > pow10ll(inst.rate_scale + inst.price_scale);
    const __int128 mult_return = scale / pow10ll(inst.price_scale);
    const __int128 mult_flat = scale / pow10ll(inst.rate_scale + inst.price_scale);
    auto xv = [&](int t, int s) { return t * N + s; };
    auto yv = [&](int t, int c) { return m * N + t * bits + c; };

    std::map<Monomial, __int128> acc;
    auto put = [&](Monomial mono, __int128 c) {
        std::sort(mono.begin(), mono.end());
        mono.erase(std::unique(mono.begin(), mono.end()), mono.end());
        auto& slot = acc[mono];
        slot = addc(slot, c);
    };
    for (int t = 0; t < m; ++t) {
        if (risk && inst.risk_aversion != 0) {
            for (int i = 0; i < N; ++i) {
                const __int128 wi = (__int128)inst.sign[i] * inst.prices[(size_t)i][(size_t)t];
                if (wi == 0) continue;
                for (int j = 0; j < N; ++j) {
                    long long sij = inst.cov[(size_t)t][(size_t)(i / per_asset)][(size_t)(j / per_asset)];
                    if (sij == 0) continue;
                    __int128 wj = (__int128)inst.sign[j] * inst.prices[(size_t)j][(size_t)t];
                    if (wj == 0) continue;
                    put({xv(t, i), xv(t, j)},
                        mulc(mulc(mulc(wi, wj), (__int128)sij), (__int128)inst.risk_aversion));
                }
            }
        }
        if (t + 1 < m) {
            const int hi = full_ranges ? N : N - 1;
            for (int i = 0; i < hi; ++i) {
                __int128 d = (__int128)inst.prices[(size_t)i][(size_t)(t + 1)] -
                             inst.prices[(size_t)i][(size_t)t];
                if (d != 0) put({xv(t, i)}, mulc(-(__int128)inst.sign[i] * d, mult_return));
            }
        }
        if (inst.transaction_rate != 0) {
            for (int i = full_ranges ? 0 : 1; i < N; ++i) {
                __int128 c = mulc((__int128)inst.transaction_rate * inst.prices[(size_t)i][(size_t)t],
                                  mult_flat);
                if (c == 0) continue;
                put({xv(t, i)}, -c);
                if (t > 0) {
                    put({xv(t - 1, i)}, -c);
                    put({xv(t - 1, i), xv(t, i)}, 2 * c);
                }
            }
        }
        if (inst.interest_rate != 0 && inst.unit_value != 0) {
            for (int c = 0; c < bits; ++c)
                put({yv(t, c)},
                    -mulc(mulc((__int128)inst.interest_rate, (__int128)inst.unit_value << c), mult_flat));
        }
        if (inst.short_rate != 0) {
            for (int i = 0; i < N; ++i) {
                if (!inst.shortable[(size_t)i]) continue;
                __int128 c = mulc((__int128)inst.short_rate * inst.prices[(size_t)i][(size_t)t], mult_flat);
                if (c != 0) put({xv(t, i)}, c);
            }
        }
    }
    if (inst.transaction_rate != 0) {
        for (int i = 0; i < N; ++i) {
            __int128 c0 = mulc((__int128)inst.transaction_rate * inst.prices[(size_t)i][0], mult_flat);
            __int128 c1 = mulc((__int128)inst.transaction_rate * inst.prices[(size_t)i][(size_t)(m - 1)],
                               mult_flat);
            if (c0 != 0) put({xv(0, i)}, c0);
            if (c1 != 0) put({xv(m - 1, i)}, c1);
        }
    }

    Model model;
    model.sense = Sense::Minimize;
    for (int v = 0; v < m * N + m * bits; ++v) model.add_binary_var();
    for (const auto& [mono, c] : acc) {
        if (c == 0) continue;
        if (c < INT64_MIN || c > INT64_MAX)
            throw std::overflow_error("portfolio: model coefficient overflow");
        model.objective.add_binary(mono, (long long)c);
    }
    for (int t = 0; t < m; ++t) {
        LinearConstraint eq;
        eq.relation = Relation::Eq;
        eq.rhs = inst.cash_units;
        for (int s = 0; s < N; ++s) eq.coeffs[xv(t, s)] = inst.sign[(size_t)s];
        for (int c = 0; c < bits; ++c) eq.coeffs[yv(t, c)] = 1ll << c;
        model.constraints.push_back(std::move(eq));
        LinearConstraint le;
        le.relation = Relation::Le;
        le.rhs = inst.position_limit;
        for (int s = 0; s < N; ++s) le.coeffs[xv(t, s)] = 1;
        model.constraints.push_back(std::move(le));
    }
    model.validate();
    return model;
}

PortfolioInstance generate_portfolio(int n, int m, uint64_t seed, const PortfolioGenConfig& config,
                                     std::vector<std::string>* warnings) {
    if (n < 1) throw std::invalid_argument("generate_portfolio: need at least one asset");
    if (m < 1) throw std::invalid_argument("generate_portfolio: need at least one period");
    if (config.k < 1) throw std::invalid_argument("generate_portfolio: need at least one copy");
    if (config.cash_units < 1) throw std::invalid_argument("generate_portfolio: cash units must be positive");
    if (config.unit_value < 1) throw std::invalid_argument("generate_portfolio: unit value must be positive");
    if (config.window < 1) throw std::invalid_argument("generate_portfolio: window must be positive");
    if (config.volatility < 0) throw std::invalid_argument("generate_portfolio: negative volatility");
    if (config.outlier_rate < 0 || config.outlier_rate > 1)
        throw std::invalid_argument("generate_portfolio: outlier rate must be a probability");

    PortfolioInstance inst;
    inst.n_assets = n;
    inst.m = m;
    inst.k = config.k;
    inst.cash_units = config.cash_units;
    inst.position_limit = config.position_limit > 0 ? config.position_limit : 2 * config.cash_units;
    inst.unit_value = config.unit_value;
    inst.risk_aversion = config.risk_aversion;
    inst.interest_rate = config.interest_rate;
    inst.transaction_rate = config.transaction_rate;
    inst.short_rate = config.short_rate;
    const int N = inst.slots();
    inst.sign.resize((size_t)N);
    inst.shortable.resize((size_t)N);
    for (int s = 0; s < N; ++s) {
        inst.sign[(size_t)s] = (s % (2 * inst.k)) < inst.k ? 1 : -1;
        inst.shortable[(size_t)s] = inst.sign[(size_t)s] < 0 ? 1 : 0;
    }
    inst.prices.assign((size_t)N, std::vector<long long>((size_t)m, inst.unit_value));
    inst.cov.assign((size_t)m,
                    std::vector<std::vector<long long>>((size_t)n, std::vector<long long>((size_t)n, 0)));
    if (config.volatility == 0) {
        inst.validate();
        return inst;
    }

    int window = config.window;
    if (window > m) {
        window = m;
        if (warnings)
            warnings->push_back("estimation window shrunk to the horizon length " + std::to_string(m));
    }
    Rng rng(mix64(seed) ^ mix64((uint64_t)n * 1315423911ull + (uint64_t)m) ^ 0x706f7274666f6cull);

    std::vector<double> drift((size_t)n), beta((size_t)n), idio((size_t)n);
    for (int a = 0; a < n; ++a) {
        drift[(size_t)a] = -0.001 + 0.004 * rng.unit();
        beta[(size_t)a] = 0.3 + 0.9 * rng.unit();
        idio[(size_t)a] = (0.005 + 0.025 * rng.unit()) * config.volatility;
    }
    const double factor_vol = 0.012 * config.volatility;
    const int total = window + m;  // burn-in keeps the rolling window filled
    std::vector<std::vector<double>> ret((size_t)n, std::vector<double>((size_t)total));
    for (int t = 0; t < total; ++t) {
        double f = factor_vol * rng.gauss();
        double f_heavy = rng.student5();
        for (int a = 0; a < n; ++a) {
            double r;
            if (t < window) {
                r = drift[(size_t)a] + beta[(size_t)a] * f + idio[(size_t)a] * rng.gauss();
            } else {
                // redraw from the rolling window statistics with heavy tails
                double mean = 0, var = 0;
                for (int u = t - window; u < t; ++u) mean += ret[(size_t)a][(size_t)u];
                mean /= window;
                for (int u = t - window; u < t; ++u) {
                    double d = ret[(size_t)a][(size_t)u] - mean;
                    var += d * d;
                }
                var /= std::max(window - 1, 1);
                double sd = std::sqrt(std::max(var, 1e-10));
                r = mean + sd * (0.6 * f_heavy + 0.8 * rng.student5());
            }
            if (rng.unit() < config.outlier_rate) r *= 4.0;
            ret[(size_t)a][(size_t)t] = std::clamp(r, -0.5, 0.5);
        }
    }
    for (int a = 0; a < n; ++a) {
        double level = 0;
        std::vector<double> ratio((size_t)m);
        for (int t = 0; t < m; ++t) {
            if (t > 0) level += ret[(size_t)a][(size_t)(window + t - 1)];
            ratio[(size_t)t] = std::clamp(std::exp(level), 1e-3, 1e3);
        }
        for (int j = 0; j < 2 * inst.k; ++j) {
            int slot = a * 2 * inst.k + j;
            for (int t = 0; t < m; ++t)
                inst.prices[(size_t)slot][(size_t)t] =
                    (long long)std::llround((double)inst.unit_value * ratio[(size_t)t]);
        }
    }
    const double cov_mult = (double)pow10ll(inst.cov_scale);
    for (int t = 0; t < m; ++t) {
        const int end = window + t;  // sample stats over returns before period t
        std::vector<double> mean((size_t)n, 0.0);
        for (int a = 0; a < n; ++a) {
            for (int u = end - window; u < end; ++u) mean[(size_t)a] += ret[(size_t)a][(size_t)u];
            mean[(size_t)a] /= window;
        }
        if (window < 2) continue;
        for (int a = 0; a < n; ++a) {
            for (int b = a; b < n; ++b) {
                double s = 0;
                for (int u = end - window; u < end; ++u)
                    s += (ret[(size_t)a][(size_t)u] - mean[(size_t)a]) *
                         (ret[(size_t)b][(size_t)u] - mean[(size_t)b]);
                s /= window - 1;
                long long v = (long long)std::llround(s * cov_mult);
                inst.cov[(size_t)t][(size_t)a][(size_t)b] = v;
                inst.cov[(size_t)t][(size_t)b][(size_t)a] = v;
            }
        }
    }
    inst.validate();
    return inst;
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
        throw std::invalid_argument("portfolio: bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("portfolio: bad integer '" + tok + "'");
    return v;
}

std::vector<long long> ll_row(const std::string& line, size_t count, const char* what) {
    std::istringstream in(line);
    std::vector<long long> row;
    std::string tok;
    while (in >> tok) row.push_back(to_ll(tok));
    if (row.size() != count)
        throw std::invalid_argument(std::string("portfolio: wrong ") + what + " count");
    return row;
}

}  // namespace

std::string write_portfolio(const PortfolioInstance& inst) {
    inst.validate();
    std::ostringstream os;
    os << "PORTFOLIO\n";
    os << "assets " << inst.n_assets << " periods " << inst.m << " copies " << inst.k << "\n";
    os << "limit " << inst.position_limit << " cash " << inst.cash_units << " unit " << inst.unit_value
       << "\n";
    os << "scales price " << inst.price_scale << " rate " << inst.rate_scale << " cov " << inst.cov_scale
       << "\n";
    os << "rates risk " << inst.risk_aversion << " interest " << inst.interest_rate << " transaction "
       << inst.transaction_rate << " short " << inst.short_rate << "\n";
    os << "SHORTABLE\n";
    for (uint8_t f : inst.shortable) os << (f ? '1' : '0');
    os << "\nPRICES\n";
    for (const auto& row : inst.prices) {
        for (size_t t = 0; t < row.size(); ++t) os << (t ? " " : "") << row[(size_t)t];
        os << "\n";
    }
    for (int t = 0; t < inst.m; ++t) {
        os << "COV " << (t + 1) << "\n";
        for (const auto& row : inst.cov[(size_t)t]) {
            for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[(size_t)j];
            os << "\n";
        }
    }
    os << "END\n";
    return os.str();
}

PortfolioInstance parse_portfolio(const std::string& text) {
    std::vector<std::string> lines = content_lines(text);
    size_t pos = 0;
    auto need = [&]() -> const std::string& {
        if (pos >= lines.size()) throw std::invalid_argument("portfolio: truncated instance");
        return lines[pos++];
    };
    if (need() != "PORTFOLIO") throw std::invalid_argument("portfolio: missing header");
    PortfolioInstance inst;
    auto keyed = [&](const std::string& line, const std::vector<std::string>& keys) {
        std::istringstream in(line);
        std::vector<long long> vals;
        for (const std::string& key : keys) {
            std::string word, tok;
            if (!(in >> word >> tok) || word != key)
                throw std::invalid_argument("portfolio: expected '" + key + "' entry");
            vals.push_back(to_ll(tok));
        }
        std::string extra;
        if (in >> extra) throw std::invalid_argument("portfolio: trailing tokens after '" + keys[0] + "'");
        return vals;
    };
    {
        auto v = keyed(need(), {"assets", "periods", "copies"});
        inst.n_assets = (int)v[0];
        inst.m = (int)v[1];
        inst.k = (int)v[2];
    }
    {
        auto v = keyed(need(), {"limit", "cash", "unit"});
        inst.position_limit = v[0];
        inst.cash_units = v[1];
        inst.unit_value = v[2];
    }
    {
        std::istringstream in(need());
        std::string w0, w1, w2, w3, extra;
        long long p, r, c;
        if (!(in >> w0 >> w1 >> p >> w2 >> r >> w3 >> c) || w0 != "scales" || w1 != "price" ||
            w2 != "rate" || w3 != "cov" || (in >> extra))
            throw std::invalid_argument("portfolio: bad scales line");
        inst.price_scale = (int)p;
        inst.rate_scale = (int)r;
        inst.cov_scale = (int)c;
    }
    {
        std::istringstream in(need());
        std::string w0, w1, w2, w3, w4;
        long long a, b, c, d;
        if (!(in >> w0 >> w1 >> a >> w2 >> b >> w3 >> c >> w4 >> d) || w0 != "rates" || w1 != "risk" ||
            w2 != "interest" || w3 != "transaction" || w4 != "short")
            throw std::invalid_argument("portfolio: bad rates line");
        inst.risk_aversion = a;
        inst.interest_rate = b;
        inst.transaction_rate = c;
        inst.short_rate = d;
    }
    if (inst.n_assets < 1 || inst.m < 1 || inst.k < 1)
        throw std::invalid_argument("portfolio: bad dimensions");
    const size_t N = (size_t)inst.slots();
    inst.sign.resize(N);
    for (size_t s = 0; s < N; ++s)
        inst.sign[s] = (int)(s % (size_t)(2 * inst.k)) < inst.k ? 1 : -1;
    if (need() != "SHORTABLE") throw std::invalid_argument("portfolio: missing SHORTABLE section");
    {
        const std::string& row = need();
        if (row.size() != N) throw std::invalid_argument("portfolio: shortable flag count mismatch");
        inst.shortable.resize(N);
        for (size_t s = 0; s < N; ++s) {
            if (row[s] != '0' && row[s] != '1')
                throw std::invalid_argument("portfolio: shortable flags must be 0 or 1");
            inst.shortable[s] = row[s] == '1' ? 1 : 0;
        }
    }
    if (need() != "PRICES") throw std::invalid_argument("portfolio: missing PRICES section");
    inst.prices.resize(N);
    for (size_t s = 0; s < N; ++s) inst.prices[s] = ll_row(need(), (size_t)inst.m, "price");
    inst.cov.resize((size_t)inst.m);
    for (int t = 0; t < inst.m; ++t) {
        std::istringstream in(need());
        std::string word;
        long long idx;
        if (!(in >> word >> idx) || word != "COV" || idx != t + 1)
            throw std::invalid_argument("portfolio: expected COV section " + std::to_string(t + 1));
        inst.cov[(size_t)t].resize((size_t)inst.n_assets);
        for (int a = 0; a < inst.n_assets; ++a)
            inst.cov[(size_t)t][(size_t)a] = ll_row(need(), (size_t)inst.n_assets, "covariance");
    }
    if (need() != "END") throw std::invalid_argument("portfolio: missing END");
    if (pos != lines.size()) throw std::invalid_argument("portfolio: trailing content");
    inst.validate();
    return inst;
}

std::string write_portfolio_solution(const PortfolioSolution& sol) {
    std::ostringstream os;
    os << "PORTFOLIO SOLUTION\nX\n";
    for (const auto& row : sol.x) {
        for (uint8_t b : row) os << (b ? '1' : '0');
        os << "\n";
    }
    os << "Y\n";
    for (const auto& row : sol.y) {
        for (uint8_t b : row) os << (b ? '1' : '0');
        os << "\n";
    }
    os << "END\n";
    return os.str();
}

PortfolioSolution parse_portfolio_solution(const std::string& text, const PortfolioInstance& inst) {
    std::vector<std::string> lines = content_lines(text);
    size_t pos = 0;
    auto need = [&]() -> const std::string& {
        if (pos >= lines.size()) throw std::invalid_argument("portfolio: truncated solution");
        return lines[pos++];
    };
    if (need() != "PORTFOLIO SOLUTION") throw std::invalid_argument("portfolio: missing solution header");
    auto bit_row = [&](size_t count) {
        const std::string& row = need();
        if (row.size() != count) throw std::invalid_argument("portfolio: solution row length mismatch");
        std::vector<uint8_t> bits(count);
        for (size_t i = 0; i < count; ++i) {
            if (row[i] != '0' && row[i] != '1')
                throw std::invalid_argument("portfolio: solution rows must be 0/1 strings");
            bits[i] = row[i] == '1' ? 1 : 0;
        }
        return bits;
    };
    PortfolioSolution sol;
    if (need() != "X") throw std::invalid_argument("portfolio: missing X section");
    for (int t = 0; t < inst.m; ++t) sol.x.push_back(bit_row((size_t)inst.slots()));
    if (need() != "Y") throw std::invalid_argument("portfolio: missing Y section");
    for (int t = 0; t < inst.m; ++t) sol.y.push_back(bit_row((size_t)inst.cash_bits()));
    if (need() != "END") throw std::invalid_argument("portfolio: missing END");
    if (pos != lines.size()) throw std::invalid_argument("portfolio: trailing content");
    return sol;
}

}  // namespace optbench
