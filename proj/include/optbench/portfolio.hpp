#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optbench/core.hpp"
#include "optbench/model.hpp"

namespace optbench {

// Multiperiod binary portfolio selection. The n assets are expanded into
// 2*k*n slots per period: for each asset, k long copies followed by k short
// copies, so a slot either adds or removes one cash unit of exposure. Money
// amounts (prices, the cash unit value) are integers scaled by
// 10^price_scale, rates by 10^rate_scale and covariances by 10^cov_scale,
// so every objective term is an exact rational.
struct PortfolioInstance {
    int n_assets = 0;
    int m = 0;  // periods
    int k = 1;  // copies of each asset per direction
    long long position_limit = 0;  // most simultaneous open slots per period
    long long cash_units = 10;     // capital limit in cash units
    long long unit_value = 0;      // value of one cash unit, at price scale
    int price_scale = 2;
    int rate_scale = 6;
    int cov_scale = 6;
    // rates at rate scale
    long long risk_aversion = 0;
    long long interest_rate = 0;
    long long transaction_rate = 0;
    long long short_rate = 0;
    std::vector<int8_t> sign;        // per slot: +1 long, -1 short
    std::vector<uint8_t> shortable;  // per slot: 1 = pays the short loan rate
    // prices[slot][t], at price scale, non-negative
    std::vector<std::vector<long long>> prices;
    // cov[t][asset][asset], symmetric PSD within rounding of the scale
    std::vector<std::vector<std::vector<long long>>> cov;

    int slots() const { return 2 * k * n_assets; }
    // bits of the cash encoding: weight 2^c for c in [0, floor(log2(C))]
    int cash_bits() const;
    void validate() const;
};

// x[t][slot] holdings per period, y[t][c] cash bits with weight 2^c
struct PortfolioSolution {
    std::vector<std::vector<uint8_t>> x;
    std::vector<std::vector<uint8_t>> y;
};

// exact objective value as a reduced fraction num/den, den > 0
struct PortfolioValue {
    __int128 num = 0;
    __int128 den = 1;
};

std::string to_string(const PortfolioValue& v);

// Exact objective. Per period: risk-aversion-weighted covariance of the
// signed invested amounts, minus price returns, minus the transaction cost
// of every holdings change (pre-horizon holdings are zero), minus interest
// on encoded cash, plus the loan rate on shortable holdings; after the sum,
// the first-period purchase and terminal liquidation costs are added once
// more. Two index truncations are kept from the source formulation by
// default: the last slot earns no return and the first slot pays no
// per-period transaction cost. full_ranges = true lifts both truncations.
// The return term always stops at the second-to-last period because it
// references the next price. Throws std::invalid_argument on dimension
// mismatch and std::overflow_error when a term leaves 128-bit range.
PortfolioValue evaluate_exact(const PortfolioInstance& inst, const PortfolioSolution& sol,
                              bool full_ranges = false);

// Feasibility of the capital equality (signed positions plus encoded cash
// equal C, violation id "cash") and the position bound (open slots per
// period at most the limit, id "assets"), itemized per period. objective is
// the exact value in whole currency units when the fraction reduces to an
// integer that fits, and absent otherwise.
Verdict evaluate(const PortfolioInstance& inst, const PortfolioSolution& sol,
                 bool full_ranges = false);

// Denominator used to turn objective terms into integer model coefficients:
// 10^(rate+2*price+cov scales) when the risk term can be active, else
// 10^(rate+price).
long long bqp_scale(const PortfolioInstance& inst);

// Binary quadratic model over x vars (id = t*slots + s) followed by y vars
// (id = m*slots + t*cash_bits + c). Objective coefficients are scaled by
// bqp_scale(inst); constraints are the capital equalities and position
// bounds. energy/eval of the model agrees with evaluate_exact on every
// assignment.
Model build_bqp(const PortfolioInstance& inst, bool full_ranges = false);

struct PortfolioGenConfig {
    long long cash_units = 10;
    long long unit_value = 10000000;  // $100k at the default price scale
    int k = 3;
    long long position_limit = 0;  // 0 = pick 2*cash_units
    // rates at scale 6
    long long risk_aversion = 0;
    long long interest_rate = 100;    // 0.01%
    long long transaction_rate = 1000;  // 0.1%
    long long short_rate = 25;        // 0.0025%
    int window = 30;        // rolling estimation window in steps
    double volatility = 1.0;  // 0 freezes prices at the unit value
    double outlier_rate = 0.01;
};

// Synthetic price paths: a drifting factor-model log walk, re-sampled each
// step from a Student-t (5 degrees of freedom) scaled to the rolling mean
// and covariance of the recent window, with sporadic outliers. Covariances
// are the rolling sample covariances of the relative returns. When m is
// smaller than the window, the window shrinks to m and a warning is
// recorded.
PortfolioInstance generate_portfolio(int n, int m, uint64_t seed,
                                     const PortfolioGenConfig& config = {},
                                     std::vector<std::string>* warnings = nullptr);

std::string write_portfolio(const PortfolioInstance& inst);
PortfolioInstance parse_portfolio(const std::string& text);
std::string write_portfolio_solution(const PortfolioSolution& sol);
PortfolioSolution parse_portfolio_solution(const std::string& text, const PortfolioInstance& inst);

}  // namespace optbench
