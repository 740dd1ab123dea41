#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace optbench {

enum class Sense { Minimize, Maximize, Feasibility };

struct Violation {
  std::string id;      // stable constraint identifier, e.g. "capacity" or "CA3"
  std::string detail;  // human-readable location info
  long long magnitude = 0;
};

// Outcome of a feasibility check. objective is present only for feasible
// results of problems that have an objective at all.
struct Verdict {
  bool feasible = true;
  std::optional<long long> objective;
  std::vector<Violation> violations;

  static Verdict ok() { return Verdict{}; }
  static Verdict ok(long long obj) {
    Verdict v;
    v.objective = obj;
    return v;
  }
  static Verdict fail(std::vector<Violation> viol) {
    Verdict v;
    v.feasible = false;
    v.violations = std::move(viol);
    return v;
  }
  void add_violation(std::string id, std::string detail, long long magnitude = 0) {
    feasible = false;
    objective.reset();
    violations.push_back(Violation{std::move(id), std::move(detail), magnitude});
  }
};

struct RunRecord {
  bool feasible = false;
  std::optional<long long> objective;  // present only if feasible
  double total_s = 0;
  double cpu_s = 0;
  double gpu_s = 0;
  double qpu_s = 0;
  double other_s = 0;
};

// epsilon = eps_num/eps_den; kept rational so the success test is exact.
struct SuccessPolicy {
  long long eps_num = 0;
  long long eps_den = 1;
  Sense sense = Sense::Minimize;
};

struct SuccessCount {
  std::size_t n_feasible = 0;
  std::size_t n_successful = 0;
  std::optional<long long> best;
};

// A feasible run counts as successful when its objective is within
// eps*|best| of the best feasible objective found across all runs
// (<= best + eps*|best| when minimizing, >= best - eps*|best| when
// maximizing). Under Feasibility sense every feasible run is successful.
SuccessCount count_successes(const std::vector<RunRecord>& runs, const SuccessPolicy& policy);

enum class Density { Sparse, Dense };

enum class MatrixKind { MipConstraintMatrix, QuboUpperTriangle };

// Constraint matrices count as dense from nnz >= n*m/4; QUBO upper
// triangles from nnz > n^2/8.
Density density_classify(std::size_t n_vars, std::size_t n_constraints, std::size_t n_nonzeros,
                         MatrixKind kind);

struct ModelStats {
  std::size_t n_vars = 0;
  std::size_t n_constraints = 0;
  std::size_t n_nonzeros = 0;
  long long coeff_min = 0;  // min |coefficient| over stored nonzeros
  long long coeff_max = 0;  // max |coefficient|
  Density density = Density::Sparse;
};

enum class AlgorithmType { Deterministic, Stochastic };

// One benchmark submission record. Runtimes are stored in milliseconds so
// the text form (seconds, at most 3 fractional digits) round-trips exactly.
struct SubmissionReport {
  std::string problem_identifier;
  std::string submitter;
  std::string date;
  std::string reference;
  std::optional<long long> best_objective;
  std::optional<long long> optimality_bound;
  std::string modeling_approach;
  long long n_decision_vars = 0;
  long long n_binary_vars = 0;
  long long n_integer_vars = 0;
  long long n_continuous_vars = 0;
  long long n_nonzero_coeffs = 0;
  std::string coefficients_type;
  std::string coefficients_range;
  std::string workflow;
  AlgorithmType algorithm_type = AlgorithmType::Deterministic;
  long long n_runs = 0;
  long long n_feasible_runs = 0;
  long long n_successful_runs = 0;
  std::string success_threshold;  // non-negative decimal, e.g. "0.01"
  std::string hardware;
  long long total_runtime_ms = 0;
  long long cpu_runtime_ms = 0;
  long long gpu_runtime_ms = 0;
  long long qpu_runtime_ms = 0;
  long long other_runtime_ms = 0;
};

// Line-oriented "Key: value" text, LF endings, fixed key order. Throws
// std::invalid_argument naming the offending field when an invariant is
// broken (counts inconsistent, newline in a text field, bad threshold).
std::string render_report(const SubmissionReport& report);
SubmissionReport parse_report(const std::string& text);

// Seconds with up to 3 fractional digits ("61.22", "0.42", "0"); used for
// the runtime rows and reusable by the CLI.
std::string format_ms(long long ms);
long long parse_ms(const std::string& text);

}  // namespace optbench
