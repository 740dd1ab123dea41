#include "optbench/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace optbench {

SuccessCount count_successes(const std::vector<RunRecord>& runs, const SuccessPolicy& policy) {
  if (policy.eps_num < 0 || policy.eps_den <= 0)
    throw std::invalid_argument("SuccessPolicy: epsilon must be >= 0");
  SuccessCount out;
  for (const auto& r : runs) {
    if (!r.feasible && r.objective)
      throw std::invalid_argument("RunRecord: objective on infeasible run");
    if (r.feasible) out.n_feasible++;
  }
  if (policy.sense == Sense::Feasibility) {
    out.n_successful = out.n_feasible;
    return out;
  }
  bool have = false;
  long long best = 0;
  for (const auto& r : runs) {
    if (!r.feasible) continue;
    if (!r.objective)
      throw std::invalid_argument("RunRecord: feasible optimization run without objective");
    long long f = *r.objective;
    if (!have) {
      best = f;
      have = true;
    } else if (policy.sense == Sense::Minimize ? f < best : f > best) {
      best = f;
    }
  }
  if (!have) return out;
  out.best = best;
  const __int128 num = policy.eps_num;
  const __int128 den = policy.eps_den;
  const __int128 absbest = best < 0 ? -(__int128)best : (__int128)best;
  for (const auto& r : runs) {
    if (!r.feasible) continue;
    const __int128 gap = (__int128)*r.objective - best;
    if (policy.sense == Sense::Minimize) {
      if (gap * den <= num * absbest) out.n_successful++;
    } else {
      if (-gap * den <= num * absbest) out.n_successful++;
    }
  }
  return out;
}

Density density_classify(std::size_t n_vars, std::size_t n_constraints, std::size_t n_nonzeros,
                         MatrixKind kind) {
  if (n_vars == 0) throw std::invalid_argument("density_classify: zero variables");
  if (n_nonzeros == 0) return Density::Sparse;
  using u128 = unsigned __int128;
  if (kind == MatrixKind::MipConstraintMatrix) {
    // dense iff nnz >= n*m/4
    return (u128)n_nonzeros * 4 >= (u128)n_vars * n_constraints ? Density::Dense : Density::Sparse;
  }
  // dense iff nnz > n^2/8
  return (u128)n_nonzeros * 8 > (u128)n_vars * n_vars ? Density::Dense : Density::Sparse;
}

std::string format_ms(long long ms) {
  if (ms < 0) throw std::invalid_argument("format_ms: negative time");
  std::string out = std::to_string(ms / 1000);
  long long frac = ms % 1000;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, ".%03lld", frac);
    std::string f = buf;
    while (f.back() == '0') f.pop_back();
    out += f;
  }
  return out;
}

long long parse_ms(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_ms: empty");
  std::size_t i = 0;
  long long sec = 0;
  if (i >= text.size() || !std::isdigit((unsigned char)text[i]))
    throw std::invalid_argument("parse_ms: expected digits in '" + text + "'");
  for (; i < text.size() && std::isdigit((unsigned char)text[i]); i++) {
    sec = sec * 10 + (text[i] - '0');
    if (sec > (long long)9e14) throw std::invalid_argument("parse_ms: overflow");
  }
  long long frac = 0;
  if (i < text.size()) {
    if (text[i] != '.') throw std::invalid_argument("parse_ms: bad char in '" + text + "'");
    i++;
    std::size_t digits = 0;
    int scale[4] = {0, 100, 10, 1};
    for (; i < text.size(); i++, digits++) {
      if (!std::isdigit((unsigned char)text[i]) || digits >= 3)
        throw std::invalid_argument("parse_ms: at most 3 fractional digits in '" + text + "'");
      frac += (text[i] - '0') * scale[digits + 1];
    }
    if (digits == 0) throw std::invalid_argument("parse_ms: trailing dot in '" + text + "'");
  }
  return sec * 1000 + frac;
}

namespace {

const char* kReportKeys[] = {
    "Problem Identifier", "Submitter",        "Date",
    "Reference",          "Best Objective Value", "Optimality Bound",
    "Modeling Approach",  "#Decision Variables",  "#Binary Variables",
    "#Integer Variables", "#Continuous Variables", "#Non-Zero Coefficients",
    "Coefficients Type",  "Coefficients Range",   "Workflow",
    "Algorithm Type",     "#Runs",                "#Feasible Runs",
    "#Successful Runs",   "Success Threshold",    "Hardware Specifications",
    "Total Runtime",      "CPU Runtime",          "GPU Runtime",
    "QPU Runtime",        "Other HW Runtime",
};
constexpr std::size_t kReportKeyCount = sizeof(kReportKeys) / sizeof(kReportKeys[0]);

void require_single_line(const std::string& field, const std::string& value) {
  if (value.find('\n') != std::string::npos || value.find('\r') != std::string::npos)
    throw std::invalid_argument("SubmissionReport." + field + ": embedded line break");
}

bool valid_threshold(const std::string& t) {
  if (t.empty()) return false;
  std::size_t i = 0, digits = 0;
  for (; i < t.size() && std::isdigit((unsigned char)t[i]); i++) digits++;
  if (digits == 0) return false;
  if (i == t.size()) return true;
  if (t[i] != '.') return false;
  std::size_t fdigits = 0;
  for (i++; i < t.size(); i++, fdigits++)
    if (!std::isdigit((unsigned char)t[i])) return false;
  return fdigits > 0;
}

std::string opt_to_text(const std::optional<long long>& v) {
  return v ? std::to_string(*v) : std::string("N/A");
}

std::optional<long long> opt_from_text(const std::string& t, const std::string& field) {
  if (t == "N/A") return std::nullopt;
  try {
    std::size_t used = 0;
    long long v = std::stoll(t, &used);
    if (used != t.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("SubmissionReport." + field + ": expected integer or N/A, got '" +
                                t + "'");
  }
}

long long ll_from_text(const std::string& t, const std::string& field) {
  auto v = opt_from_text(t, field);
  if (!v) throw std::invalid_argument("SubmissionReport." + field + ": expected integer");
  return *v;
}

void validate(const SubmissionReport& r) {
  require_single_line("problem_identifier", r.problem_identifier);
  require_single_line("submitter", r.submitter);
  require_single_line("date", r.date);
  require_single_line("reference", r.reference);
  require_single_line("modeling_approach", r.modeling_approach);
  require_single_line("coefficients_type", r.coefficients_type);
  require_single_line("coefficients_range", r.coefficients_range);
  require_single_line("workflow", r.workflow);
  require_single_line("hardware", r.hardware);
  if (!valid_threshold(r.success_threshold))
    throw std::invalid_argument(
        "SubmissionReport.success_threshold: expected non-negative decimal, got '" +
        r.success_threshold + "'");
  if (r.n_runs < 0 || r.n_feasible_runs < 0 || r.n_successful_runs < 0)
    throw std::invalid_argument("SubmissionReport.n_runs: negative count");
  if (r.n_successful_runs > r.n_feasible_runs)
    throw std::invalid_argument("SubmissionReport.n_successful_runs: exceeds feasible runs");
  if (r.n_feasible_runs > r.n_runs)
    throw std::invalid_argument("SubmissionReport.n_feasible_runs: exceeds total runs");
  if (r.n_binary_vars < 0 || r.n_integer_vars < 0 || r.n_continuous_vars < 0)
    throw std::invalid_argument("SubmissionReport.n_binary_vars: negative count");
  if (r.n_binary_vars + r.n_integer_vars + r.n_continuous_vars != r.n_decision_vars)
    throw std::invalid_argument(
        "SubmissionReport.n_decision_vars: variable type counts do not sum to total");
  if (r.n_nonzero_coeffs < 0)
    throw std::invalid_argument("SubmissionReport.n_nonzero_coeffs: negative count");
  for (long long ms : {r.total_runtime_ms, r.cpu_runtime_ms, r.gpu_runtime_ms, r.qpu_runtime_ms,
                       r.other_runtime_ms})
    if (ms < 0) throw std::invalid_argument("SubmissionReport.total_runtime_ms: negative time");
}

}  // namespace

std::string render_report(const SubmissionReport& r) {
  validate(r);
  std::string values[kReportKeyCount] = {
      r.problem_identifier,
      r.submitter,
      r.date,
      r.reference,
      opt_to_text(r.best_objective),
      opt_to_text(r.optimality_bound),
      r.modeling_approach,
      std::to_string(r.n_decision_vars),
      std::to_string(r.n_binary_vars),
      std::to_string(r.n_integer_vars),
      std::to_string(r.n_continuous_vars),
      std::to_string(r.n_nonzero_coeffs),
      r.coefficients_type,
      r.coefficients_range,
      r.workflow,
      r.algorithm_type == AlgorithmType::Deterministic ? "deterministic" : "stochastic",
      std::to_string(r.n_runs),
      std::to_string(r.n_feasible_runs),
      std::to_string(r.n_successful_runs),
      r.success_threshold,
      r.hardware,
      format_ms(r.total_runtime_ms),
      format_ms(r.cpu_runtime_ms),
      format_ms(r.gpu_runtime_ms),
      format_ms(r.qpu_runtime_ms),
      format_ms(r.other_runtime_ms),
  };
  std::string out;
  for (std::size_t i = 0; i < kReportKeyCount; i++) {
    out += kReportKeys[i];
    out += ": ";
    out += values[i];
    out += '\n';
  }
  return out;
}

SubmissionReport parse_report(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string values[kReportKeyCount];
  std::size_t idx = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (idx >= kReportKeyCount)
      throw std::invalid_argument("parse_report: unexpected extra line '" + line + "'");
    const std::string key = kReportKeys[idx];
    if (line.rfind(key + ": ", 0) != 0) {
      if (line.rfind(key + ":", 0) == 0 && line.size() == key.size() + 1) {
        values[idx++] = "";
        continue;
      }
      throw std::invalid_argument("parse_report: expected key '" + key + "', got line '" + line +
                                  "'");
    }
    values[idx++] = line.substr(key.size() + 2);
  }
  if (idx != kReportKeyCount)
    throw std::invalid_argument("parse_report: missing key '" + std::string(kReportKeys[idx]) +
                                "'");
  SubmissionReport r;
  r.problem_identifier = values[0];
  r.submitter = values[1];
  r.date = values[2];
  r.reference = values[3];
  r.best_objective = opt_from_text(values[4], "best_objective");
  r.optimality_bound = opt_from_text(values[5], "optimality_bound");
  r.modeling_approach = values[6];
  r.n_decision_vars = ll_from_text(values[7], "n_decision_vars");
  r.n_binary_vars = ll_from_text(values[8], "n_binary_vars");
  r.n_integer_vars = ll_from_text(values[9], "n_integer_vars");
  r.n_continuous_vars = ll_from_text(values[10], "n_continuous_vars");
  r.n_nonzero_coeffs = ll_from_text(values[11], "n_nonzero_coeffs");
  r.coefficients_type = values[12];
  r.coefficients_range = values[13];
  r.workflow = values[14];
  if (values[15] == "deterministic")
    r.algorithm_type = AlgorithmType::Deterministic;
  else if (values[15] == "stochastic")
    r.algorithm_type = AlgorithmType::Stochastic;
  else
    throw std::invalid_argument("SubmissionReport.algorithm_type: got '" + values[15] + "'");
  r.n_runs = ll_from_text(values[16], "n_runs");
  r.n_feasible_runs = ll_from_text(values[17], "n_feasible_runs");
  r.n_successful_runs = ll_from_text(values[18], "n_successful_runs");
  r.success_threshold = values[19];
  r.hardware = values[20];
  r.total_runtime_ms = parse_ms(values[21]);
  r.cpu_runtime_ms = parse_ms(values[22]);
  r.gpu_runtime_ms = parse_ms(values[23]);
  r.qpu_runtime_ms = parse_ms(values[24]);
  r.other_runtime_ms = parse_ms(values[25]);
  validate(r);
  return r;
}

}  // namespace optbench
