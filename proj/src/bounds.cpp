#include "qrgg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qrgg/errors.hpp"
#include "qrgg/report_io.hpp"

namespace qrgg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, message);
}

void check_probability(double p) {
  require(p >= 0.0 && p <= 1.0, "p' must lie in [0,1]");
}

void check_epsilon(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

nlohmann::json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig6(v);
}

}  // namespace

double expected_cut_capacity(std::size_t n, std::size_t k, double p_prime) {
  require(k <= n, "cut size k must satisfy 0 <= k <= n");
  check_probability(p_prime);
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return p_prime * (nn + kk * (nn - kk));
}

double chernoff_lower_tail(double mean, double epsilon) {
  require(mean >= 0.0, "mean must be >= 0");
  check_epsilon(epsilon);
  return std::min(1.0, std::exp(-mean * epsilon * epsilon / 2.0));
}

double cut_tail_bound(std::size_t n, std::size_t k, double p_prime,
                      double epsilon) {
  require(k <= n, "cut size k must satisfy 0 <= k <= n");
  check_probability(p_prime);
  check_epsilon(epsilon);
  const double exponent =
      epsilon * epsilon * static_cast<double>(n - k) * p_prime / 2.0 -
      std::log(static_cast<double>(k) + 1.0);
  return clamp01(std::exp(-exponent));
}

CapacityBound lower_bound_report(std::size_t n, std::size_t tau,
                                 double p_prime, std::size_t k) {
  require(n > 1, "n must be > 1");
  require(k < n, "cut size k must satisfy 0 <= k < n");
  check_probability(p_prime);
  const double nn = static_cast<double>(n);
  const double denom = p_prime * static_cast<double>(n - k);
  CapacityBound out;
  out.epsilon = denom > 0.0 ? std::sqrt(4.0 * std::log(nn) / denom) : kInf;
  out.vacuous = out.epsilon >= 1.0;
  out.bound = out.vacuous ? 0.0 : (1.0 - out.epsilon) * nn * p_prime;
  out.fail_prob = clamp01(2.0 * static_cast<double>(tau) / (nn * nn));
  return out;
}

CapacityBound upper_bound_report(std::size_t n, double p_prime) {
  require(n > 1, "n must be > 1");
  check_probability(p_prime);
  const double nn = static_cast<double>(n);
  const double mean = nn * p_prime;
  CapacityBound out;
  out.epsilon = mean > 0.0 ? std::sqrt(4.0 * std::log(nn) / mean) : kInf;
  out.vacuous = out.epsilon >= 1.0;
  out.bound = mean > 0.0 ? (1.0 + out.epsilon) * mean : 0.0;
  out.fail_prob = clamp01(2.0 * std::pow(nn, -4.0 / 3.0));
  return out;
}

BoundReport full_report_at(std::size_t n, std::size_t tau,
                           const ConnectionModel& model, double p_prime,
                           std::size_t k) {
  BoundReport r;
  r.n = n;
  r.tau = tau;
  r.k = k;
  r.p_prime = p_prime;
  r.p_prime_interval =
      p_prime_bounds(model, effective_annulus_probability(model));
  r.expected_c0 = expected_cut_capacity(n, 0, p_prime);
  const CapacityBound lower = lower_bound_report(n, tau, p_prime, k);
  const CapacityBound upper = upper_bound_report(n, p_prime);
  r.epsilon_lower = lower.epsilon;
  r.lower_bound = lower.bound;
  r.lower_fail_prob = lower.fail_prob;
  r.vacuous_lower = lower.vacuous;
  r.epsilon_upper = upper.epsilon;
  r.upper_bound = upper.bound;
  r.upper_fail_prob = upper.fail_prob;
  r.vacuous_upper = upper.vacuous;
  return r;
}

BoundReport full_report(std::size_t n, std::size_t tau,
                        const ConnectionModel& model, std::size_t k) {
  return full_report_at(n, tau, model, connection_probability(model), k);
}

nlohmann::json to_json(const BoundReport& r) {
  return {
      {"n", r.n},
      {"tau", r.tau},
      {"k", r.k},
      {"p_prime", round_sig6(r.p_prime)},
      {"p_prime_interval",
       {round_sig6(r.p_prime_interval.lower), round_sig6(r.p_prime_interval.upper)}},
      {"expected_c0", round_sig6(r.expected_c0)},
      {"epsilon_lower", finite_or_null(r.epsilon_lower)},
      {"lower_bound", round_sig6(r.lower_bound)},
      {"lower_fail_prob", round_sig6(r.lower_fail_prob)},
      {"epsilon_upper", finite_or_null(r.epsilon_upper)},
      {"upper_bound", round_sig6(r.upper_bound)},
      {"upper_fail_prob", round_sig6(r.upper_fail_prob)},
      {"vacuous_lower", r.vacuous_lower},
      {"vacuous_upper", r.vacuous_upper},
      {"fail_prob_constants", "proof-explicit: 2*tau/n^2 and 2*n^(-4/3)"},
  };
}

}  // namespace qrgg
