#pragma once

#include <cstddef>

#include "json.hpp"
#include "qrgg/model.hpp"

namespace qrgg {

/// E[C_k] = p' (n + k (n - k)).
double expected_cut_capacity(std::size_t n, std::size_t k, double p_prime);

/// Lower-tail Chernoff bound exp(-mean eps^2 / 2), clamped to 1.
double chernoff_lower_tail(double mean, double epsilon);

/// Tail bound for a size-k cut: exp(-(eps^2 (n - k) p' / 2 - ln(k + 1))),
/// clamped to [0, 1].
double cut_tail_bound(std::size_t n, std::size_t k, double p_prime,
                      double epsilon);

struct CapacityBound {
  double epsilon = 0.0;  // +inf when p' = 0
  double bound = 0.0;
  double fail_prob = 0.0;
  bool vacuous = false;
};

/// High-probability lower bound (1 - eps) n p' with
/// eps = sqrt(4 ln n / (p' (n - k))). When eps >= 1 the bound is reported as 0
/// and flagged vacuous. fail_prob = min(1, 2 tau / n^2).
CapacityBound lower_bound_report(std::size_t n, std::size_t tau,
                                 double p_prime, std::size_t k = 0);

/// High-probability upper bound (1 + eps) n p' with eps = sqrt(4 ln n / (n p')).
/// The bound stays valid for eps >= 1 but is flagged vacuous.
/// fail_prob = min(1, 2 n^(-4/3)).
CapacityBound upper_bound_report(std::size_t n, double p_prime);

struct BoundReport {
  std::size_t n = 0;
  std::size_t tau = 0;
  std::size_t k = 0;
  double p_prime = 0.0;
  ProbabilityInterval p_prime_interval;
  double expected_c0 = 0.0;
  double epsilon_lower = 0.0;
  double lower_bound = 0.0;
  double lower_fail_prob = 0.0;
  double epsilon_upper = 0.0;
  double upper_bound = 0.0;
  double upper_fail_prob = 0.0;
  bool vacuous_lower = false;
  bool vacuous_upper = false;
};

/// p' is the border-corrected connection probability from
/// connection_probability(); the interval is the corner/interior bracket
/// (using the annulus-averaged probability for a decaying kernel).
BoundReport full_report(std::size_t n, std::size_t tau,
                        const ConnectionModel& model, std::size_t k = 0);

/// Evaluates the report at an explicit p' (interval still from the model).
BoundReport full_report_at(std::size_t n, std::size_t tau,
                           const ConnectionModel& model, double p_prime,
                           std::size_t k = 0);

/// Field names match BoundReport; reals rounded to 6 significant digits,
/// infinite epsilons written as null.
nlohmann::json to_json(const BoundReport& report);

}  // namespace qrgg
