#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qrgg/bounds.hpp"
#include "qrgg/cut.hpp"
#include "qrgg/model.hpp"

namespace qrgg {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct AuditSpec {
  std::vector<double> epsilons;
  /// Sizes of the fixed cuts audited; the cut of size k puts relays 1..k on
  /// the source side and is measured against the first terminal.
  std::vector<std::size_t> ks{0};
};

struct ExperimentConfig {
  std::size_t n_relays = 200;
  std::size_t n_terminals = 1;
  ConnectionModel model = ConnectionModel::fixed(0.1, 0.2, 0.5);
  std::size_t trials = 500;
  std::uint64_t master_seed = 1;
  /// Unset: unit-width integer bins over [min, max].
  std::optional<std::size_t> histogram_bins;
  std::optional<AuditSpec> audit;
  bool rlnc_check = false;
  std::size_t rlnc_trials = 10;
  std::string preset;
  /// Parameter choices that are not read off a source figure, recorded in
  /// the provenance block.
  std::vector<std::string> notes;
};

/// Throws Error(kInvalidParameter) on a bad config.
void validate(const ExperimentConfig& config);

/// "fig3": n=200, r=0.1, r'=0.2; "fig4": n=200, r=0.13, r'=0.18. Both use
/// p=0.5 and one terminal.
ExperimentConfig preset_config(std::string_view name);

struct TrialOutcome {
  Capacity capacity = 0;
  std::vector<Capacity> per_terminal;
  /// Capacity of each audited fixed cut, in AuditSpec::ks order. Always
  /// starts with k = 0 (the source degree).
  std::vector<Capacity> fixed_cuts;
  std::optional<double> rlnc_success;
  bool rlnc_cyclic = false;

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// One graph built from RandomStream(master_seed).child("trial", index).
TrialOutcome run_trial(const ExperimentConfig& config, std::size_t index);

struct Histogram {
  std::vector<double> edges;  // counts.size() + 1 entries
  std::vector<std::size_t> counts;
};

Histogram make_histogram(std::span<const Capacity> values,
                         std::optional<std::size_t> bins = {});

struct AuditRow {
  double epsilon = 0.0;
  std::size_t k = 0;
  double expected = 0.0;   // E[C_k]
  double threshold = 0.0;  // (1 - eps) E[C_k]
  double observed_lower = 0.0;
  double bound_lower = 0.0;
  /// Same tail bound evaluated at the upper end of the p' bracket.
  double bound_lower_bracket = 0.0;
  double slack_lower = 0.0;
  bool lower_violated = false;
  bool upper_vacuous = false;
  double epsilon_upper = 0.0;
  double observed_upper = 0.0;
  double bound_upper = 0.0;
  double slack_upper = 0.0;
  bool upper_violated = false;
};

/// 3 sigma binomial sampling slack: 3 sqrt(bound (1 - bound) / trials).
double sampling_slack(double bound, std::size_t trials);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Capacity> per_trial_capacity;
  std::vector<std::size_t> audited_ks;
  std::vector<std::vector<Capacity>> per_trial_fixed_cuts;  // [k index][trial]
  double mean = 0.0;
  double std_dev = 0.0;
  Histogram histogram;
  BoundReport bound_report;
  std::vector<AuditRow> audit;
  std::optional<double> rlnc_success_fraction;
  std::optional<double> skipped_cyclic_fraction;

  std::span<const Capacity> per_trial_source_cut() const {
    return per_trial_fixed_cuts.front();
  }
};

/// Trials run under OpenMP with `jobs` threads (0: OpenMP default). Output is
/// independent of `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config, int jobs = 0);

namespace serial {
/// Single-threaded reference; identical result to qrgg::run_experiment.
ExperimentResult run_experiment(const ExperimentConfig& config);
}  // namespace serial

/// Lower-tail rows for every (eps, k) pair; the upper-tail columns use the
/// upper-bound epsilon from the result's bound report and are marked vacuous
/// when that epsilon is >= 1. Every k must have been recorded in the result.
std::vector<AuditRow> audit_bounds(const ExperimentResult& result,
                                   std::span<const double> epsilons,
                                   std::span<const std::size_t> ks);

bool audit_passed(std::span<const AuditRow> rows);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const AuditRow& row);
nlohmann::json to_json(const ExperimentResult& result);

struct SweepConfig {
  std::vector<std::size_t> n_list;
  std::vector<double> r_list;
  /// Exactly one way of choosing r' per r.
  std::optional<double> r_prime_factor;
  std::optional<double> r_prime_offset;
  std::vector<double> r_prime_list;
  double p_connection = 0.9;
  std::size_t n_terminals = 1;
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
};

/// "fig5": r' = 1.8 r and p_connection = 0.9.
SweepConfig sweep_preset();

struct SweepRow {
  std::size_t n = 0;
  double r = 0.0;
  double r_prime = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t trials = 0;
};

/// One experiment per (n, r) cell with the linear-decay kernel, every cell
/// seeded with master_seed. Rows ordered by n, then r.
std::vector<SweepRow> run_sweep(const SweepConfig& config, int jobs = 0);

nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(std::span<const SweepRow> rows);
std::string sweep_csv(std::span<const SweepRow> rows);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x,
                            std::span<const double> y);

}  // namespace qrgg
