#include "qrgg/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "qrgg/errors.hpp"
#include "qrgg/graph.hpp"
#include "qrgg/report_io.hpp"
#include "qrgg/rlnc.hpp"

namespace qrgg {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, message);
}

std::vector<std::size_t> audited_ks(const ExperimentConfig& config) {
  std::vector<std::size_t> ks{0};
  if (config.audit) {
    for (std::size_t k : config.audit->ks) {
      if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
    }
  }
  return ks;
}

/// Kahan-compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Folds per-trial outcomes (already in trial order) into a result.
ExperimentResult summarize(const ExperimentConfig& config,
                           const std::vector<TrialOutcome>& outcomes) {
  ExperimentResult result;
  result.config = config;
  result.audited_ks = audited_ks(config);
  result.per_trial_fixed_cuts.assign(result.audited_ks.size(), {});
  result.per_trial_capacity.reserve(outcomes.size());

  Capacity total = 0;
  std::size_t cyclic = 0;
  std::size_t rlnc_graphs = 0;
  CompensatedSum rlnc_sum;
  for (const TrialOutcome& o : outcomes) {
    result.per_trial_capacity.push_back(o.capacity);
    total += o.capacity;
    for (std::size_t i = 0; i < o.fixed_cuts.size(); ++i) {
      result.per_trial_fixed_cuts[i].push_back(o.fixed_cuts[i]);
    }
    if (o.rlnc_cyclic) ++cyclic;
    if (o.rlnc_success) {
      ++rlnc_graphs;
      rlnc_sum.add(*o.rlnc_success);
    }
  }
  const double trials = static_cast<double>(outcomes.size());
  result.mean = static_cast<double>(total) / trials;
  CompensatedSum squares;
  for (Capacity c : result.per_trial_capacity) {
    const double d = static_cast<double>(c) - result.mean;
    squares.add(d * d);
  }
  result.std_dev =
      outcomes.size() > 1 ? std::sqrt(squares.value() / (trials - 1.0)) : 0.0;
  result.histogram =
      make_histogram(result.per_trial_capacity, config.histogram_bins);
  result.bound_report =
      full_report(config.n_relays, config.n_terminals, config.model, 0);
  if (config.audit) {
    result.audit =
        audit_bounds(result, config.audit->epsilons, config.audit->ks);
  }
  if (config.rlnc_check) {
    result.skipped_cyclic_fraction = static_cast<double>(cyclic) / trials;
    if (rlnc_graphs > 0) {
      result.rlnc_success_fraction =
          rlnc_sum.value() / static_cast<double>(rlnc_graphs);
    }
  }
  return result;
}

double ranks_mean(std::size_t first, std::size_t last) {
  return (static_cast<double>(first) + static_cast<double>(last)) / 2.0 + 1.0;
}

std::vector<double> ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    for (std::size_t m = i; m <= j; ++m) out[order[m]] = ranks_mean(i, j);
    i = j + 1;
  }
  return out;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round_sig6(*v);
}

}  // namespace

void validate(const ExperimentConfig& config) {
  require(config.n_relays >= 2, "n_relays must be >= 2");
  require(config.n_terminals >= 1, "n_terminals must be >= 1");
  require(config.trials >= 1, "trials must be >= 1");
  require(!config.histogram_bins || *config.histogram_bins >= 1,
          "histogram_bins must be >= 1");
  require(!config.rlnc_check || config.rlnc_trials >= 1,
          "rlnc_trials must be >= 1");
  if (config.audit) {
    for (double eps : config.audit->epsilons) {
      require(eps > 0.0 && eps < 1.0, "audit epsilon must lie in (0,1)");
    }
    for (std::size_t k : config.audit->ks) {
      require(k <= config.n_relays, "audit k must be <= n_relays");
    }
  }
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig config;
  config.preset = std::string(name);
  config.n_relays = 200;
  config.n_terminals = 1;
  if (name == "fig3") {
    config.model = ConnectionModel::fixed(0.1, 0.2, 0.5);
  } else if (name == "fig4") {
    config.model = ConnectionModel::fixed(0.13, 0.18, 0.5);
  } else {
    throw Error(ErrorCode::kInvalidParameter,
                "unknown preset '" + std::string(name) + "'");
  }
  config.notes = {"annulus probability p=0.5 is inferred, not taken from the figure",
                  "terminal count 1 is inferred from the single s-t cut in the caption"};
  return config;
}

TrialOutcome run_trial(const ExperimentConfig& config, std::size_t index) {
  require(index < config.trials, "trial index out of range");
  const RandomStream stream = RandomStream(config.master_seed).child("trial", index);
  const ConnectivityGraph graph = build_connectivity_graph(
      config.n_relays, config.n_terminals, config.model, stream);

  TrialOutcome out;
  for (const CutResult& cut : terminal_min_cuts(graph)) {
    out.per_terminal.push_back(cut.capacity);
  }
  out.capacity = *std::min_element(out.per_terminal.begin(), out.per_terminal.end());

  const NodeId first_terminal = graph.terminal(0);
  const std::vector<NodeId> relays = graph.relays();
  for (std::size_t k : audited_ks(config)) {
    out.fixed_cuts.push_back(cut_capacity(
        graph, first_terminal, std::span<const NodeId>(relays.data(), k)));
  }

  if (config.rlnc_check) {
    const AchievabilityReport report = verify_achievability(
        graph, config.rlnc_trials, RandomStream(config.master_seed).child("rlnc", index));
    out.rlnc_cyclic = report.cyclic_skipped;
    if (!report.cyclic_skipped) out.rlnc_success = report.success_fraction;
  }
  return out;
}

Histogram make_histogram(std::span<const Capacity> values,
                         std::optional<std::size_t> bins) {
  Histogram h;
  if (values.empty()) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = static_cast<double>(*lo_it);
  const double hi = static_cast<double>(*hi_it) + 1.0;
  const std::size_t count =
      bins ? *bins : static_cast<std::size_t>(*hi_it - *lo_it + 1);
  require(count >= 1, "histogram needs at least one bin");
  const double width = (hi - lo) / static_cast<double>(count);
  h.counts.assign(count, 0);
  for (std::size_t i = 0; i <= count; ++i) {
    h.edges.push_back(bins ? lo + width * static_cast<double>(i)
                           : lo + static_cast<double>(i));
  }
  for (Capacity v : values) {
    auto bin = static_cast<std::size_t>((static_cast<double>(v) - lo) / width);
    ++h.counts[std::min(bin, count - 1)];
  }
  return h;
}

double sampling_slack(double bound, std::size_t trials) {
  const double b = std::clamp(bound, 0.0, 1.0);
  return 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
}

std::vector<AuditRow> audit_bounds(const ExperimentResult& result,
                                   std::span<const double> epsilons,
                                   std::span<const std::size_t> ks) {
  const ExperimentConfig& config = result.config;
  const std::size_t n = config.n_relays;
  const double p_prime = result.bound_report.p_prime;
  const double p_bracket = result.bound_report.p_prime_interval.upper;
  const auto trials = result.per_trial_capacity.size();
  const BoundReport& report = result.bound_report;

  std::vector<AuditRow> rows;
  for (double eps : epsilons) {
    require(eps > 0.0 && eps < 1.0, "audit epsilon must lie in (0,1)");
    for (std::size_t k : ks) {
      const auto it =
          std::find(result.audited_ks.begin(), result.audited_ks.end(), k);
      require(it != result.audited_ks.end(),
              "cut size " + std::to_string(k) + " was not recorded");
      const auto& cuts =
          result.per_trial_fixed_cuts[static_cast<std::size_t>(it - result.audited_ks.begin())];

      AuditRow row;
      row.epsilon = eps;
      row.k = k;
      row.expected = expected_cut_capacity(n, k, p_prime);
      row.threshold = (1.0 - eps) * row.expected;
      const auto below = std::count_if(cuts.begin(), cuts.end(), [&](Capacity c) {
        return static_cast<double>(c) < row.threshold;
      });
      row.observed_lower = static_cast<double>(below) / static_cast<double>(trials);
      row.bound_lower = cut_tail_bound(n, k, p_prime, eps);
      row.bound_lower_bracket = cut_tail_bound(n, k, p_bracket, eps);
      row.slack_lower = sampling_slack(row.bound_lower, trials);
      row.lower_violated = row.observed_lower > row.bound_lower + row.slack_lower;

      row.epsilon_upper = report.epsilon_upper;
      row.upper_vacuous = report.vacuous_upper;
      if (!row.upper_vacuous) {
        const double limit = (1.0 + report.epsilon_upper) * report.expected_c0;
        const auto above = std::count_if(
            result.per_trial_capacity.begin(), result.per_trial_capacity.end(),
            [&](Capacity c) { return static_cast<double>(c) > limit; });
        row.observed_upper = static_cast<double>(above) / static_cast<double>(trials);
        row.bound_upper = report.upper_fail_prob;
        row.slack_upper = sampling_slack(row.bound_upper, trials);
        row.upper_violated = row.observed_upper > row.bound_upper + row.slack_upper;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

bool audit_passed(std::span<const AuditRow> rows) {
  return std::none_of(rows.begin(), rows.end(), [](const AuditRow& r) {
    return r.lower_violated || r.upper_violated;
  });
}

ExperimentResult run_experiment(const ExperimentConfig& config, int jobs) {
  validate(config);
  std::vector<TrialOutcome> outcomes(config.trials);
  std::exception_ptr failure;
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto trials = static_cast<std::int64_t>(config.trials);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < trials; ++i) {
    try {
      outcomes[static_cast<std::size_t>(i)] =
          run_trial(config, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qrgg_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(config, outcomes);
}

namespace serial {

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(config.trials);
  for (std::size_t i = 0; i < config.trials; ++i) {
    outcomes.push_back(run_trial(config, i));
  }
  return summarize(config, outcomes);
}

}  // namespace serial

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json audit = nullptr;
  if (config.audit) {
    nlohmann::json eps = nlohmann::json::array();
    for (double e : config.audit->epsilons) eps.push_back(round_sig6(e));
    audit = {{"epsilons", eps}, {"ks", config.audit->ks}};
  }
  return {
      {"preset", config.preset},
      {"n_relays", config.n_relays},
      {"n_terminals", config.n_terminals},
      {"model", to_json(config.model)},
      {"trials", config.trials},
      {"master_seed", config.master_seed},
      {"histogram_bins",
       config.histogram_bins ? nlohmann::json(*config.histogram_bins) : nlohmann::json(nullptr)},
      {"audit", audit},
      {"rlnc_check", config.rlnc_check},
      {"rlnc_trials", config.rlnc_trials},
  };
}

nlohmann::json to_json(const AuditRow& row) {
  nlohmann::json upper;
  if (row.upper_vacuous) {
    upper = {{"status", "vacuous at this scale"},
             {"epsilon", std::isfinite(row.epsilon_upper)
                             ? nlohmann::json(round_sig6(row.epsilon_upper))
                             : nlohmann::json(nullptr)}};
  } else {
    upper = {{"status", row.upper_violated ? "violated" : "ok"},
             {"epsilon", round_sig6(row.epsilon_upper)},
             {"observed", round_sig6(row.observed_upper)},
             {"bound", round_sig6(row.bound_upper)},
             {"slack", round_sig6(row.slack_upper)}};
  }
  return {
      {"epsilon", round_sig6(row.epsilon)},
      {"k", row.k},
      {"expected", round_sig6(row.expected)},
      {"threshold", round_sig6(row.threshold)},
      {"lower",
       {{"status", row.lower_violated ? "violated" : "ok"},
        {"observed", round_sig6(row.observed_lower)},
        {"bound", round_sig6(row.bound_lower)},
        {"bound_at_bracket_upper", round_sig6(row.bound_lower_bracket)},
        {"slack", round_sig6(row.slack_lower)}}},
      {"upper", upper},
  };
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json edges = nlohmann::json::array();
  for (double e : result.histogram.edges) edges.push_back(round_sig6(e));
  nlohmann::json audit = nlohmann::json::array();
  for (const AuditRow& row : result.audit) audit.push_back(to_json(row));
  nlohmann::json fixed = nlohmann::json::object();
  for (std::size_t i = 0; i < result.audited_ks.size(); ++i) {
    fixed[std::to_string(result.audited_ks[i])] = result.per_trial_fixed_cuts[i];
  }
  return {
      {"per_trial_capacity", result.per_trial_capacity},
      {"per_trial_fixed_cuts", fixed},
      {"mean", round_sig6(result.mean)},
      {"std_dev", round_sig6(result.std_dev)},
      {"histogram", {{"bin_edges", edges}, {"counts", result.histogram.counts}}},
      {"bound_report", to_json(result.bound_report)},
      {"audit_outcomes", audit},
      {"rlnc_success_fraction", optional_number(result.rlnc_success_fraction)},
      {"skipped_cyclic_fraction", optional_number(result.skipped_cyclic_fraction)},
      {"provenance",
       {{"config", to_json(result.config)},
        {"tool_version", kToolVersion},
        {"master_seed", result.config.master_seed},
        {"rng", "mt19937_64 split by (seed, label, index), v" +
                    std::to_string(RandomStream::kVersion)},
        {"notes", result.config.notes}}},
  };
}

SweepConfig sweep_preset() {
  SweepConfig config;
  config.n_list = {50, 100, 150, 200, 250, 300};
  config.r_list = {0.06, 0.08, 0.1};
  config.r_prime_factor = 1.8;
  config.p_connection = 0.9;
  config.trials = 100;
  return config;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, int jobs) {
  require(!config.n_list.empty() && !config.r_list.empty(),
          "sweep needs non-empty n and r lists");
  const int rules = (config.r_prime_factor ? 1 : 0) +
                    (config.r_prime_offset ? 1 : 0) +
                    (config.r_prime_list.empty() ? 0 : 1);
  require(rules == 1, "choose exactly one of r' factor, offset or list");
  require(config.r_prime_list.empty() ||
              config.r_prime_list.size() == config.r_list.size(),
          "r' list must match the r list");

  std::vector<double> r_values = config.r_list;
  std::vector<double> rp_values(r_values.size());
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (config.r_prime_factor) {
      rp_values[i] = r_values[i] * *config.r_prime_factor;
    } else if (config.r_prime_offset) {
      rp_values[i] = r_values[i] + *config.r_prime_offset;
    } else {
      rp_values[i] = config.r_prime_list[i];
    }
  }
  std::vector<std::size_t> r_order(r_values.size());
  std::iota(r_order.begin(), r_order.end(), 0);
  std::stable_sort(r_order.begin(), r_order.end(), [&](std::size_t a, std::size_t b) {
    return r_values[a] < r_values[b];
  });
  std::vector<std::size_t> n_sorted = config.n_list;
  std::sort(n_sorted.begin(), n_sorted.end());

  std::vector<SweepRow> rows;
  for (std::size_t n : n_sorted) {
    for (std::size_t idx : r_order) {
      ExperimentConfig cell;
      cell.preset = "sweep";
      cell.n_relays = n;
      cell.n_terminals = config.n_terminals;
      cell.model = ConnectionModel::linear_decay(r_values[idx], rp_values[idx],
                                                 config.p_connection);
      cell.trials = config.trials;
      cell.master_seed = config.master_seed;
      const ExperimentResult result = run_experiment(cell, jobs);
      rows.push_back({n, r_values[idx], rp_values[idx], result.mean,
                      result.std_dev, config.trials});
    }
  }
  return rows;
}

nlohmann::json to_json(const SweepConfig& config) {
  auto rounded = [](const std::vector<double>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (double x : v) out.push_back(round_sig6(x));
    return out;
  };
  return {
      {"n_list", config.n_list},
      {"r_list", rounded(config.r_list)},
      {"r_prime_factor", optional_number(config.r_prime_factor)},
      {"r_prime_offset", optional_number(config.r_prime_offset)},
      {"r_prime_list", rounded(config.r_prime_list)},
      {"kernel", "linear_decay"},
      {"p_connection", round_sig6(config.p_connection)},
      {"n_terminals", config.n_terminals},
      {"trials", config.trials},
      {"master_seed", config.master_seed},
  };
}

nlohmann::json to_json(std::span<const SweepRow> rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    out.push_back({{"n", row.n},
                   {"r", round_sig6(row.r)},
                   {"r_prime", round_sig6(row.r_prime)},
                   {"mean", round_sig6(row.mean)},
                   {"std_dev", round_sig6(row.std_dev)},
                   {"trials", row.trials}});
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "n,r,r_prime,mean,std_dev,trials\n";
  for (const SweepRow& row : rows) {
    out += std::to_string(row.n) + "," + format_sig6(row.r) + "," +
           format_sig6(row.r_prime) + "," + format_sig6(row.mean) + "," +
           format_sig6(row.std_dev) + "," + std::to_string(row.trials) + "\n";
  }
  return out;
}

double spearman_correlation(std::span<const double> x,
                            std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2,
          "spearman needs two equal-length samples of size >= 2");
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace qrgg
