#include "qrgg/cli.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrgg/bounds.hpp"
#include "qrgg/cut.hpp"
#include "qrgg/errors.hpp"
#include "qrgg/experiment.hpp"
#include "qrgg/graph.hpp"
#include "qrgg/report_io.hpp"
#include "qrgg/rlnc.hpp"

namespace qrgg {

namespace {

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidParameter, message);
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) invalid(flag + ": '" + item + "' is not a number");
    values.push_back(v);
  }
  return values;
}

std::vector<std::size_t> parse_count_list(const std::string& text,
                                          const std::string& flag) {
  std::vector<std::size_t> values;
  for (double v : parse_double_list(text, flag)) {
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      invalid(flag + ": expected non-negative integers");
    }
    values.push_back(static_cast<std::size_t>(v));
  }
  return values;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

void print_config(std::ostream& err, const nlohmann::json& config) {
  err << "resolved config: " << config.dump() << "\n";
}

/// Flags shared by every subcommand that needs a connection model.
struct ModelFlags {
  std::string kernel = "fixed";
  double r = 0.1;
  double r_prime = 0.2;
  std::optional<double> p;
  std::optional<double> p_connection;
  CLI::Option* kernel_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* r_prime_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* p_connection_opt = nullptr;

  void add(CLI::App& app, bool radii_required) {
    kernel_opt = app.add_option("--kernel", kernel, "Annulus kernel")
                     ->check(CLI::IsMember({"fixed", "linear-decay"}));
    r_opt = app.add_option("--r", r, "Inner radius (always connected)");
    r_prime_opt = app.add_option("--r-prime", r_prime,
                                 "Outer radius (never connected beyond)");
    if (radii_required) {
      r_opt->required();
      r_prime_opt->required();
    }
    p_opt = app.add_option("--p", p, "Annulus probability (fixed kernel)");
    p_connection_opt = app.add_option("--p-connection", p_connection,
                                      "Peak probability (linear-decay kernel)");
  }

  /// Fills unset flags from `base`.
  void inherit(const ConnectionModel& base) {
    if (r_opt->count() == 0) r = base.r();
    if (r_prime_opt->count() == 0) r_prime = base.r_prime();
    if (kernel_opt->count() == 0) {
      kernel = base.kind() == KernelKind::kFixed ? "fixed" : "linear-decay";
    }
    if (base.kind() == KernelKind::kFixed && !p) p = base.probability();
    if (base.kind() == KernelKind::kLinearDecay && !p_connection) {
      p_connection = base.probability();
    }
  }

  ConnectionModel build() const {
    if (kernel == "linear-decay") {
      if (!p_connection) invalid("--p-connection is required for the linear-decay kernel");
      return ConnectionModel::linear_decay(r, r_prime, *p_connection);
    }
    if (!p) invalid("--p is required for the fixed kernel");
    return ConnectionModel::fixed(r, r_prime, *p);
  }
};

/// Either --graph FILE or generation flags.
struct GraphSource {
  std::string graph_path;
  std::size_t n = 0;
  std::size_t terminals = 1;
  std::uint64_t seed = 0;
  ModelFlags model;
  CLI::Option* n_opt = nullptr;

  void add(CLI::App& app) {
    app.add_option("--graph", graph_path, "Graph JSON file");
    n_opt = app.add_option("--n", n, "Relay count when generating");
    app.add_option("--terminals", terminals, "Terminal count when generating");
    app.add_option("--seed", seed, "Master seed (graph generation and coding draws)")
        ->envname("QRGG_SEED");
    model.add(app, false);
  }

  ConnectivityGraph load(std::ostream& err) const {
    if (!graph_path.empty()) {
      print_config(err, {{"graph", graph_path}});
      try {
        return graph_from_json(nlohmann::json::parse(read_file(graph_path)));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kMalformedInput,
                    graph_path + ": " + e.what());
      }
    }
    if (n_opt->count() == 0) invalid("give --graph or --n with model flags");
    const ConnectionModel m = model.build();
    print_config(err, {{"n", n}, {"terminals", terminals}, {"seed", seed},
                       {"model", to_json(m)}});
    return build_connectivity_graph(n, terminals, m, RandomStream(seed));
  }
};

struct Cli {
  CLI::App app{"Quasi random geometric graph capacity simulator", "qrgg"};
  std::ostream& out;
  std::ostream& err;
  int status = kExitOk;

  // generate
  struct {
    std::size_t n = 0;
    std::size_t terminals = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    ModelFlags model;
  } gen;
  // capacity
  struct {
    GraphSource source;
    std::string out_path;
  } cap;
  // bounds
  struct {
    std::size_t n = 0;
    std::size_t terminals = 1;
    std::size_t k = 0;
    std::optional<double> p_prime;
    bool curve = false;
    std::string out_path;
    ModelFlags model;
  } bnd;
  // experiment
  struct {
    std::string preset;
    std::size_t n = 200;
    std::size_t terminals = 1;
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    std::optional<std::size_t> bins;
    std::string audit;
    std::string audit_k = "0";
    bool rlnc = false;
    std::size_t rlnc_trials = 10;
    int jobs = 0;
    std::string out_path, csv_path, hist_csv_path, svg_path;
    ModelFlags model;
    CLI::Option *n_opt = nullptr, *terminals_opt = nullptr;
  } exp;
  // sweep
  struct {
    std::string preset;
    std::string n_list = "50,100,150,200,250,300";
    std::string r_list = "0.06,0.08,0.1";
    std::optional<double> r_prime_factor;
    std::optional<double> r_prime_offset;
    std::string r_prime_list;
    double p_connection = 0.9;
    std::size_t terminals = 1;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    int jobs = 0;
    std::string out_path, csv_path;
  } swp;
  // verify-rlnc
  struct {
    GraphSource source;
    std::size_t trials = 1000;
    std::string field = "gf256";
    std::string out_path;
  } rl;
  // export
  struct {
    std::string result_path, csv_path, hist_csv_path, svg_path;
    std::string title = "min-cut capacity histogram";
  } ex;

  Cli(std::ostream& o, std::ostream& e) : out(o), err(e) {
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    setup_generate();
    setup_capacity();
    setup_bounds();
    setup_experiment();
    setup_sweep();
    setup_verify();
    setup_export();
  }

  void setup_generate() {
    auto* sub = app.add_subcommand("generate", "Sample a connectivity graph");
    sub->add_option("--n", gen.n, "Relay count")->required();
    sub->add_option("--terminals", gen.terminals, "Terminal count");
    sub->add_option("--seed", gen.seed, "Master seed")
        ->envname("QRGG_SEED")
        ->required();
    sub->add_option("--out", gen.out_path, "Output path (stdout if empty)");
    gen.model.add(*sub, true);
    sub->callback([this] { cmd_generate(); });
  }

  void setup_capacity() {
    auto* sub = app.add_subcommand("capacity", "Multicast min-cut capacity");
    cap.source.add(*sub);
    sub->add_option("--out", cap.out_path, "Output path (stdout if empty)");
    sub->callback([this] { cmd_capacity(); });
  }

  void setup_bounds() {
    auto* sub = app.add_subcommand("bounds", "Evaluate the concentration bounds");
    sub->add_option("--n", bnd.n, "Relay count")->required();
    sub->add_option("--terminals", bnd.terminals, "Terminal count (tau)");
    sub->add_option("--k", bnd.k, "Cut size for the lower-bound epsilon");
    sub->add_option("--p-prime", bnd.p_prime,
                    "Override the connection probability p'");
    sub->add_flag("--curve", bnd.curve, "Also print epsilon(k) for k = 0..n-1");
    sub->add_option("--out", bnd.out_path, "Output path (stdout if empty)");
    bnd.model.add(*sub, true);
    sub->callback([this] { cmd_bounds(); });
  }

  void setup_experiment() {
    auto* sub = app.add_subcommand("experiment", "Monte Carlo capacity experiment");
    sub->add_option("--preset", exp.preset, "Parameter preset")
        ->check(CLI::IsMember({"fig3", "fig4"}));
    exp.n_opt = sub->add_option("--n", exp.n, "Relay count");
    exp.terminals_opt = sub->add_option("--terminals", exp.terminals, "Terminal count");
    sub->add_option("--trials", exp.trials, "Number of graphs");
    sub->add_option("--seed", exp.seed, "Master seed")->envname("QRGG_SEED");
    sub->add_option("--bins", exp.bins, "Equal-width histogram bins");
    sub->add_option("--audit", exp.audit, "Comma-separated epsilons to audit");
    sub->add_option("--audit-k", exp.audit_k, "Comma-separated cut sizes to audit");
    sub->add_flag("--rlnc", exp.rlnc, "Run the coding achievability check per graph");
    sub->add_option("--rlnc-trials", exp.rlnc_trials, "Coding trials per graph");
    sub->add_option("--jobs", exp.jobs, "Worker threads (0: OpenMP default)");
    sub->add_option("--out", exp.out_path, "Result JSON path (stdout if empty)");
    sub->add_option("--csv", exp.csv_path, "Per-trial CSV path");
    sub->add_option("--hist-csv", exp.hist_csv_path, "Histogram CSV path");
    sub->add_option("--svg", exp.svg_path, "Histogram SVG path");
    exp.model.add(*sub, false);
    exp.model.p = 0.5;
    sub->callback([this] { cmd_experiment(); });
  }

  void setup_sweep() {
    auto* sub = app.add_subcommand("sweep", "Capacity over a grid of n and r");
    sub->add_option("--preset", swp.preset, "Parameter preset")
        ->check(CLI::IsMember({"fig5"}));
    sub->add_option("--n-list", swp.n_list, "Comma-separated relay counts");
    sub->add_option("--r-list", swp.r_list, "Comma-separated inner radii");
    sub->add_option("--r-prime-factor", swp.r_prime_factor, "r' = factor * r");
    sub->add_option("--r-prime-offset", swp.r_prime_offset, "r' = r + offset");
    sub->add_option("--r-prime-list", swp.r_prime_list,
                    "Comma-separated r' matching --r-list");
    sub->add_option("--p-connection", swp.p_connection, "Peak annulus probability");
    sub->add_option("--terminals", swp.terminals, "Terminal count");
    sub->add_option("--trials", swp.trials, "Graphs per cell");
    sub->add_option("--seed", swp.seed, "Master seed")->envname("QRGG_SEED");
    sub->add_option("--jobs", swp.jobs, "Worker threads (0: OpenMP default)");
    sub->add_option("--out", swp.out_path, "Result JSON path (stdout if empty)");
    sub->add_option("--csv", swp.csv_path, "Table CSV path");
    sub->callback([this] { cmd_sweep(); });
  }

  void setup_verify() {
    auto* sub = app.add_subcommand("verify-rlnc",
                                   "Random linear coding achievability check");
    rl.source.add(*sub);
    sub->add_option("--trials", rl.trials, "Coefficient draws");
    sub->add_option("--field", rl.field, "Coefficient alphabet")
        ->check(CLI::IsMember({"gf256", "gf2"}));
    sub->add_option("--out", rl.out_path, "Output path (stdout if empty)");
    sub->callback([this] { cmd_verify(); });
  }

  void setup_export() {
    auto* sub = app.add_subcommand("export", "Convert an experiment result to CSV/SVG");
    sub->add_option("--result", ex.result_path, "Experiment result JSON")->required();
    sub->add_option("--csv", ex.csv_path, "Per-trial CSV path");
    sub->add_option("--hist-csv", ex.hist_csv_path, "Histogram CSV path");
    sub->add_option("--svg", ex.svg_path, "Histogram SVG path");
    sub->add_option("--title", ex.title, "SVG title");
    sub->callback([this] { cmd_export(); });
  }

  void cmd_generate() {
    const ConnectionModel model = gen.model.build();
    print_config(err, {{"n", gen.n}, {"terminals", gen.terminals},
                       {"seed", gen.seed}, {"model", to_json(model)},
                       {"out", gen.out_path}});
    const ConnectivityGraph graph = build_connectivity_graph(
        gen.n, gen.terminals, model, RandomStream(gen.seed));
    emit(dump_json(to_json(graph)), gen.out_path, out);
    err << "nodes: " << graph.node_count() << " edges: " << graph.edge_count()
        << "\n";
  }

  void cmd_capacity() {
    const ConnectivityGraph graph = cap.source.load(err);
    nlohmann::json per_terminal = nlohmann::json::array();
    Capacity best = -1;
    for (const CutResult& cut : terminal_min_cuts(graph)) {
      per_terminal.push_back({{"terminal", cut.terminal},
                              {"capacity", cut.capacity},
                              {"k", cut.k},
                              {"partition_vk", cut.partition_vk}});
      if (best < 0 || cut.capacity < best) best = cut.capacity;
    }
    const nlohmann::json report = {{"multicast_capacity", best},
                                   {"per_terminal", per_terminal}};
    emit(dump_json(report), cap.out_path, out);
  }

  void cmd_bounds() {
    const ConnectionModel model = bnd.model.build();
    print_config(err, {{"n", bnd.n}, {"terminals", bnd.terminals}, {"k", bnd.k},
                       {"model", to_json(model)},
                       {"p_prime_override", bnd.p_prime ? nlohmann::json(*bnd.p_prime)
                                                        : nlohmann::json(nullptr)}});
    const BoundReport report =
        bnd.p_prime ? full_report_at(bnd.n, bnd.terminals, model, *bnd.p_prime, bnd.k)
                    : full_report(bnd.n, bnd.terminals, model, bnd.k);
    nlohmann::json j = to_json(report);
    if (bnd.curve) {
      nlohmann::json curve = nlohmann::json::array();
      for (std::size_t k = 0; k < bnd.n; ++k) {
        const CapacityBound b = lower_bound_report(bnd.n, bnd.terminals, report.p_prime, k);
        curve.push_back({{"k", k},
                         {"epsilon", std::isfinite(b.epsilon)
                                         ? nlohmann::json(round_sig6(b.epsilon))
                                         : nlohmann::json(nullptr)}});
      }
      j["epsilon_curve"] = curve;
    }
    emit(dump_json(j), bnd.out_path, out);
  }

  ExperimentConfig resolve_experiment() {
    ExperimentConfig config;
    if (!exp.preset.empty()) {
      config = preset_config(exp.preset);
      if (exp.n_opt->count() > 0) config.n_relays = exp.n;
      if (exp.terminals_opt->count() > 0) config.n_terminals = exp.terminals;
      if (exp.model.p_opt->count() == 0) exp.model.p.reset();
      exp.model.inherit(config.model);
    } else {
      config.n_relays = exp.n;
      config.n_terminals = exp.terminals;
    }
    config.model = exp.model.build();
    config.trials = exp.trials;
    config.master_seed = exp.seed;
    config.histogram_bins = exp.bins;
    config.rlnc_check = exp.rlnc;
    config.rlnc_trials = exp.rlnc_trials;
    if (!exp.audit.empty()) {
      config.audit = AuditSpec{parse_double_list(exp.audit, "--audit"),
                               parse_count_list(exp.audit_k, "--audit-k")};
    }
    validate(config);
    return config;
  }

  void cmd_experiment() {
    const ExperimentConfig config = resolve_experiment();
    nlohmann::json resolved = to_json(config);
    resolved["jobs"] = exp.jobs;
    print_config(err, resolved);
    const ExperimentResult result = run_experiment(config, exp.jobs);
    emit(dump_json(to_json(result)), exp.out_path, out);
    if (!exp.csv_path.empty()) {
      write_file_atomic(exp.csv_path, trials_csv(result.per_trial_capacity));
    }
    if (!exp.hist_csv_path.empty()) {
      write_file_atomic(exp.hist_csv_path, histogram_csv(result.histogram));
    }
    if (!exp.svg_path.empty()) {
      write_file_atomic(exp.svg_path, histogram_svg(result.histogram, svg_title(config)));
    }
    err << "mean capacity " << format_sig6(result.mean) << " over "
        << config.trials << " trials\n";
    if (!audit_passed(result.audit)) {
      err << "audit: observed frequency exceeds bound plus sampling slack\n";
      status = kExitAuditViolation;
    }
  }

  static std::string svg_title(const ExperimentConfig& c) {
    return "n=" + std::to_string(c.n_relays) + ", r=" + format_sig6(c.model.r()) +
           ", r'=" + format_sig6(c.model.r_prime());
  }

  void cmd_sweep() {
    SweepConfig config;
    if (!swp.preset.empty()) config = sweep_preset();
    auto given = [this](const char* name) {
      return app.get_subcommand("sweep")->get_option(name)->count() > 0;
    };
    if (swp.preset.empty() || given("--n-list")) {
      config.n_list = parse_count_list(swp.n_list, "--n-list");
    }
    if (swp.preset.empty() || given("--r-list")) {
      config.r_list = parse_double_list(swp.r_list, "--r-list");
    }
    const bool rule_given = swp.r_prime_factor || swp.r_prime_offset ||
                            !swp.r_prime_list.empty();
    if (rule_given) {
      config.r_prime_factor = swp.r_prime_factor;
      config.r_prime_offset = swp.r_prime_offset;
      config.r_prime_list = parse_double_list(swp.r_prime_list, "--r-prime-list");
    } else if (swp.preset.empty()) {
      config.r_prime_factor = 1.8;
    }
    if (swp.preset.empty() || given("--p-connection")) config.p_connection = swp.p_connection;
    if (swp.preset.empty() || given("--trials")) config.trials = swp.trials;
    config.n_terminals = swp.terminals;
    config.master_seed = swp.seed;
    nlohmann::json resolved = to_json(config);
    resolved["jobs"] = swp.jobs;
    print_config(err, resolved);
    const std::vector<SweepRow> rows = run_sweep(config, swp.jobs);
    const nlohmann::json report = {
        {"config", to_json(config)},
        {"rows", to_json(rows)},
        {"provenance",
         {{"tool_version", kToolVersion},
          {"notes", {"r' rule and p_connection are chosen, not taken from a figure"}}}}};
    emit(dump_json(report), swp.out_path, out);
    if (!swp.csv_path.empty()) write_file_atomic(swp.csv_path, sweep_csv(rows));
  }

  void cmd_verify() {
    const ConnectivityGraph graph = rl.source.load(err);
    const CoefficientField field =
        rl.field == "gf2" ? CoefficientField::kGf2 : CoefficientField::kGf256;
    print_config(err, {{"trials", rl.trials}, {"seed", rl.source.seed},
                       {"field", rl.field}});
    const AchievabilityReport report = verify_achievability(
        graph, rl.trials, RandomStream(rl.source.seed).child("coding", 0), field);
    emit(dump_json(to_json(report)), rl.out_path, out);
  }

  void cmd_export() {
    print_config(err, {{"result", ex.result_path}});
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(ex.result_path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedInput, ex.result_path + ": " + e.what());
    }
    try {
      Histogram h;
      h.edges = j.at("histogram").at("bin_edges").get<std::vector<double>>();
      h.counts = j.at("histogram").at("counts").get<std::vector<std::size_t>>();
      const auto capacities = j.at("per_trial_capacity").get<std::vector<Capacity>>();
      if (h.edges.size() != h.counts.size() + 1) {
        throw Error(ErrorCode::kMalformedInput, "histogram edges/counts mismatch");
      }
      if (!ex.csv_path.empty()) write_file_atomic(ex.csv_path, trials_csv(capacities));
      if (!ex.hist_csv_path.empty()) write_file_atomic(ex.hist_csv_path, histogram_csv(h));
      if (!ex.svg_path.empty()) write_file_atomic(ex.svg_path, histogram_svg(h, ex.title));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedInput, ex.result_path + ": " + e.what());
    }
  }
};

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::kIo ? kExitRuntime : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Cli cli(out, err);
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("qrgg");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    cli.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << cli.app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
  return cli.status;
}

}  // namespace qrgg
