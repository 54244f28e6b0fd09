// Command-line front end: analytic delay formulas, the two discrete-event
// simulators, and the published-table comparison experiments, all emitting
// deterministic CSV.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rps/dcf.hpp"
#include "rps/dcf_sim.hpp"
#include "rps/errors.hpp"
#include "rps/io/config.hpp"
#include "rps/io/csv.hpp"
#include "rps/polling.hpp"
#include "rps/polling_sim.hpp"
#include "rps/reference_tables.hpp"
#include "rps/sim/replications.hpp"
#include "rps/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInstability = 3;
constexpr int kExitSolver = 4;

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  int reps = 30;
  std::string out_path;
  double horizon_s = 1000.0;
  double warmup_s = 50.0;
};

Eigen::ArrayXd parse_rates(const std::string& csv) {
  std::vector<double> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw rps::ConfigError("bad rate list entry: '" + item + "'");
    }
  }
  if (v.empty()) throw rps::ConfigError("empty rate list");
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), v.size());
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw rps::ConfigError("bad integer list entry: '" + item + "'");
    }
  }
  if (v.empty()) throw rps::ConfigError("empty integer list");
  return v;
}

rps::dcf::DcfParams load_params(const CommonOpts& opts) {
  if (opts.config_path.empty()) return rps::dcf::DcfParams{};
  return rps::io::load_dcf_params(opts.config_path);
}

void stamp(rps::io::CsvWriter& csv, const CommonOpts& opts,
           const nlohmann::json& config) {
  csv.meta("version", rps::kVersion);
  csv.meta("seed", opts.seed);
  csv.meta("reps", static_cast<std::uint64_t>(opts.reps));
  csv.meta("horizon_s", opts.horizon_s);
  csv.meta("warmup_s", opts.warmup_s);
  csv.meta("config_hash", rps::io::config_hash(config));
}

void emit(const rps::io::CsvWriter& csv, const CommonOpts& opts) {
  if (opts.out_path.empty()) {
    std::cout << csv.str();
  } else {
    csv.write(opts.out_path);
    std::cerr << "wrote " << opts.out_path << "\n";
  }
}

// ---------------------------------------------------------------------------

int cmd_fixed_point(const CommonOpts& opts, int n, double tol) {
  const auto params = load_params(opts);
  const auto sol = rps::dcf::solve_fixed_point(n, params, tol);
  std::fprintf(stderr, "n=%d  beta=%.10f  p=%.10f  residual=%.3e  iters=%d\n",
               n, sol.beta, sol.p, sol.residual, sol.iterations);
  rps::io::CsvWriter csv;
  stamp(csv, opts, rps::io::to_json(params));
  csv.header({"n", "beta", "p", "residual", "iterations"});
  csv.cell(n).cell(sol.beta).cell(sol.p).cell(sol.residual).cell(
      sol.iterations);
  csv.end_row();
  emit(csv, opts);
  return kExitOk;
}

int cmd_throughput(const CommonOpts& opts, int n_min, int n_max) {
  const auto params = load_params(opts);
  const auto curve = rps::dcf::throughput_curve(n_min, n_max, params);
  rps::io::CsvWriter csv;
  stamp(csv, opts, rps::io::to_json(params));
  csv.header({"n", "throughput_pps"});
  for (const auto& pt : curve) {
    csv.cell(pt.n).cell(pt.throughput_pps);
    csv.end_row();
  }
  emit(csv, opts);
  return kExitOk;
}

int cmd_analytic_delay(const CommonOpts& opts, const std::string& lambda_csv,
                       double c_override, bool use_computed_c,
                       double epsilon_s) {
  const auto lambda = parse_rates(lambda_csv);
  const auto params = load_params(opts);
  const double capacity =
      use_computed_c
          ? rps::dcf::aggregate_throughput(static_cast<int>(lambda.size()),
                                           params)
          : c_override;

  rps::io::CsvWriter csv;
  nlohmann::json meta_cfg = {{"lambda", std::vector<double>(
                                  lambda.data(), lambda.data() + lambda.size())},
                             {"capacity_pps", capacity},
                             {"epsilon_s", epsilon_s}};
  stamp(csv, opts, meta_cfg);
  csv.meta("capacity_pps", capacity);

  if (epsilon_s > 0.0) {
    const auto cfg = rps::polling::wlan_config(lambda, capacity, epsilon_s);
    const auto rep = rps::polling::delay_report(cfg);
    csv.header({"queue_id", "lambda", "e_w_s", "e_q_pkts", "p_nonempty"});
    for (int i = 0; i < cfg.n(); ++i) {
      csv.cell(i).cell(lambda(i)).cell(rep.e_w(i)).cell(rep.e_q(i)).cell(
          rep.p_nonempty(i));
      csv.end_row();
    }
    std::fprintf(stderr, "mean delay (queue 0): %.4f ms\n", rep.e_w(0) * 1e3);
  } else {
    const double ew = rps::polling::mean_delay_zero_switchover(lambda, capacity);
    const double rho = lambda.sum() / capacity;
    csv.header({"aggregate_lambda", "capacity_pps", "rho", "mean_delay_s",
                "mean_delay_ms"});
    csv.cell(lambda.sum()).cell(capacity).cell(rho).cell(ew).cell(ew * 1e3);
    csv.end_row();
    std::fprintf(stderr, "mean delay: %.4f ms (rho = %.5f)\n", ew * 1e3, rho);
  }
  emit(csv, opts);
  return kExitOk;
}

int cmd_sim_polling(const CommonOpts& opts, const std::string& lambda_csv,
                    double c_override, double epsilon_s,
                    const std::string& mode_name,
                    const std::string& service_dist,
                    const std::string& switch_dist) {
  rps::pollsim::PollingSimConfig cfg;
  if (!opts.config_path.empty()) {
    cfg.base = rps::io::load_polling_config(opts.config_path);
  } else if (!lambda_csv.empty()) {
    cfg.base = rps::polling::wlan_config(parse_rates(lambda_csv), c_override,
                                         epsilon_s);
  } else {
    throw rps::ConfigError("sim-polling needs --config or --lambda");
  }
  cfg.mode = mode_name == "lee" ? rps::pollsim::Mode::lee
                                : rps::pollsim::Mode::zero_switchover;
  cfg.service_dist = service_dist == "exp"
                         ? rps::pollsim::Dist::exponential
                         : rps::pollsim::Dist::deterministic;
  cfg.switch_dist = switch_dist == "exp" ? rps::pollsim::Dist::exponential
                                         : rps::pollsim::Dist::deterministic;
  cfg.horizon_s = opts.horizon_s;
  cfg.warmup_s = opts.warmup_s;
  cfg.validate();

  const auto summary =
      rps::pollsim::run_polling_replications(cfg, opts.reps, opts.seed);

  rps::io::CsvWriter csv;
  stamp(csv, opts, rps::io::to_json(cfg.base));
  csv.meta("mode", mode_name);
  csv.header({"queue_id", "lambda", "mean_sojourn_s", "ci_halfwidth_s",
              "mean_qlen", "p_nonempty"});
  for (int i = 0; i < cfg.base.n(); ++i) {
    const auto ci = rps::sim::ci95(summary.sojourn[i]);
    csv.cell(i)
        .cell(cfg.base.lambda(i))
        .cell(ci.mean)
        .cell(ci.halfwidth)
        .cell(summary.qlen[i].mean)
        .cell(summary.nonempty[i].mean);
    csv.end_row();
  }
  emit(csv, opts);
  return kExitOk;
}

int cmd_sim_dcf(const CommonOpts& opts, int n, const std::string& lambda_csv,
                bool saturated) {
  rps::dcfsim::DcfSimConfig cfg;
  cfg.n = n;
  cfg.params = load_params(opts);
  cfg.horizon_s = opts.horizon_s;
  cfg.warmup_s = opts.warmup_s;
  if (saturated) {
    cfg.traffic = rps::dcfsim::Traffic::saturated;
  } else {
    if (lambda_csv.empty())
      throw rps::ConfigError("sim-dcf needs --lambda or --saturated");
    cfg.traffic = rps::dcfsim::Traffic::poisson;
    cfg.lambda = parse_rates(lambda_csv);
    if (cfg.lambda.size() == 1 && n > 1)
      cfg.lambda = Eigen::ArrayXd::Constant(n, cfg.lambda(0));
    cfg.n = static_cast<int>(cfg.lambda.size());
  }
  cfg.validate();

  const auto summary =
      rps::dcfsim::run_dcf_replications(cfg, opts.reps, opts.seed);

  rps::io::CsvWriter csv;
  stamp(csv, opts, rps::io::to_json(cfg.params));
  if (saturated) {
    const auto fp = rps::dcf::solve_fixed_point(cfg.n, cfg.params);
    const double model_tput = rps::dcf::aggregate_throughput(cfg.n, cfg.params);
    csv.header({"n", "beta_hat", "p_hat", "throughput_pps", "beta_model",
                "p_model", "throughput_model_pps"});
    csv.cell(cfg.n)
        .cell(summary.beta_hat.mean)
        .cell(summary.p_hat.mean)
        .cell(summary.aggregate_throughput.mean)
        .cell(fp.beta)
        .cell(fp.p)
        .cell(model_tput);
    csv.end_row();
    std::fprintf(stderr,
                 "saturated n=%d: p_hat=%.5f (model %.5f), S=%.2f pkts/s "
                 "(model %.2f)\n",
                 cfg.n, summary.p_hat.mean, fp.p,
                 summary.aggregate_throughput.mean, model_tput);
  } else {
    csv.header({"node_id", "lambda", "mean_delay_s", "ci_halfwidth_s",
                "throughput_pps"});
    for (int i = 0; i < cfg.n; ++i) {
      const auto ci = rps::sim::ci95(summary.sojourn[i]);
      csv.cell(i)
          .cell(cfg.lambda(i))
          .cell(ci.mean)
          .cell(ci.halfwidth)
          .cell(summary.throughput[i].mean);
      csv.end_row();
    }
  }
  emit(csv, opts);
  return kExitOk;
}

int cmd_table(const CommonOpts& opts, int table_id, double c_override,
              bool use_computed_c) {
  const auto& table = rps::reftab::reference_table(table_id);
  const auto params = load_params(opts);
  const double c_computed =
      rps::dcf::aggregate_throughput(table.n_nodes, params);
  const double c_analytic = use_computed_c ? c_computed : c_override;

  rps::io::CsvWriter csv;
  stamp(csv, opts, rps::io::to_json(params));
  csv.meta("table", static_cast<std::uint64_t>(table_id));
  csv.meta("c_analytic_pps", c_analytic);
  csv.meta("c_computed_pps", c_computed);
  csv.header({"table_row", "node_id", "lambda", "sim_ms", "ci_ms",
              "analytic_ms", "published_sim_ms", "published_analytic_ms"});

  std::printf("Table %d (%d nodes, C = %.2f pkts/s for the closed form)\n",
              table_id, table.n_nodes, c_analytic);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    rps::dcfsim::DcfSimConfig cfg;
    cfg.n = table.n_nodes;
    cfg.params = params;
    cfg.traffic = rps::dcfsim::Traffic::poisson;
    cfg.lambda = Eigen::Map<const Eigen::ArrayXd>(row.lambda.data(),
                                                  row.lambda.size());
    cfg.horizon_s = opts.horizon_s;
    cfg.warmup_s = opts.warmup_s;
    const double analytic_ms =
        rps::polling::mean_delay_zero_switchover(cfg.lambda, c_analytic) * 1e3;
    const auto summary = rps::dcfsim::run_dcf_replications(
        cfg, opts.reps, opts.seed + static_cast<std::uint64_t>(r) * kGolden);
    std::printf("  row %zu: lambda = (", r + 1);
    for (int i = 0; i < cfg.n; ++i)
      std::printf("%s%.1f", i ? ", " : "", cfg.lambda(i));
    std::printf(")\n");
    for (int i = 0; i < cfg.n; ++i) {
      const auto ci = rps::sim::ci95(summary.sojourn[i]);
      std::printf(
          "    node %d: sim %.2f +- %.2f ms | analytic %.2f ms | published "
          "sim %.1f ms, analytic %.1f ms\n",
          i, ci.mean * 1e3, ci.halfwidth * 1e3, analytic_ms,
          row.published_sim_ms[i], row.published_analytic_ms);
      csv.cell(static_cast<int>(r + 1))
          .cell(i)
          .cell(cfg.lambda(i))
          .cell(ci.mean * 1e3)
          .cell(ci.halfwidth * 1e3)
          .cell(analytic_ms)
          .cell(row.published_sim_ms[i])
          .cell(row.published_analytic_ms);
      csv.end_row();
    }
  }
  emit(csv, opts);
  return kExitOk;
}

int emit_sweep(const CommonOpts& opts, const rps::dcf::DcfParams& params,
               const std::vector<rps::dcfsim::SweepRow>& rows,
               std::string_view x_name) {
  rps::io::CsvWriter csv;
  stamp(csv, opts, rps::io::to_json(params));
  csv.header({x_name, "sim_ms", "ci_ms", "analytic_ms", "status"});
  for (const auto& row : rows) {
    csv.cell(row.x)
        .cell(row.sim_delay_ms)
        .cell(row.ci_halfwidth_ms)
        .cell(row.analytic_ms)
        .cell(row.stable ? "ok" : "unstable");
    csv.end_row();
  }
  emit(csv, opts);
  return kExitOk;
}

int cmd_sweep_lambda(const CommonOpts& opts, int n,
                     const std::string& grid_csv) {
  const auto params = load_params(opts);
  const auto grid = parse_rates(grid_csv);
  const auto rows = rps::dcfsim::delay_vs_load_sweep(
      n, grid, params, opts.reps, opts.seed, opts.horizon_s, opts.warmup_s);
  return emit_sweep(opts, params, rows, "lambda");
}

int cmd_sweep_n(const CommonOpts& opts, double lambda_per_node,
                const std::string& grid_csv) {
  const auto params = load_params(opts);
  const auto grid = parse_int_list(grid_csv);
  const auto rows = rps::dcfsim::delay_vs_n_sweep(lambda_per_node, grid,
                                                  params, opts.reps, opts.seed,
                                                  opts.horizon_s, opts.warmup_s);
  return emit_sweep(opts, params, rows, "n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-delay analysis of a single-cell DCF WLAN via a "
               "1-limited random polling model, with built-in simulators"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "JSON config file")
      ->expected(1);
  app.add_option("--seed", opts.seed, "master RNG seed");
  app.add_option("--reps", opts.reps, "independent replications")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out_path, "output CSV path (default stdout)");
  app.add_option("--horizon", opts.horizon_s, "simulated seconds per run");
  app.add_option("--warmup", opts.warmup_s, "warmup seconds per run");

  int n = 3;
  double tol = 1e-9;
  auto* fixed_point = app.add_subcommand("fixed-point",
                                         "attempt-probability fixed point");
  fixed_point->add_option("--n", n, "contending nodes")->required();
  fixed_point->add_option("--tol", tol, "bisection tolerance");

  int n_min = 2, n_max = 30;
  auto* throughput =
      app.add_subcommand("throughput", "saturation throughput curve");
  throughput->add_option("--n-min", n_min, "first n");
  throughput->add_option("--n-max", n_max, "last n");

  std::string lambda_csv;
  double c_override = 72.5;
  bool use_computed_c = false;
  double epsilon_s = 0.0;
  auto* analytic = app.add_subcommand(
      "analytic-delay", "closed-form mean delay for given arrival rates");
  analytic->add_option("--lambda", lambda_csv, "per-queue rates, pkts/s")
      ->required();
  analytic->add_option("--c-override", c_override, "capacity C (pkts/s)");
  analytic->add_flag("--use-computed-c", use_computed_c,
                     "use the computed C(n) instead of --c-override");
  analytic->add_option("--epsilon", epsilon_s,
                       "switchover (s); > 0 selects the general formulas");

  std::string mode_name = "zero", service_dist = "det", switch_dist = "det";
  auto* sim_polling =
      app.add_subcommand("sim-polling", "random polling system simulator");
  sim_polling->add_option("--lambda", lambda_csv, "per-queue rates, pkts/s");
  sim_polling->add_option("--c-override", c_override,
                          "capacity C used for service times");
  sim_polling->add_option("--epsilon", epsilon_s, "switchover mean (s)");
  sim_polling->add_option("--mode", mode_name, "zero | lee")
      ->check(CLI::IsMember({"zero", "lee"}));
  sim_polling->add_option("--service-dist", service_dist, "det | exp")
      ->check(CLI::IsMember({"det", "exp"}));
  sim_polling->add_option("--switch-dist", switch_dist, "det | exp")
      ->check(CLI::IsMember({"det", "exp"}));

  bool saturated = false;
  auto* sim_dcf = app.add_subcommand("sim-dcf", "slot-level DCF simulator");
  sim_dcf->add_option("--n", n, "number of nodes");
  sim_dcf->add_option("--lambda", lambda_csv,
                      "per-node rates (single value repeats across nodes)");
  sim_dcf->add_flag("--saturated", saturated, "saturated traffic");

  int table_id = 1;
  auto* table =
      app.add_subcommand("table", "reproduce a published comparison table");
  table->add_option("--table", table_id, "table id 1..4")
      ->check(CLI::Range(1, 4))
      ->required();
  table->add_option("--c-override", c_override,
                    "capacity for the closed form (default 72.5)");
  table->add_flag("--use-computed-c", use_computed_c,
                  "use computed C(n) for the closed form");

  std::string grid_csv;
  auto* sweep_lambda = app.add_subcommand(
      "sweep-lambda", "mean delay vs per-node arrival rate at fixed n");
  sweep_lambda->add_option("--n", n, "number of nodes");
  sweep_lambda->add_option("--lambda", grid_csv, "rate grid, pkts/s")
      ->required();

  double lambda_per_node = 10.0;
  auto* sweep_n =
      app.add_subcommand("sweep-n", "mean delay vs n at fixed per-node rate");
  sweep_n->add_option("--lambda", lambda_per_node, "per-node rate, pkts/s");
  sweep_n->add_option("--n-grid", grid_csv, "list of n values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (app.got_subcommand(fixed_point)) return cmd_fixed_point(opts, n, tol);
    if (app.got_subcommand(throughput))
      return cmd_throughput(opts, n_min, n_max);
    if (app.got_subcommand(analytic))
      return cmd_analytic_delay(opts, lambda_csv, c_override, use_computed_c,
                                epsilon_s);
    if (app.got_subcommand(sim_polling))
      return cmd_sim_polling(opts, lambda_csv, c_override, epsilon_s,
                             mode_name, service_dist, switch_dist);
    if (app.got_subcommand(sim_dcf))
      return cmd_sim_dcf(opts, n, lambda_csv, saturated);
    if (app.got_subcommand(table))
      return cmd_table(opts, table_id, c_override, use_computed_c);
    if (app.got_subcommand(sweep_lambda))
      return cmd_sweep_lambda(opts, n, grid_csv);
    if (app.got_subcommand(sweep_n))
      return cmd_sweep_n(opts, lambda_per_node, grid_csv);
  } catch (const rps::InstabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kExitInstability;
  } catch (const rps::FeasibilityError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInstability;
  } catch (const rps::SolverError& e) {
    std::cerr << "solver: " << e.what() << "\n";
    return kExitSolver;
  } catch (const rps::ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
