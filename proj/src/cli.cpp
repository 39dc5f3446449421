#include "lrcov/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "lrcov/io.hpp"
#include "lrcov/regularize.hpp"
#include "lrcov/simulate.hpp"

namespace lrcov {

namespace {

struct Options {
  std::string command;
  std::string input;
  std::string output;
  std::string matrix_output;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string estimator = "db";
  std::string estimators = "HAC,MAC,DB,Hard,Soft,Taper";
  std::string kernel = "k2";
  std::string model = "tri";
  std::size_t n = 200;
  std::size_t p = 300;
  double phi = 0.5;
  std::optional<double> param;
  std::size_t burn_in = 200;
  std::size_t mean_coords = 20;
  std::size_t replications = 100;
  std::size_t bandwidth = 0;
  std::size_t spacing = 0;
  std::optional<double> tau;
  std::optional<std::size_t> taper_k;
  bool tune = false;
  std::size_t cv_reps = 50;
  double train_frac = 0.6;
  double valid_frac = 0.3;
  std::size_t hac_bandwidth = kSimulationHacBandwidth;
  std::size_t obm_batch = 0;
  double mac_c0 = 2.0;
  double mac_c1 = 1.0;
  double trim = 0.05;
  std::string format = "markdown";
  bool check_decomposition = false;
};

KernelSpec parse_kernel(const std::string& name) {
  if (name == "k2") return KernelSpec::truncated_polynomial(2.0);
  if (name == "bartlett") return KernelSpec::bartlett();
  if (name == "qs") return KernelSpec::quadratic_spectral();
  throw ConfigError("unknown kernel '" + name + "' (expected k2, bartlett or qs)");
}

ModelKind parse_model(const std::string& name) {
  for (ModelKind kind : {ModelKind::Tridiagonal, ModelKind::Toeplitz, ModelKind::PermutedBlock}) {
    if (model_name(kind) == name) return kind;
  }
  throw ConfigError("unknown model '" + name + "' (expected tri, toeplitz or permblock)");
}

std::vector<EstimatorId> parse_estimator_list(const std::string& list) {
  std::vector<EstimatorId> ids;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](char c) { return c == ' '; }),
               item.end());
    if (!item.empty()) ids.push_back(parse_estimator(item));
  }
  return ids;
}

CvPlan make_plan(const Options& o) {
  CvPlan plan;
  plan.repetitions = o.cv_reps;
  plan.train_frac = o.train_frac;
  plan.valid_frac = o.valid_frac;
  plan.seed = o.seed;
  return plan;
}

DiffConfig make_diff(const Options& o, std::size_t n, std::size_t p) {
  const KernelSpec kernel = parse_kernel(o.kernel);
  if (o.bandwidth == 0 && o.spacing == 0) {
    const DiffConfig base = DiffConfig::standard(n, p);
    return DiffConfig(base.d(), base.spacing(), base.bandwidth(), kernel);
  }
  const std::size_t ell = o.bandwidth ? o.bandwidth : default_bandwidth(n, p);
  const std::size_t h = o.spacing ? o.spacing : 2 * ell;
  DiffConfig cfg(standard_diff_sequence(), h, ell, kernel);
  cfg.check_fits(n);
  return cfg;
}

bool is_regularized(EstimatorId id) {
  return id == EstimatorId::Hard || id == EstimatorId::Soft || id == EstimatorId::Taper;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

// DB pilot followed by the requested regularizer; logs the tuning choice.
CovMatrix regularized_estimate(const Options& o, const TimeSeriesPanel& panel, EstimatorId id,
                               std::ostream& err) {
  const DiffConfig diff = make_diff(o, panel.n(), panel.p());
  const CovMatrix db = db_estimate(panel, diff);
  err << "bandwidth=" << diff.bandwidth() << " spacing=" << diff.spacing() << '\n';
  if (id == EstimatorId::Taper) {
    std::size_t k = 0;
    if (o.taper_k && !o.tune) {
      k = *o.taper_k;
    } else {
      k = static_cast<std::size_t>(cv_select_taper(panel, diff, make_plan(o)).selected);
    }
    err << "taper_k=" << k << '\n';
    return taper(db, k);
  }
  const bool hard = id == EstimatorId::Hard;
  double tau = 0.0;
  if (o.tau && !o.tune) {
    tau = *o.tau;
  } else {
    tau = cv_select_threshold(panel, diff, make_plan(o),
                              hard ? ThresholdRule::Hard : ThresholdRule::Soft)
              .selected;
  }
  err << "tau=" << format_number(tau) << '\n';
  return hard ? hard_threshold(db, tau) : soft_threshold(db, tau);
}

TimeSeriesPanel require_panel(const Options& o) {
  if (o.input.empty()) throw ConfigError("--input is required for '" + o.command + "'");
  return load_panel(o.input);
}

int cmd_estimate(const Options& o, std::ostream& err) {
  const TimeSeriesPanel panel = require_panel(o);
  const std::size_t n = panel.n();
  const std::size_t p = panel.p();
  const EstimatorId id = parse_estimator(o.estimator);
  const auto ell = [&] { return o.bandwidth ? o.bandwidth : default_bandwidth(n, p); };
  std::optional<CovMatrix> est;
  switch (id) {
    case EstimatorId::Db: {
      const DiffConfig diff = make_diff(o, n, p);
      err << "bandwidth=" << diff.bandwidth() << " spacing=" << diff.spacing() << '\n';
      est = db_estimate(panel, diff);
      break;
    }
    case EstimatorId::Hac:
      err << "bandwidth=" << ell() << '\n';
      est = hac_estimate(panel, parse_kernel(o.kernel), ell());
      break;
    case EstimatorId::Mac:
      err << "bandwidth=" << ell() << '\n';
      est = mac_estimate(panel, ell(), MacParams{2.0, o.mac_c0, o.mac_c1});
      break;
    case EstimatorId::Obm: {
      const std::size_t batch = o.obm_batch ? o.obm_batch : default_obm_batch(n);
      err << "batch=" << batch << '\n';
      est = obm_estimate(panel, batch);
      break;
    }
    case EstimatorId::Qs:
      err << "bandwidth=" << ell() << '\n';
      est = qs_estimate(panel, ell());
      break;
    case EstimatorId::Hard:
    case EstimatorId::Soft:
    case EstimatorId::Taper:
      est = regularized_estimate(o, panel, id, err);
      break;
  }
  std::ofstream out = open_output(o.output);
  write_matrix_csv(out, est->values());
  return 0;
}

int cmd_tune(const Options& o, std::ostream& out, std::ostream& err) {
  const TimeSeriesPanel panel = require_panel(o);
  const EstimatorId id = parse_estimator(o.estimator);
  if (!is_regularized(id)) throw ConfigError("tune needs --estimator hard, soft or taper");
  const DiffConfig diff = make_diff(o, panel.n(), panel.p());
  err << "bandwidth=" << diff.bandwidth() << " spacing=" << diff.spacing() << '\n';
  const CvResult result =
      id == EstimatorId::Taper
          ? cv_select_taper(panel, diff, make_plan(o))
          : cv_select_threshold(panel, diff, make_plan(o),
                                id == EstimatorId::Hard ? ThresholdRule::Hard : ThresholdRule::Soft);
  std::ofstream file = open_output(o.output);
  file << "candidate,loss\n";
  for (const auto& [candidate, loss] : result.criterion) {
    file << format_full(candidate) << ',' << format_full(loss) << '\n';
  }
  out << "selected," << format_full(result.selected) << '\n';
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  McConfig cfg;
  cfg.model.kind = parse_model(o.model);
  cfg.model.param = o.param ? *o.param : (cfg.model.kind == ModelKind::Tridiagonal ? 0.5 : 0.7);
  cfg.model.n = o.n;
  cfg.model.p = o.p;
  cfg.model.phi = o.phi;
  cfg.model.burn_in = o.burn_in;
  cfg.model.mean_coords = o.mean_coords;
  cfg.replications = o.replications;
  cfg.estimators = parse_estimator_list(o.estimators);
  if (o.bandwidth || o.spacing || o.kernel != "k2") cfg.diff = make_diff(o, o.n, o.p);
  cfg.tuning.cross_validate = o.tune || (!o.tau && !o.taper_k);
  cfg.tuning.plan = make_plan(o);
  if (!cfg.tuning.cross_validate) {
    const bool thresholds = std::any_of(cfg.estimators.begin(), cfg.estimators.end(), [](auto id) {
      return id == EstimatorId::Hard || id == EstimatorId::Soft;
    });
    const bool tapers = std::count(cfg.estimators.begin(), cfg.estimators.end(),
                                   EstimatorId::Taper) > 0;
    if (thresholds && !o.tau) throw ConfigError("fixed tuning needs --tau");
    if (tapers && !o.taper_k) throw ConfigError("fixed tuning needs --taper-k");
    cfg.tuning.hard_tau = cfg.tuning.soft_tau = o.tau.value_or(0.0);
    cfg.tuning.taper_k = o.taper_k.value_or(1);
  }
  cfg.hac_bandwidth = o.hac_bandwidth;
  cfg.mac = MacParams{2.0, o.mac_c0, o.mac_c1};
  cfg.obm_batch = o.obm_batch;
  cfg.base_seed = o.seed;
  cfg.check_decomposition = o.check_decomposition;

  const McSummary summary = run_monte_carlo(cfg);
  std::ofstream file = open_output(o.output);
  write_results_csv(file, summary.rows);
  write_results_table(out, summary.rows,
                      o.format == "csv" ? TableFormat::Csv : TableFormat::Markdown);
  err << "replications=" << cfg.replications << " failures=" << summary.failure_count << '\n';
  for (std::size_t i = 0; i < summary.rows.size(); ++i) {
    const EstimatorSummary& row = summary.rows[i];
    if (row.failures == 0) continue;
    err << estimator_name(row.id) << ": " << row.failures << " failed replications";
    for (const ReplicationRecord& rec : summary.replications) {
      const std::string& why = !rec.error.empty() ? rec.error : rec.outcomes[i].error;
      if (!why.empty()) {
        err << " (first: " << why << ')';
        break;
      }
    }
    err << '\n';
  }
  if (cfg.check_decomposition) {
    double worst = 0.0;
    for (const ReplicationRecord& rec : summary.replications) {
      worst = std::max(worst, rec.decomposition_residual);
    }
    err << "decomposition_residual_max=" << format_full(worst) << '\n';
  }
  return 0;
}

int cmd_changepoint(const Options& o, std::ostream& out, std::ostream& err, bool estimator_set) {
  const TimeSeriesPanel panel = require_panel(o);
  const EstimatorId id = estimator_set ? parse_estimator(o.estimator) : EstimatorId::Taper;
  if (!is_regularized(id)) throw ConfigError("changepoint needs --estimator hard, soft or taper");
  const CovMatrix v = regularized_estimate(o, panel, id, err);
  const ScanResult scan = cusum_scan(panel, v, o.trim);
  std::ofstream file = open_output(o.output);
  file << "k,statistic\n";
  for (const auto& [k, stat] : scan.path) file << k << ',' << format_full(stat) << '\n';
  if (!o.matrix_output.empty()) write_matrix_csv(o.matrix_output, v.values());
  out << "k_hat," << scan.k_hat << '\n' << "omega_hat," << format_full(scan.omega) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"High-dimensional long-run covariance estimation", "lrcov"};
  app.set_config("--config", "", "Flat key = value configuration file; flags take precedence");
  app.add_option("command", o.command, "estimate, tune, simulate or changepoint")
      ->required()
      ->check(CLI::IsMember({"estimate", "tune", "simulate", "changepoint"}));
  app.add_option("--input", o.input, "Input panel CSV (rows = time)");
  app.add_option("--output", o.output, "Output CSV path")->required();
  app.add_option("--matrix-output", o.matrix_output, "changepoint: write the plug-in matrix");
  app.add_option("--seed", o.seed, "Base random seed");
  app.add_option("--threads", o.threads, "Worker thread cap (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  auto* estimator_opt =
      app.add_option("--estimator", o.estimator, "db, hac, mac, obm, qs, hard, soft or taper");
  app.add_option("--estimators", o.estimators, "simulate: comma-separated estimator list");
  app.add_option("--kernel", o.kernel, "Lag window for DB and HAC: k2, bartlett or qs");
  app.add_option("--model", o.model, "simulate: tri, toeplitz or permblock");
  app.add_option("--n", o.n, "simulate: series length");
  app.add_option("--p", o.p, "simulate: dimension");
  app.add_option("--phi", o.phi, "simulate: AR(1) coefficient");
  app.add_option("--param,--rho", o.param, "simulate: model parameter (a or rho)");
  app.add_option("--burn-in", o.burn_in, "simulate: discarded leading draws");
  app.add_option("--mean-coords", o.mean_coords, "simulate: coordinates carrying the mean");
  app.add_option("--replications", o.replications, "simulate: Monte Carlo replications");
  app.add_option("--bandwidth", o.bandwidth, "Kernel bandwidth (0: default rule)");
  app.add_option("--spacing", o.spacing, "DB lag spacing h (0: twice the bandwidth)");
  app.add_option("--tau", o.tau, "Fixed threshold for hard or soft");
  app.add_option("--taper-k", o.taper_k, "Fixed taper bandwidth");
  app.add_flag("--tune", o.tune, "Select tau or k by cross-validation");
  app.add_option("--cv-reps", o.cv_reps, "Cross-validation repetitions");
  app.add_option("--train-frac", o.train_frac, "Cross-validation training fraction");
  app.add_option("--valid-frac", o.valid_frac, "Cross-validation validation fraction");
  app.add_option("--hac-bandwidth", o.hac_bandwidth, "simulate: HAC lag window");
  app.add_option("--obm-batch", o.obm_batch, "OBM batch size (0: default rule)");
  app.add_option("--mac-c0", o.mac_c0, "MAC per-lag bandwidth intercept");
  app.add_option("--mac-c1", o.mac_c1, "MAC per-lag bandwidth slope");
  app.add_option("--trim", o.trim, "changepoint: trimmed fraction at each end");
  app.add_option("--format", o.format, "simulate: stdout table format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app.add_flag("--check-decomposition", o.check_decomposition,
               "simulate: verify the mean decomposition on every replication");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (o.threads > 0) omp_set_num_threads(o.threads);
    if (o.command == "estimate") return cmd_estimate(o, err);
    if (o.command == "tune") return cmd_tune(o, out, err);
    if (o.command == "simulate") return cmd_simulate(o, out, err);
    return cmd_changepoint(o, out, err, estimator_opt->count() > 0);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lrcov
