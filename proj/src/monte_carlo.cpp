#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>

#include <omp.h>

#include "lrcov/random.hpp"
#include "lrcov/regularize.hpp"
#include "lrcov/simulate.hpp"

namespace lrcov {

namespace {

constexpr std::uint64_t kCvStream = 3;

using Field = double ErrorReport::*;
constexpr std::array<Field, 8> kFields{&ErrorReport::frob,     &ErrorReport::l1,
                                       &ErrorReport::max,      &ErrorReport::spectral,
                                       &ErrorReport::rel_frob, &ErrorReport::rel_l1,
                                       &ErrorReport::rel_max,  &ErrorReport::rel_spectral};

// Pairwise summation over a fixed split tree: bitwise reproducible for a
// given input order.
double pairwise_sum(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  if (end - begin <= 8) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum(v, begin, mid) + pairwise_sum(v, mid, end);
}

bool needs_db(EstimatorId id) {
  return id == EstimatorId::Db || id == EstimatorId::Hard || id == EstimatorId::Soft ||
         id == EstimatorId::Taper;
}

bool needs_cv(EstimatorId id) {
  return id == EstimatorId::Hard || id == EstimatorId::Soft || id == EstimatorId::Taper;
}

ReplicationRecord run_replication(const McConfig& cfg, std::size_t r) {
  ReplicationRecord rec;
  rec.seed = cfg.base_seed + r;
  rec.outcomes.resize(cfg.estimators.size());

  SimModel model = cfg.model;
  model.seed = rec.seed;
  SimulatedSeries series;
  CovMatrix target = CovMatrix::zeros(0);
  TargetNorms norms;
  try {
    series = gen_series(model);
    target = target_lrc(make_sigma_eps(model), model.phi);
    norms = target_norms(target);
  } catch (const std::exception& e) {
    rec.error = e.what();
    return rec;
  }
  const TimeSeriesPanel panel(series.x);
  const std::size_t n = model.n;
  const std::size_t p = model.p;

  std::optional<DiffConfig> diff;
  std::optional<CovMatrix> db;
  std::optional<CvPilots> pilots;
  std::string shared_error;
  const bool any_db = std::any_of(cfg.estimators.begin(), cfg.estimators.end(), needs_db);
  const bool any_cv = cfg.tuning.cross_validate &&
                      std::any_of(cfg.estimators.begin(), cfg.estimators.end(), needs_cv);
  try {
    if (any_db || cfg.check_decomposition) {
      diff = cfg.diff ? *cfg.diff : DiffConfig::standard(n, p);
    }
    if (any_db) db = db_estimate(panel, *diff);
    if (any_cv) {
      CvPlan plan = cfg.tuning.plan;
      plan.seed = derive_seed(rec.seed, kCvStream);
      pilots = prepare_cv_pilots(panel, *diff, plan);
    }
  } catch (const std::exception& e) {
    shared_error = e.what();
  }

  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
    const EstimatorId id = cfg.estimators[i];
    EstimatorOutcome& out = rec.outcomes[i];
    try {
      if (needs_db(id) && !db) throw ConfigError(shared_error);
      if (needs_cv(id) && cfg.tuning.cross_validate && !pilots) throw ConfigError(shared_error);
      std::optional<CovMatrix> est;
      switch (id) {
        case EstimatorId::Hac:
          est = hac_estimate(panel, KernelSpec::truncated_polynomial(2.0), cfg.hac_bandwidth);
          break;
        case EstimatorId::Mac:
          est = mac_estimate(panel, cfg.mac_bandwidth ? cfg.mac_bandwidth : default_bandwidth(n, p),
                             cfg.mac);
          break;
        case EstimatorId::Obm:
          est = obm_estimate(panel, cfg.obm_batch ? cfg.obm_batch : default_obm_batch(n));
          break;
        case EstimatorId::Qs:
          est = qs_estimate(panel, cfg.qs_bandwidth ? cfg.qs_bandwidth : default_bandwidth(n, p));
          break;
        case EstimatorId::Db:
          est = *db;
          break;
        case EstimatorId::Hard:
        case EstimatorId::Soft: {
          const bool hard = id == EstimatorId::Hard;
          double tau = hard ? cfg.tuning.hard_tau : cfg.tuning.soft_tau;
          if (cfg.tuning.cross_validate) {
            const std::vector<double> grid = cfg.tuning.threshold_grid.empty()
                                                 ? default_threshold_grid(*db)
                                                 : cfg.tuning.threshold_grid;
            tau = select_threshold(*pilots, grid, hard ? ThresholdRule::Hard : ThresholdRule::Soft)
                      .selected;
          }
          out.tuned = tau;
          est = hard ? hard_threshold(*db, tau) : soft_threshold(*db, tau);
          break;
        }
        case EstimatorId::Taper: {
          double k = static_cast<double>(cfg.tuning.taper_k);
          if (cfg.tuning.cross_validate) {
            const std::vector<double> grid =
                cfg.tuning.taper_grid.empty() ? default_taper_grid(p) : cfg.tuning.taper_grid;
            k = select_taper(*pilots, grid).selected;
          }
          out.tuned = k;
          est = taper(*db, static_cast<std::size_t>(k));
          break;
        }
      }
      out.report = error_report(*est, target, norms);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  }

  if (cfg.check_decomposition) {
    try {
      const MeanDecomposition dec = oracle_decomposition(series.x, series.mu, series.z, *diff);
      const Matrix residual =
          dec.v_db.values() - dec.v_oracle.values() - dec.b_mu.values() - dec.r_mu.values();
      rec.decomposition_residual = max_norm(residual);
      rec.bias_max_norm = max_norm(dec.b_mu.values());
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  }
  return rec;
}

}  // namespace

std::string_view estimator_name(EstimatorId id) noexcept {
  switch (id) {
    case EstimatorId::Hac:
      return "HAC";
    case EstimatorId::Mac:
      return "MAC";
    case EstimatorId::Obm:
      return "OBM";
    case EstimatorId::Qs:
      return "QS";
    case EstimatorId::Db:
      return "DB";
    case EstimatorId::Hard:
      return "Hard";
    case EstimatorId::Soft:
      return "Soft";
    case EstimatorId::Taper:
      return "Taper";
  }
  return "?";
}

EstimatorId parse_estimator(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (EstimatorId id : {EstimatorId::Hac, EstimatorId::Mac, EstimatorId::Obm, EstimatorId::Qs,
                         EstimatorId::Db, EstimatorId::Hard, EstimatorId::Soft,
                         EstimatorId::Taper}) {
    std::string candidate(estimator_name(id));
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (candidate == lower) return id;
  }
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

void McConfig::validate() const {
  model.validate();
  if (replications < 1) throw ConfigError("Monte Carlo run needs at least one replication");
  if (estimators.empty()) throw ConfigError("Monte Carlo run needs at least one estimator");
  if (!tuning.cross_validate) {
    if (tuning.hard_tau < 0.0 || tuning.soft_tau < 0.0) {
      throw ConfigError("fixed thresholds must be nonnegative");
    }
    if (tuning.taper_k < 1) throw ConfigError("fixed taper bandwidth must be at least 1");
  }
}

McSummary run_monte_carlo(const McConfig& cfg) {
  cfg.validate();
  McSummary summary;
  summary.replications.resize(cfg.replications);
  const bool parallel = cfg.replications > 1 && !omp_in_parallel();
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    summary.replications[r] = run_replication(cfg, r);
  }

  for (const ReplicationRecord& rec : summary.replications) {
    const bool failed =
        !rec.error.empty() || std::any_of(rec.outcomes.begin(), rec.outcomes.end(),
                                          [](const EstimatorOutcome& o) { return !o.report; });
    if (failed) ++summary.failure_count;
  }
  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
    EstimatorSummary row{cfg.estimators[i], {}, {}, 0, 0};
    std::vector<const ErrorReport*> ok;
    for (const ReplicationRecord& rec : summary.replications) {
      if (i < rec.outcomes.size() && rec.outcomes[i].report) {
        ok.push_back(&*rec.outcomes[i].report);
      } else {
        ++row.failures;
      }
    }
    row.successes = ok.size();
    if (!ok.empty()) {
      const auto count = static_cast<double>(ok.size());
      std::vector<double> values(ok.size());
      for (Field f : kFields) {
        for (std::size_t j = 0; j < ok.size(); ++j) values[j] = (*ok[j]).*f;
        const double mean = pairwise_sum(values, 0, values.size()) / count;
        for (std::size_t j = 0; j < ok.size(); ++j) {
          const double d = (*ok[j]).*f - mean;
          values[j] = d * d;
        }
        const double var =
            ok.size() > 1 ? pairwise_sum(values, 0, values.size()) / (count - 1.0) : 0.0;
        row.mean.*f = mean;
        row.std_error.*f = std::sqrt(var / count);
      }
    }
    summary.rows.push_back(row);
  }
  return summary;
}

}  // namespace lrcov
