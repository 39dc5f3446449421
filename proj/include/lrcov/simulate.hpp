#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrcov/estimators.hpp"
#include "lrcov/metrics.hpp"
#include "lrcov/tuning.hpp"

namespace lrcov {

// Data-generating processes ------------------------------------------------

enum class ModelKind {
  Tridiagonal,    // Sigma_11 = 1, Sigma_ii = 1 + a^2, first off-diagonal a
  Toeplitz,       // Sigma_ij = rho^|i-j|
  PermutedBlock,  // randomly permuted 2 x 2 blocks [[1, rho], [rho, 1]]
};

std::string_view model_name(ModelKind kind) noexcept;

/// AR(1) panel Z_t = phi Z_{t-1} + eps_t with Gaussian innovations of
/// covariance Sigma_eps, plus a deterministic mean on the first
/// `mean_coords` coordinates.
struct SimModel {
  ModelKind kind = ModelKind::Tridiagonal;
  double param = 0.5;  // a for Tridiagonal, rho otherwise
  std::size_t n = 200;
  std::size_t p = 300;
  double phi = 0.5;
  std::size_t burn_in = 200;
  std::size_t mean_coords = 20;
  std::uint64_t seed = 0;

  /// Factories put the mean on min(20, p) coordinates.
  static SimModel tridiagonal(std::size_t n, std::size_t p, double a = 0.5);
  static SimModel toeplitz(std::size_t n, std::size_t p, double rho = 0.7);
  static SimModel permuted_block(std::size_t n, std::size_t p, double rho = 0.7);

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Innovation covariance. The PermutedBlock permutation is drawn from the
/// model seed.
CovMatrix make_sigma_eps(const SimModel& model);

/// Long-run covariance of the AR(1) process: Sigma_eps / (1 - phi)^2.
CovMatrix target_lrc(const CovMatrix& sigma_eps, double phi);

/// mu(t) = exp(t) + 1(t > 0.3) + 2 1(t > 0.6) + 4 1(t > 0.8) at t = i / n.
double mean_function(double t);

/// n x p matrix with mean_function(i / n) in the first m_coords columns.
Matrix mean_path(std::size_t n, std::size_t p, std::size_t m_coords);

struct SimulatedSeries {
  Matrix x;   // mu + z
  Matrix mu;
  Matrix z;
};

/// Deterministic in the model (including its seed).
SimulatedSeries gen_series(const SimModel& model);

// Change-point normalization -----------------------------------------------

/// {2 tr(V^2) / p}^(1/2).
double omega_hat(const CovMatrix& v);

struct ScanResult {
  std::size_t k_hat = 0;  // rows in the first segment, 1-based
  double omega = 0.0;
  std::vector<std::pair<std::size_t, double>> path;
};

/// Scans split points k in [ceil(trim n), floor((1 - trim) n)] with the
/// statistic (||U(k)||^2 - tr V) / (sqrt(p) omega_hat(V)), where
/// U(k) = sqrt(k (n - k) / n) (mean of rows 1..k - mean of rows k+1..n).
/// k_hat is the smallest maximizer.
ScanResult cusum_scan(const TimeSeriesPanel& x, const CovMatrix& v, double trim = 0.05);

// Monte Carlo --------------------------------------------------------------

enum class EstimatorId { Hac, Mac, Obm, Qs, Db, Hard, Soft, Taper };

std::string_view estimator_name(EstimatorId id) noexcept;

/// Case-insensitive. Throws ConfigError for unknown names.
EstimatorId parse_estimator(std::string_view name);

/// Fixed regularization parameters, or cross-validation.
struct TuningChoice {
  bool cross_validate = true;
  CvPlan plan;  // plan.seed is replaced by a per-replication stream
  std::vector<double> threshold_grid;  // empty: default grid
  std::vector<double> taper_grid;      // empty: default grid
  double hard_tau = 0.0;
  double soft_tau = 0.0;
  std::size_t taper_k = 1;
};

/// Lag window used for HAC in simulation tables unless overridden.
inline constexpr std::size_t kSimulationHacBandwidth = 20;

struct McConfig {
  SimModel model;  // model.seed is replaced by base_seed + replication
  std::size_t replications = 100;
  std::vector<EstimatorId> estimators;
  std::optional<DiffConfig> diff;  // default: DiffConfig::standard(n, p)
  TuningChoice tuning;
  std::size_t hac_bandwidth = kSimulationHacBandwidth;
  std::size_t mac_bandwidth = 0;  // 0: default_bandwidth(n, p)
  MacParams mac;
  std::size_t obm_batch = 0;     // 0: default_obm_batch(n)
  std::size_t qs_bandwidth = 0;  // 0: default_bandwidth(n, p)
  std::uint64_t base_seed = 1;
  bool check_decomposition = false;

  void validate() const;
};

struct EstimatorOutcome {
  std::optional<ErrorReport> report;
  std::string error;
  double tuned = 0.0;  // selected tau or k for regularized estimators
};

struct ReplicationRecord {
  std::uint64_t seed = 0;
  std::vector<EstimatorOutcome> outcomes;  // in McConfig::estimators order
  std::string error;                       // data generation failure
  // Filled when check_decomposition is set.
  double decomposition_residual = 0.0;
  double bias_max_norm = 0.0;
};

struct EstimatorSummary {
  EstimatorId id;
  ErrorReport mean;
  ErrorReport std_error;
  std::size_t successes = 0;
  std::size_t failures = 0;
};

struct McSummary {
  std::vector<EstimatorSummary> rows;
  std::vector<ReplicationRecord> replications;
  std::size_t failure_count = 0;  // replications with any failure
};

/// Runs every replication (in parallel when threads are available) and
/// averages the error reports. Failures are recorded and do not stop the run.
/// Results are independent of the thread count.
McSummary run_monte_carlo(const McConfig& cfg);

}  // namespace lrcov
