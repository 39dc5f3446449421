#pragma once

#include <cstddef>

#include "lrcov/core.hpp"

namespace lrcov {

/// Symmetric p x p estimate of a long-run covariance matrix (or of a
/// covariance matrix such as Sigma_eps). Symmetry is exact.
class CovMatrix {
 public:
  /// (A + A^T) / 2.
  static CovMatrix symmetrize(const Matrix& a);

  /// Accepts a matrix that is already symmetric to within `tol` (relative to
  /// the largest entry) and copies the upper triangle onto the lower one.
  /// Throws InputError otherwise.
  static CovMatrix from_symmetric(Matrix a, double tol = 1e-10);

  static CovMatrix zeros(std::size_t p);

  const Matrix& values() const noexcept { return values_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t r, std::size_t s) const {
    return values_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
  }

 private:
  explicit CovMatrix(Matrix values) : values_(std::move(values)) {}

  Matrix values_;
};

// Difference-based estimator ---------------------------------------------

/// D_t = sum_j d_j X_{t - j h} for t = m h + 1..n; returns (n - m h) x p.
/// Throws ConfigError when m h >= n.
Matrix difference_series(const Matrix& x, const DiffConfig& cfg);
inline Matrix difference_series(const TimeSeriesPanel& x, const DiffConfig& cfg) {
  return difference_series(x.data(), cfg);
}

/// (1/n) sum_t D_t D_{t-|k|}^T over the rows of D, unsymmetrized.
/// Negative k returns the transpose of lag |k|.
Matrix db_autocov(const Matrix& d, long k, std::size_t n);

/// Kernel-weighted sum of the difference-based autocovariances over
/// |k| < ell, symmetrized.
CovMatrix db_estimate(const TimeSeriesPanel& x, const DiffConfig& cfg);

// Mean decomposition -------------------------------------------------------

/// The DB formula applied to the known mean path mu (the deterministic
/// mean-induced bias B_mu). Works on any n x p matrix.
CovMatrix mean_bias_matrix(const Matrix& mu, const DiffConfig& cfg);

struct MeanDecomposition {
  CovMatrix v_db;      // from X
  CovMatrix v_oracle;  // from the noise Z alone
  CovMatrix b_mu;      // from the mean alone
  CovMatrix r_mu;      // v_db - v_oracle - b_mu: the mean/noise cross terms
};

/// Throws InputError unless x = mu + z entrywise to 1e-10.
MeanDecomposition oracle_decomposition(const Matrix& x, const Matrix& mu, const Matrix& z,
                                       const DiffConfig& cfg);

struct MeanMoments {
  double m2bar;  // (1/n) sum_t max_j M_tj^2
  double minf;   // max_t max_j |M_tj|
};

/// `m` holds the differenced mean rows M_t; `n` is the original panel length.
MeanMoments mean_moment_stats(const Matrix& m, std::size_t n);

// Classical baselines (constant-mean estimators) ---------------------------

/// (1/n) sum_{i>|k|} (X_i - Xbar)(X_{i-|k|} - Xbar)^T. Negative k returns the
/// transpose of lag |k|.
Matrix demeaned_autocov(const TimeSeriesPanel& x, long k);

/// Kernel HAC estimator over |k| <= ell - 1 on demeaned data.
CovMatrix hac_estimate(const TimeSeriesPanel& x, const KernelSpec& kernel, std::size_t ell);

/// Overlapping batch means with batch size 1 < batch < n.
CovMatrix obm_estimate(const TimeSeriesPanel& x, std::size_t batch);

/// Default OBM batch size, floor(n^(1/3)) but at least 2.
std::size_t default_obm_batch(std::size_t n);

/// Quadratic spectral estimator. The QS kernel has unbounded support, so all
/// n - 1 lags enter.
CovMatrix qs_estimate(const TimeSeriesPanel& x, std::size_t ell);

/// Variate-difference matrix (1 / (2(n-k+1))) sum_{i>k} (X_i - X_{i-k})^{x2}.
Matrix variate_difference(const TimeSeriesPanel& x, std::size_t k);

struct MacParams {
  double q = 2.0;
  double c0 = 2.0;
  double c1 = 1.0;
};

/// Bi-differenced MAC estimator sum_{|k|<=ell} K_q(|k|/ell)(Delta_{L_k} - Delta_k)
/// with L_k = round(c0 ell + c1 |k|) clamped to [1, n-1].
CovMatrix mac_estimate(const TimeSeriesPanel& x, std::size_t ell, const MacParams& params = {});

}  // namespace lrcov
