#include "lrcov/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>

#include "lrcov/kernels.hpp"

namespace lrcov {

namespace {

std::span<const double> flat(const Matrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::span<double> flat(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

/// Raw sum_{t >= lag} rows[t] rows[t - lag]^T (no divisor).
Matrix lagged_cross_sum(const Matrix& rows, std::size_t lag) {
  const auto p = static_cast<std::size_t>(rows.cols());
  const auto count = static_cast<std::size_t>(rows.rows());
  Matrix out(rows.cols(), rows.cols());
  if (lag >= count) {
    out.setZero();
    return out;
  }
  const std::size_t used = count - lag;
  simd::cross_product(flat(rows).subspan(lag * p), flat(rows), used, p, p, flat(out));
  return out;
}

/// symmetrize(sum_{|k| <= max_lag} K(k / ell) (1/n) sum_t Y_t Y_{t-|k|}^T).
/// Lag k and -k share one cross product: the pair contributes 2 K(k/ell) Gamma_k
/// before symmetrization. Each entry accumulates in ascending t, then k.
CovMatrix weighted_lag_sum(const Matrix& rows, std::size_t n, const KernelSpec& kernel,
                           std::size_t ell, std::size_t max_lag) {
  const auto p = rows.cols();
  Matrix acc = Matrix::Zero(p, p);
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto count = static_cast<std::size_t>(rows.rows());
  for (std::size_t k = 0; k <= max_lag && k < count; ++k) {
    const double w = kernel_eval(kernel, static_cast<double>(k) / static_cast<double>(ell));
    if (w == 0.0) continue;
    const double weight = (k == 0 ? 1.0 : 2.0 * w) * inv_n;
    const Matrix gamma = lagged_cross_sum(rows, k);
    simd::axpy(weight, flat(gamma), flat(acc));
  }
  return CovMatrix::symmetrize(acc);
}

Matrix demean(const Matrix& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return x.rowwise() - mean;
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError(std::string("shape mismatch: ") + what);
  }
}

}  // namespace

CovMatrix CovMatrix::symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("covariance matrix must be square");
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index s = 0; s < a.cols(); ++s) out(r, s) = 0.5 * (a(r, s) + a(s, r));
  }
  return CovMatrix(std::move(out));
}

CovMatrix CovMatrix::from_symmetric(Matrix a, double tol) {
  if (a.rows() != a.cols()) throw InputError("covariance matrix must be square");
  if (!a.allFinite()) throw InputError("covariance matrix has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index s = r + 1; s < a.cols(); ++s) {
      if (std::abs(a(r, s) - a(s, r)) > tol * scale) {
        throw InputError("matrix is not symmetric at (" + std::to_string(r + 1) + ", " +
                         std::to_string(s + 1) + ")");
      }
      a(s, r) = a(r, s);
    }
  }
  return CovMatrix(std::move(a));
}

CovMatrix CovMatrix::zeros(std::size_t p) {
  const auto dim = static_cast<Eigen::Index>(p);
  return CovMatrix(Matrix::Zero(dim, dim));
}

Matrix difference_series(const Matrix& x, const DiffConfig& cfg) {
  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t span = cfg.span();
  if (span >= n) {
    throw ConfigError("difference span m*h = " + std::to_string(span) +
                      " leaves no rows in a series of length " + std::to_string(n));
  }
  const auto rows = static_cast<Eigen::Index>(n - span);
  const auto& d = cfg.d();
  const auto h = static_cast<Eigen::Index>(cfg.spacing());
  const auto offset = static_cast<Eigen::Index>(span);
  // Output row i corresponds to time t = offset + i; term j reads X_{t - j h}.
  Matrix out = d[0] * x.middleRows(offset, rows);
  for (std::size_t j = 1; j < d.size(); ++j) {
    out += d[j] * x.middleRows(offset - static_cast<Eigen::Index>(j) * h, rows);
  }
  return out;
}

Matrix db_autocov(const Matrix& d, long k, std::size_t n) {
  const auto lag = static_cast<std::size_t>(std::labs(k));
  if (lag >= static_cast<std::size_t>(d.rows())) {
    throw ConfigError("lag " + std::to_string(k) + " needs more than " +
                      std::to_string(d.rows()) + " difference rows");
  }
  if (n == 0) throw ConfigError("divisor n must be positive");
  Matrix gamma = lagged_cross_sum(d, lag) / static_cast<double>(n);
  if (k < 0) gamma.transposeInPlace();
  return gamma;
}

CovMatrix db_estimate(const TimeSeriesPanel& x, const DiffConfig& cfg) {
  cfg.check_fits(x.n());
  const Matrix d = difference_series(x, cfg);
  return weighted_lag_sum(d, x.n(), cfg.kernel(), cfg.bandwidth(), cfg.bandwidth() - 1);
}

CovMatrix mean_bias_matrix(const Matrix& mu, const DiffConfig& cfg) {
  const auto n = static_cast<std::size_t>(mu.rows());
  cfg.check_fits(n);
  const Matrix m = difference_series(mu, cfg);
  return weighted_lag_sum(m, n, cfg.kernel(), cfg.bandwidth(), cfg.bandwidth() - 1);
}

MeanDecomposition oracle_decomposition(const Matrix& x, const Matrix& mu, const Matrix& z,
                                       const DiffConfig& cfg) {
  check_same_shape(x, mu, "X and mu");
  check_same_shape(x, z, "X and Z");
  if (((mu + z) - x).cwiseAbs().maxCoeff() > 1e-10) {
    throw InputError("oracle decomposition needs X = mu + Z");
  }
  CovMatrix v_db = db_estimate(TimeSeriesPanel(x), cfg);
  CovMatrix v_oracle = mean_bias_matrix(z, cfg);
  CovMatrix b_mu = mean_bias_matrix(mu, cfg);
  CovMatrix r_mu = CovMatrix::symmetrize(v_db.values() - v_oracle.values() - b_mu.values());
  return {std::move(v_db), std::move(v_oracle), std::move(b_mu), std::move(r_mu)};
}

MeanMoments mean_moment_stats(const Matrix& m, std::size_t n) {
  if (m.rows() == 0 || m.cols() == 0) throw InputError("mean-moment statistics need rows");
  if (n == 0) throw ConfigError("panel length must be positive");
  double sum = 0.0;
  double peak = 0.0;
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    const double row_max = m.row(t).cwiseAbs().maxCoeff();
    sum += row_max * row_max;
    peak = std::max(peak, row_max);
  }
  return {sum / static_cast<double>(n), peak};
}

Matrix demeaned_autocov(const TimeSeriesPanel& x, long k) {
  const auto lag = static_cast<std::size_t>(std::labs(k));
  if (lag >= x.n()) {
    throw ConfigError("lag " + std::to_string(k) + " must be below n = " + std::to_string(x.n()));
  }
  Matrix gamma = lagged_cross_sum(demean(x.data()), lag) / static_cast<double>(x.n());
  if (k < 0) gamma.transposeInPlace();
  return gamma;
}

CovMatrix hac_estimate(const TimeSeriesPanel& x, const KernelSpec& kernel, std::size_t ell) {
  if (ell < 1 || ell >= x.n()) {
    throw ConfigError("HAC bandwidth must satisfy 1 <= ell < n");
  }
  return weighted_lag_sum(demean(x.data()), x.n(), kernel, ell, ell - 1);
}

std::size_t default_obm_batch(std::size_t n) {
  auto b = static_cast<std::size_t>(std::floor(std::cbrt(static_cast<double>(n))));
  // cbrt of a perfect cube can land just below the integer.
  while ((b + 1) * (b + 1) * (b + 1) <= n) ++b;
  return std::max<std::size_t>(2, b);
}

CovMatrix obm_estimate(const TimeSeriesPanel& x, std::size_t batch) {
  const std::size_t n = x.n();
  if (batch <= 1 || batch >= n) {
    throw ConfigError("OBM batch size must satisfy 1 < batch < n");
  }
  const Matrix y = demean(x.data());
  const auto windows = static_cast<Eigen::Index>(n - batch + 1);
  const auto len = static_cast<Eigen::Index>(batch);
  Matrix means(windows, y.cols());
  for (Eigen::Index i = 0; i < windows; ++i) {
    means.row(i) = y.middleRows(i, len).colwise().sum() / static_cast<double>(batch);
  }
  const double scale = static_cast<double>(batch) / static_cast<double>(n - batch + 1);
  return CovMatrix::symmetrize(scale * lagged_cross_sum(means, 0));
}

CovMatrix qs_estimate(const TimeSeriesPanel& x, std::size_t ell) {
  if (ell < 1) throw ConfigError("QS bandwidth must be at least 1");
  return weighted_lag_sum(demean(x.data()), x.n(), KernelSpec::quadratic_spectral(), ell,
                          x.n() - 1);
}

Matrix variate_difference(const TimeSeriesPanel& x, std::size_t k) {
  const std::size_t n = x.n();
  if (k >= n) {
    throw ConfigError("variate-difference lag " + std::to_string(k) + " must be below n");
  }
  const auto p = static_cast<Eigen::Index>(x.p());
  if (k == 0) return Matrix::Zero(p, p);
  const auto rows = static_cast<Eigen::Index>(n - k);
  const Matrix diff = x.data().bottomRows(rows) - x.data().topRows(rows);
  return lagged_cross_sum(diff, 0) / (2.0 * static_cast<double>(n - k + 1));
}

CovMatrix mac_estimate(const TimeSeriesPanel& x, std::size_t ell, const MacParams& params) {
  const std::size_t n = x.n();
  if (ell < 1) throw ConfigError("MAC bandwidth must be at least 1");
  if (!(params.c0 > 0.0) || !(params.c1 > 0.0)) {
    throw ConfigError("MAC constants c0 and c1 must be positive");
  }
  const auto longest = std::llround(params.c0 * static_cast<double>(ell) +
                                    params.c1 * static_cast<double>(ell));
  if (longest >= static_cast<long long>(n)) {
    throw ConfigError("MAC bandwidth too large: L_ell = " + std::to_string(longest) +
                      " must be below n = " + std::to_string(n));
  }
  const KernelSpec kernel = KernelSpec::truncated_polynomial(params.q);
  const auto p = static_cast<Eigen::Index>(x.p());

  std::map<std::size_t, Matrix> cache;
  auto delta = [&](std::size_t lag) -> const Matrix& {
    auto it = cache.find(lag);
    if (it == cache.end()) it = cache.emplace(lag, variate_difference(x, lag)).first;
    return it->second;
  };

  Matrix acc = Matrix::Zero(p, p);
  for (std::size_t k = 0; k <= ell; ++k) {
    const double w = kernel_eval(kernel, static_cast<double>(k) / static_cast<double>(ell));
    if (w == 0.0) continue;
    const double weight = k == 0 ? w : 2.0 * w;
    const auto raw = std::llround(params.c0 * static_cast<double>(ell) +
                                  params.c1 * static_cast<double>(k));
    const auto long_lag =
        static_cast<std::size_t>(std::clamp<long long>(raw, 1, static_cast<long long>(n) - 1));
    acc += weight * (delta(long_lag) - delta(k));
  }
  return CovMatrix::symmetrize(acc);
}

}  // namespace lrcov
