#include <algorithm>
#include <cmath>
#include <limits>

#include "lrcov/simulate.hpp"

namespace lrcov {

double omega_hat(const CovMatrix& v) {
  if (v.dim() == 0) throw InputError("omega_hat needs a nonempty matrix");
  // tr(V V) = sum_ij V_ij^2 for symmetric V.
  const double trace_sq = v.values().squaredNorm();
  return std::sqrt(2.0 * trace_sq / static_cast<double>(v.dim()));
}

ScanResult cusum_scan(const TimeSeriesPanel& x, const CovMatrix& v, double trim) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  if (!(trim >= 0.0 && trim < 0.5)) throw ConfigError("trim must lie in [0, 0.5)");
  if (n < 10) throw ConfigError("change-point scan needs n >= 10");
  if (v.dim() != p) throw InputError("scan matrix dimension does not match the panel");

  const auto nd = static_cast<double>(n);
  std::size_t first = static_cast<std::size_t>(std::ceil(trim * nd));
  std::size_t last = static_cast<std::size_t>(std::floor((1.0 - trim) * nd));
  first = std::max<std::size_t>(first, 1);
  last = std::min(last, n - 1);
  if (first > last) throw ConfigError("trimmed change-point range is empty");

  ScanResult result;
  result.omega = omega_hat(v);
  if (!(result.omega > 0.0)) throw NumericalError("omega_hat is zero; cannot normalize");
  const double trace = v.values().trace();
  const double scale = std::sqrt(static_cast<double>(p)) * result.omega;

  const Eigen::RowVectorXd total = x.data().colwise().sum();
  Eigen::RowVectorXd head = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t k = 1; k < first; ++k) head += x.data().row(static_cast<Eigen::Index>(k - 1));

  double best = -std::numeric_limits<double>::infinity();
  result.path.reserve(last - first + 1);
  for (std::size_t k = first; k <= last; ++k) {
    head += x.data().row(static_cast<Eigen::Index>(k - 1));
    const auto kd = static_cast<double>(k);
    const Eigen::RowVectorXd diff = head / kd - (total - head) / (nd - kd);
    const double weight = kd * (nd - kd) / nd;
    const double stat = (weight * diff.squaredNorm() - trace) / scale;
    result.path.emplace_back(k, stat);
    if (stat > best) {
      best = stat;
      result.k_hat = k;
    }
  }
  return result;
}

}  // namespace lrcov
