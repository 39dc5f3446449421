#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lrcov/error.hpp"

namespace lrcov {

/// Dense row-major matrix. Rows are time points for panels, and the SIMD
/// kernels rely on contiguous rows.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// An n x p panel of observations X_1..X_n, one row per time point.
/// Construction validates n >= 2, p >= 1 and that every entry is finite.
class TimeSeriesPanel {
 public:
  explicit TimeSeriesPanel(Matrix data);

  std::size_t n() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  const Matrix& data() const noexcept { return data_; }

  /// Rows [begin, end) as a new panel.
  TimeSeriesPanel slice(std::size_t begin, std::size_t end) const;

 private:
  Matrix data_;
};

enum class KernelKind { TruncatedPolynomial, Bartlett, QuadraticSpectral };

/// Lag-window kernel. K(0) = 1 for every kind; the truncated polynomial
/// K_q(x) = (1 - |x|^q) 1(|x| <= 1) and Bartlett vanish outside [-1, 1].
class KernelSpec {
 public:
  static KernelSpec truncated_polynomial(double q);
  static KernelSpec bartlett() { return KernelSpec(KernelKind::Bartlett, 1.0); }
  static KernelSpec quadratic_spectral() { return KernelSpec(KernelKind::QuadraticSpectral, 0.0); }

  KernelKind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  bool compact_support() const noexcept { return kind_ != KernelKind::QuadraticSpectral; }

  std::string name() const;

 private:
  KernelSpec(KernelKind kind, double q) : kind_(kind), q_(q) {}

  KernelKind kind_;
  double q_;
};

/// Evaluates K(x). Throws InputError for non-finite x.
double kernel_eval(const KernelSpec& spec, double x);

/// Tolerance used when checking sum(d) = 0 and sum(d^2) = 1. Wide enough for
/// difference sequences published to four decimals.
inline constexpr double kDiffSequenceTolerance = 5e-4;

/// Returns `d` unchanged when it is a normalized difference sequence,
/// otherwise throws ConfigError naming the violated constraint.
std::vector<double> validate_diff_sequence(std::span<const double> d);

/// Four-decimal difference sequence of order 3 used by the default DB setup.
std::vector<double> standard_diff_sequence();

/// max(1, min(floor((n / ln p)^(1/4)), floor((n - 10) / 28))). Throws
/// ConfigError when p < 2 or when n is too short for a positive bandwidth.
std::size_t default_bandwidth(std::size_t n, std::size_t p);

/// Difference sequence, lag spacing h and kernel bandwidth ell of a
/// difference-based estimator. The order m is d.size() - 1.
class DiffConfig {
 public:
  DiffConfig(std::vector<double> d, std::size_t spacing, std::size_t bandwidth,
             KernelSpec kernel = KernelSpec::truncated_polynomial(2.0));

  /// Standard configuration for an n x p panel: four-decimal order-3 sequence,
  /// ell = default_bandwidth(n, p), h = 2 ell, K_2 kernel.
  static DiffConfig standard(std::size_t n, std::size_t p);

  const std::vector<double>& d() const noexcept { return d_; }
  std::size_t order() const noexcept { return d_.size() - 1; }
  std::size_t spacing() const noexcept { return spacing_; }
  std::size_t bandwidth() const noexcept { return bandwidth_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }

  /// m h, the number of leading observations consumed by differencing.
  std::size_t span() const noexcept { return order() * spacing_; }

  /// Throws ConfigError unless m h + ell < n.
  void check_fits(std::size_t n) const;

  /// Same sequence and kernel with the bandwidth recomputed for a series of
  /// length n and the spacing scaled to keep the ratio h / ell.
  DiffConfig rescaled_for(std::size_t n, std::size_t p) const;

 private:
  std::vector<double> d_;
  std::size_t spacing_;
  std::size_t bandwidth_;
  KernelSpec kernel_;
};

}  // namespace lrcov
