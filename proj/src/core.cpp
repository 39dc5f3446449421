#include "lrcov/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lrcov {

TimeSeriesPanel::TimeSeriesPanel(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 2) {
    throw InputError("panel needs at least 2 time points, got " + std::to_string(data_.rows()));
  }
  if (data_.cols() < 1) {
    throw InputError("panel needs at least 1 coordinate");
  }
  if (!data_.allFinite()) {
    for (Eigen::Index t = 0; t < data_.rows(); ++t) {
      for (Eigen::Index j = 0; j < data_.cols(); ++j) {
        if (!std::isfinite(data_(t, j))) {
          throw InputError("non-finite panel entry at row " + std::to_string(t + 1) + ", column " +
                           std::to_string(j + 1));
        }
      }
    }
  }
}

TimeSeriesPanel TimeSeriesPanel::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > n()) {
    throw ConfigError("invalid panel slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                      ")");
  }
  return TimeSeriesPanel(data_.middleRows(static_cast<Eigen::Index>(begin),
                                          static_cast<Eigen::Index>(end - begin)));
}

KernelSpec KernelSpec::truncated_polynomial(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw ConfigError("truncated polynomial kernel exponent must be positive");
  }
  return KernelSpec(KernelKind::TruncatedPolynomial, q);
}

std::string KernelSpec::name() const {
  switch (kind_) {
    case KernelKind::TruncatedPolynomial: {
      std::ostringstream os;
      os << "K_q(q=" << q_ << ")";
      return os.str();
    }
    case KernelKind::Bartlett:
      return "Bartlett";
    case KernelKind::QuadraticSpectral:
      return "QS";
  }
  return "?";
}

namespace {

double quadratic_spectral(double x) {
  const double a = 6.0 * std::numbers::pi * x / 5.0;
  if (std::abs(a) < 1.0) {
    // The closed form cancels badly near the origin (0/0 at x = 0). Use
    // 3 sum_{k>=1} (-1)^(k+1) 2k a^(2k-2) / (2k+1)!, i.e. 1 - a^2/10 + a^4/280 - ...
    const double a2 = a * a;
    double term = 1.0;  // 6 a^(2k-2) / (2k+1)!
    double sum = 0.0;
    for (int k = 1; k <= 12; ++k) {
      sum += (k % 2 == 1 ? 1.0 : -1.0) * static_cast<double>(k) * term;
      term *= a2 / static_cast<double>((2 * k + 2) * (2 * k + 3));
    }
    return sum;
  }
  return 25.0 / (12.0 * std::numbers::pi * std::numbers::pi * x * x) *
         (std::sin(a) / a - std::cos(a));
}

}  // namespace

double kernel_eval(const KernelSpec& spec, double x) {
  if (!std::isfinite(x)) {
    throw InputError("kernel argument must be finite");
  }
  const double ax = std::abs(x);
  switch (spec.kind()) {
    case KernelKind::TruncatedPolynomial:
      return ax <= 1.0 ? 1.0 - std::pow(ax, spec.q()) : 0.0;
    case KernelKind::Bartlett:
      return ax <= 1.0 ? 1.0 - ax : 0.0;
    case KernelKind::QuadraticSpectral:
      return quadratic_spectral(ax);
  }
  return 0.0;
}

std::vector<double> validate_diff_sequence(std::span<const double> d) {
  if (d.empty()) {
    throw ConfigError("difference sequence must be nonempty");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : d) {
    if (!std::isfinite(v)) {
      throw ConfigError("difference sequence has a non-finite entry");
    }
    sum += v;
    sum_sq += v * v;
  }
  if (std::abs(sum) > kDiffSequenceTolerance) {
    std::ostringstream os;
    os << "difference sequence violates sum(d) = 0 (sum is " << sum << ")";
    throw ConfigError(os.str());
  }
  if (std::abs(sum_sq - 1.0) > kDiffSequenceTolerance) {
    std::ostringstream os;
    os << "difference sequence violates sum(d^2) = 1 (sum of squares is " << sum_sq << ")";
    throw ConfigError(os.str());
  }
  return {d.begin(), d.end()};
}

std::vector<double> standard_diff_sequence() { return {0.1942, 0.2809, 0.3832, -0.8582}; }

std::size_t default_bandwidth(std::size_t n, std::size_t p) {
  if (p < 2) {
    throw ConfigError("default bandwidth needs p >= 2 (log p must be positive)");
  }
  if (n <= 10) {
    throw ConfigError("series of length " + std::to_string(n) + " is too short for a bandwidth");
  }
  const double rate = std::pow(static_cast<double>(n) / std::log(static_cast<double>(p)), 0.25);
  const auto by_rate = static_cast<std::size_t>(std::floor(rate));
  const std::size_t by_length = (n - 10) / 28;
  const std::size_t ell = std::min(by_rate, by_length);
  if (ell < 1) {
    throw ConfigError("series of length " + std::to_string(n) +
                      " is too short for a positive default bandwidth");
  }
  return ell;
}

DiffConfig::DiffConfig(std::vector<double> d, std::size_t spacing, std::size_t bandwidth,
                       KernelSpec kernel)
    : d_(validate_diff_sequence(d)), spacing_(spacing), bandwidth_(bandwidth), kernel_(kernel) {
  if (spacing_ < 1) {
    throw ConfigError("lag spacing h must be at least 1");
  }
  if (bandwidth_ < 1) {
    throw ConfigError("kernel bandwidth must be at least 1");
  }
}

DiffConfig DiffConfig::standard(std::size_t n, std::size_t p) {
  const std::size_t ell = default_bandwidth(n, p);
  return DiffConfig(standard_diff_sequence(), 2 * ell, ell);
}

void DiffConfig::check_fits(std::size_t n) const {
  if (span() + bandwidth_ >= n) {
    throw ConfigError("difference span m*h + bandwidth = " + std::to_string(span() + bandwidth_) +
                      " must be below the series length " + std::to_string(n));
  }
}

DiffConfig DiffConfig::rescaled_for(std::size_t n, std::size_t p) const {
  const std::size_t ell = default_bandwidth(n, p);
  const double ratio = static_cast<double>(spacing_) / static_cast<double>(bandwidth_);
  const auto h = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(ell))));
  return DiffConfig(d_, h, ell, kernel_);
}

}  // namespace lrcov
