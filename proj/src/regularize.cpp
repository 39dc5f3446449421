#include "lrcov/regularize.hpp"

#include <algorithm>
#include <cmath>

namespace lrcov {

namespace {

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ConfigError("threshold must be a finite nonnegative number");
  }
}

template <typename F>
CovMatrix map_off_diagonal(const CovMatrix& v, F&& f) {
  Matrix out = v.values();
  const auto p = out.rows();
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index s = r + 1; s < p; ++s) {
      const double x = f(out(r, s), static_cast<std::size_t>(r), static_cast<std::size_t>(s));
      out(r, s) = x;
      out(s, r) = x;
    }
  }
  return CovMatrix::from_symmetric(std::move(out), 0.0);
}

}  // namespace

CovMatrix hard_threshold(const CovMatrix& v, double tau) {
  check_tau(tau);
  return map_off_diagonal(v, [tau](double x, std::size_t, std::size_t) {
    return std::abs(x) >= tau ? x : 0.0;
  });
}

CovMatrix soft_threshold(const CovMatrix& v, double tau) {
  check_tau(tau);
  return map_off_diagonal(v, [tau](double x, std::size_t, std::size_t) {
    const double shrunk = std::abs(x) - tau;
    return shrunk > 0.0 ? std::copysign(shrunk, x) : 0.0;
  });
}

double taper_weight(std::size_t i, std::size_t j, std::size_t k) {
  const double dist = i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
  const double kk = static_cast<double>(k);
  if (dist <= kk / 2.0) return 1.0;
  if (dist >= kk) return 0.0;
  return 2.0 - 2.0 * dist / kk;
}

TaperWeights::TaperWeights(std::size_t p, std::size_t k) : p_(p), k_(k) {
  if (k_ < 1) throw ConfigError("taper bandwidth must be at least 1");
}

std::size_t TaperWeights::row_nonzeros(std::size_t i) const {
  // Nonzero iff |i - j| < k.
  const std::size_t lo = i >= k_ - 1 ? i - (k_ - 1) : 0;
  const std::size_t hi = std::min(p_ - 1, i + k_ - 1);
  return hi - lo + 1;
}

CovMatrix taper(const CovMatrix& v, std::size_t k) {
  const TaperWeights w(v.dim(), k);
  return map_off_diagonal(v, [&w](double x, std::size_t r, std::size_t s) {
    const double weight = w(r, s);
    return weight == 0.0 ? 0.0 : weight * x;
  });
}

std::size_t nonzeros(const CovMatrix& v) {
  return static_cast<std::size_t>((v.values().array() != 0.0).count());
}

bool has_nonpositive_diagonal(const CovMatrix& v) {
  return (v.values().diagonal().array() <= 0.0).any();
}

}  // namespace lrcov
