#pragma once

#include <cstddef>

#include "lrcov/estimators.hpp"

namespace lrcov {

/// Keeps off-diagonal entries with |v| >= tau and zeroes the rest. The
/// diagonal is copied unchanged. Throws ConfigError for tau < 0.
CovMatrix hard_threshold(const CovMatrix& v, double tau);

/// Off-diagonal v -> sign(v) (|v| - tau)_+; diagonal unchanged.
CovMatrix soft_threshold(const CovMatrix& v, double tau);

/// Piecewise-linear taper weight for index distance |i - j| and bandwidth k:
/// 1 up to k/2, 2 - 2|i-j|/k in between, 0 from k on.
double taper_weight(std::size_t i, std::size_t j, std::size_t k);

/// Banded taper profile of a p x p matrix. Weights depend only on |i - j| and
/// are never stored as a dense matrix.
class TaperWeights {
 public:
  TaperWeights(std::size_t p, std::size_t k);

  std::size_t p() const noexcept { return p_; }
  std::size_t k() const noexcept { return k_; }
  double operator()(std::size_t i, std::size_t j) const { return taper_weight(i, j, k_); }

  /// Number of nonzero weights in row i.
  std::size_t row_nonzeros(std::size_t i) const;

 private:
  std::size_t p_;
  std::size_t k_;
};

/// Hadamard product of v with the taper profile of bandwidth k >= 1.
CovMatrix taper(const CovMatrix& v, std::size_t k);

/// Number of nonzero entries.
std::size_t nonzeros(const CovMatrix& v);

/// True when some diagonal entry is <= 0. Regularizers pass such diagonals
/// through unchanged; callers may warn.
bool has_nonpositive_diagonal(const CovMatrix& v);

}  // namespace lrcov
