#pragma once

// Exact property checks of the regularizers on random symmetric matrices.
// Shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <string>

#include "lrcov/regularize.hpp"

namespace props {

inline lrcov::CovMatrix random_symmetric(std::size_t p, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  lrcov::Matrix a(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) a(i, j) = g(rng);
  }
  return lrcov::CovMatrix::symmetrize(a);
}

/// Returns an empty string when every property holds, otherwise the first
/// violated property.
inline std::string check_regularizers(std::size_t trials, std::uint64_t seed) {
  using namespace lrcov;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 2.5);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t p = 2 + trial % 23;
    const CovMatrix v = random_symmetric(p, rng);
    const double tau = unif(rng);
    const double tau2 = tau + unif(rng);
    const std::size_t k = 1 + trial % (2 * p);
    const CovMatrix hard = hard_threshold(v, tau);
    const CovMatrix soft = soft_threshold(v, tau);
    const CovMatrix tap = taper(v, k);
    for (const CovMatrix* out : {&hard, &soft, &tap}) {
      for (std::size_t i = 0; i < p; ++i) {
        if ((*out)(i, i) != v(i, i)) return "diagonal preservation";
        for (std::size_t j = 0; j < p; ++j) {
          if ((*out)(i, j) != (*out)(j, i)) return "symmetry";
        }
      }
    }
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        if (i == j) continue;
        if (!(std::abs(soft(i, j)) <= std::abs(hard(i, j)) && std::abs(hard(i, j)) <= std::abs(v(i, j)))) {
          return "soft <= hard <= identity dominance";
        }
        const std::size_t dist = i > j ? i - j : j - i;
        if (dist >= k && tap(i, j) != 0.0) return "taper band-zero structure";
      }
    }
    if (hard_threshold(hard, tau).values() != hard.values()) return "hard idempotence";
    if (nonzeros(hard_threshold(v, tau)) < nonzeros(hard_threshold(v, tau2))) {
      return "monotone sparsity in tau";
    }
    if (nonzeros(soft_threshold(v, tau)) < nonzeros(soft_threshold(v, tau2))) {
      return "monotone sparsity in tau (soft)";
    }
  }
  return {};
}

}  // namespace props
