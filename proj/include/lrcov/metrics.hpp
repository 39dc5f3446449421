#pragma once

#include <cstdint>

#include "lrcov/estimators.hpp"

namespace lrcov {

double frobenius_norm(const Matrix& a);

/// Maximum absolute column sum.
double induced_l1_norm(const Matrix& a);

/// Largest absolute entry.
double max_norm(const Matrix& a);

struct SpectralOptions {
  double tolerance = 1e-10;
  int max_iterations = 5000;
  /// Matrices up to this size use a dense symmetric eigensolver instead.
  std::size_t dense_threshold = 1024;
  std::uint64_t seed = 0x5eed;
};

/// Largest absolute eigenvalue of a symmetric matrix. Power iteration above
/// the dense threshold; throws NumericalError (carrying the last estimate)
/// if it fails to converge.
double spectral_norm(const Matrix& a, const SpectralOptions& options = {});

/// Denominator floor for relative errors.
inline constexpr double kRelativeSafeguard = 1e-12;

struct ErrorReport {
  double frob = 0.0;
  double l1 = 0.0;
  double max = 0.0;
  double spectral = 0.0;
  double rel_frob = 0.0;
  double rel_l1 = 0.0;
  double rel_max = 0.0;
  double rel_spectral = 0.0;
};

/// The four norms of a target matrix, reusable across many error reports.
struct TargetNorms {
  double frob = 0.0;
  double l1 = 0.0;
  double max = 0.0;
  double spectral = 0.0;
};

TargetNorms target_norms(const CovMatrix& target, const SpectralOptions& options = {});

/// Norms of E = est - target, absolute and relative to the same norm of the
/// target. Throws InputError on a dimension mismatch.
ErrorReport error_report(const CovMatrix& est, const CovMatrix& target,
                         const SpectralOptions& options = {});
ErrorReport error_report(const CovMatrix& est, const CovMatrix& target, const TargetNorms& norms,
                         const SpectralOptions& options = {});

}  // namespace lrcov
