#include "lrcov/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lrcov/kernels.hpp"

namespace lrcov {

double frobenius_norm(const Matrix& a) {
  const std::span<const double> v(a.data(), static_cast<std::size_t>(a.size()));
  return std::sqrt(simd::dot(v, v));
}

double induced_l1_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

double max_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double spectral_norm(const Matrix& a, const SpectralOptions& options) {
  if (a.rows() != a.cols()) throw InputError("spectral norm needs a square matrix");
  const auto p = static_cast<std::size_t>(a.rows());
  if (p == 0 || max_norm(a) == 0.0) return 0.0;
  if (p <= options.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("dense symmetric eigensolver failed");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }

  // Power iteration tracking sigma = ||A v|| for unit v. sigma increases
  // monotonically to max |lambda| whatever the sign of the dominant
  // eigenvalue, including the +lambda / -lambda tie.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(p), w(p);
  for (double& x : v) x = unif(rng);
  const std::span<const double> flat(a.data(), p * p);
  double norm = std::sqrt(simd::dot(v, v));
  for (double& x : v) x /= norm;

  double sigma = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    simd::matvec(flat, v, w);
    const double next = std::sqrt(simd::dot(w, w));
    if (next == 0.0) return 0.0;
    for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / next;
    if (it > 0 && std::abs(next - sigma) <= options.tolerance * next) return next;
    sigma = next;
  }
  throw NumericalError("power iteration did not converge in " +
                           std::to_string(options.max_iterations) + " iterations",
                       sigma);
}

TargetNorms target_norms(const CovMatrix& target, const SpectralOptions& options) {
  const Matrix& v = target.values();
  return {frobenius_norm(v), induced_l1_norm(v), max_norm(v), spectral_norm(v, options)};
}

ErrorReport error_report(const CovMatrix& est, const CovMatrix& target,
                         const SpectralOptions& options) {
  return error_report(est, target, target_norms(target, options), options);
}

ErrorReport error_report(const CovMatrix& est, const CovMatrix& target, const TargetNorms& norms,
                         const SpectralOptions& options) {
  if (est.dim() != target.dim()) {
    throw InputError("estimate is " + std::to_string(est.dim()) + " x " +
                     std::to_string(est.dim()) + " but target is " +
                     std::to_string(target.dim()) + " x " + std::to_string(target.dim()));
  }
  const Matrix e = est.values() - target.values();
  ErrorReport r;
  r.frob = frobenius_norm(e);
  r.l1 = induced_l1_norm(e);
  r.max = max_norm(e);
  r.spectral = spectral_norm(e, options);
  r.rel_frob = r.frob / std::max(norms.frob, kRelativeSafeguard);
  r.rel_l1 = r.l1 / std::max(norms.l1, kRelativeSafeguard);
  r.rel_max = r.max / std::max(norms.max, kRelativeSafeguard);
  r.rel_spectral = r.spectral / std::max(norms.spectral, kRelativeSafeguard);
  return r;
}

}  // namespace lrcov
