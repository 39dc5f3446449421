#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Cholesky>

#include "lrcov/random.hpp"
#include "lrcov/simulate.hpp"

namespace lrcov {

namespace {

constexpr std::uint64_t kPermutationStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

}  // namespace

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Tridiagonal:
      return "tri";
    case ModelKind::Toeplitz:
      return "toeplitz";
    case ModelKind::PermutedBlock:
      return "permblock";
  }
  return "?";
}

SimModel SimModel::tridiagonal(std::size_t n, std::size_t p, double a) {
  SimModel m;
  m.kind = ModelKind::Tridiagonal;
  m.param = a;
  m.n = n;
  m.p = p;
  m.mean_coords = std::min(m.mean_coords, p);
  return m;
}

SimModel SimModel::toeplitz(std::size_t n, std::size_t p, double rho) {
  SimModel m = tridiagonal(n, p);
  m.kind = ModelKind::Toeplitz;
  m.param = rho;
  return m;
}

SimModel SimModel::permuted_block(std::size_t n, std::size_t p, double rho) {
  SimModel m = tridiagonal(n, p);
  m.kind = ModelKind::PermutedBlock;
  m.param = rho;
  return m;
}

void SimModel::validate() const {
  if (n < 2) throw ConfigError("simulated series needs n >= 2");
  if (p < 1) throw ConfigError("simulated series needs p >= 1");
  if (!(std::abs(phi) < 1.0)) throw ConfigError("AR coefficient must satisfy |phi| < 1");
  if (mean_coords > p) throw ConfigError("mean_coords cannot exceed p");
  if (!std::isfinite(param)) throw ConfigError("model parameter must be finite");
  if (kind != ModelKind::Tridiagonal && !(std::abs(param) < 1.0)) {
    throw ConfigError("correlation parameter must satisfy |rho| < 1");
  }
  if (kind == ModelKind::PermutedBlock && p % 2 != 0) {
    throw ConfigError("permuted block model needs an even dimension p");
  }
}

CovMatrix make_sigma_eps(const SimModel& model) {
  model.validate();
  const auto p = static_cast<Eigen::Index>(model.p);
  Matrix sigma = Matrix::Zero(p, p);
  switch (model.kind) {
    case ModelKind::Tridiagonal: {
      const double a = model.param;
      for (Eigen::Index i = 0; i < p; ++i) sigma(i, i) = i == 0 ? 1.0 : 1.0 + a * a;
      for (Eigen::Index i = 1; i < p; ++i) sigma(i, i - 1) = sigma(i - 1, i) = a;
      break;
    }
    case ModelKind::Toeplitz: {
      for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
          sigma(i, j) = std::pow(model.param, static_cast<double>(std::abs(i - j)));
        }
      }
      break;
    }
    case ModelKind::PermutedBlock: {
      std::vector<Eigen::Index> perm(model.p);
      std::iota(perm.begin(), perm.end(), Eigen::Index{0});
      std::mt19937_64 rng(derive_seed(model.seed, kPermutationStream));
      std::shuffle(perm.begin(), perm.end(), rng);
      // Sigma = P Sigma0 P^T: block entry (i, j) of Sigma0 lands at (perm[i], perm[j]).
      for (Eigen::Index i = 0; i < p; ++i) sigma(perm[i], perm[i]) = 1.0;
      for (Eigen::Index i = 0; i + 1 < p; i += 2) {
        sigma(perm[i], perm[i + 1]) = model.param;
        sigma(perm[i + 1], perm[i]) = model.param;
      }
      break;
    }
  }
  return CovMatrix::from_symmetric(std::move(sigma));
}

CovMatrix target_lrc(const CovMatrix& sigma_eps, double phi) {
  if (!(std::abs(phi) < 1.0)) throw ConfigError("AR coefficient must satisfy |phi| < 1");
  return CovMatrix::from_symmetric(sigma_eps.values() / ((1.0 - phi) * (1.0 - phi)));
}

double mean_function(double t) {
  return std::exp(t) + (t > 0.3 ? 1.0 : 0.0) + (t > 0.6 ? 2.0 : 0.0) + (t > 0.8 ? 4.0 : 0.0);
}

Matrix mean_path(std::size_t n, std::size_t p, std::size_t m_coords) {
  if (m_coords > p) throw ConfigError("mean_coords cannot exceed p");
  Matrix mu = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 1; i <= n; ++i) {
    const double value = mean_function(static_cast<double>(i) / static_cast<double>(n));
    for (std::size_t j = 0; j < m_coords; ++j) {
      mu(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) = value;
    }
  }
  return mu;
}

SimulatedSeries gen_series(const SimModel& model) {
  model.validate();
  const CovMatrix sigma = make_sigma_eps(model);
  const auto p = static_cast<Eigen::Index>(model.p);

  Eigen::LLT<Eigen::MatrixXd> llt(sigma.values());
  if (llt.info() != Eigen::Success) {
    llt.compute(sigma.values() + 1e-12 * Eigen::MatrixXd::Identity(p, p));
    if (llt.info() != Eigen::Success) {
      throw NumericalError("innovation covariance is not positive definite");
    }
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  const auto steps = static_cast<Eigen::Index>(model.burn_in + model.n);
  std::mt19937_64 rng(derive_seed(model.seed, kNoiseStream));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix white(steps, p);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) white(t, j) = normal(rng);
  }
  // Row t of eps is L e_t.
  const Matrix eps = white * lower.transpose();

  SimulatedSeries out;
  out.z.resize(static_cast<Eigen::Index>(model.n), p);
  Eigen::RowVectorXd state = Eigen::RowVectorXd::Zero(p);
  const auto burn = static_cast<Eigen::Index>(model.burn_in);
  for (Eigen::Index t = 0; t < steps; ++t) {
    state = model.phi * state + eps.row(t);
    if (t >= burn) out.z.row(t - burn) = state;
  }
  out.mu = mean_path(model.n, model.p, model.mean_coords);
  out.x = out.mu + out.z;
  return out;
}

}  // namespace lrcov
