#include <cmath>
#include <random>

#include "doctest.h"
#include "lrcov/metrics.hpp"
#include "oracles.hpp"
#include "regularize_properties.hpp"

using namespace lrcov;

TEST_CASE("norms of a 2x2 example") {
  Matrix a(2, 2);
  a << 3, -4, -4, 3;
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(50.0)));
  CHECK(induced_l1_norm(a) == 7.0);
  CHECK(max_norm(a) == 4.0);
  CHECK(spectral_norm(a) == doctest::Approx(7.0));
  SpectralOptions power;
  power.dense_threshold = 0;
  CHECK(spectral_norm(a, power) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("norms of simple matrices") {
  for (std::size_t p : {1u, 5u, 70u}) {
    const Matrix eye = Matrix::Identity(p, p);
    CHECK(frobenius_norm(eye) == doctest::Approx(std::sqrt(static_cast<double>(p))));
    CHECK(spectral_norm(eye) == doctest::Approx(1.0));
    const Matrix zero = Matrix::Zero(p, p);
    CHECK(frobenius_norm(zero) == 0.0);
    CHECK(max_norm(zero) == 0.0);
    CHECK(spectral_norm(zero) == 0.0);
  }
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, -5, 2;
  CHECK(induced_l1_norm(d) == 5.0);
  Eigen::VectorXd u(4);
  u << 0.5, -3, 1, 2;
  const Matrix r1 = u * u.transpose();
  CHECK(max_norm(r1) == 9.0);
}

TEST_CASE("norms against definitional loops") {
  std::mt19937_64 rng(23);
  for (std::size_t p : {5u, 8u, 40u, 90u}) {
    const CovMatrix a = props::random_symmetric(p, rng);
    const auto oa = oracle::from_eigen(a.values());
    CHECK(frobenius_norm(a.values()) == doctest::Approx(oracle::frobenius(oa)).epsilon(1e-12));
    CHECK(induced_l1_norm(a.values()) == doctest::Approx(oracle::induced_l1(oa)).epsilon(1e-14));
    CHECK(max_norm(a.values()) == oracle::max_entry(oa));
    const double spec = oracle::spectral(oa);
    CHECK(spectral_norm(a.values()) == doctest::Approx(spec).epsilon(1e-8));
    SpectralOptions power;
    power.dense_threshold = 0;
    power.max_iterations = 200000;
    CHECK(spectral_norm(a.values(), power) == doctest::Approx(spec).epsilon(1e-6));
  }
}

TEST_CASE("norm inequalities, triangle inequality and scaling") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t p = 2 + trial % 15;
    const Matrix a = props::random_symmetric(p, rng).values();
    const Matrix b = props::random_symmetric(p, rng).values();
    const double pd = static_cast<double>(p);
    CHECK(max_norm(a) <= spectral_norm(a) + 1e-8);
    CHECK(spectral_norm(a) <= frobenius_norm(a) + 1e-8);
    CHECK(frobenius_norm(a) <= pd * max_norm(a) + 1e-8);
    CHECK(spectral_norm(a) <= induced_l1_norm(a) + 1e-8);
    CHECK(frobenius_norm(a + b) <= frobenius_norm(a) + frobenius_norm(b) + 1e-8);
    CHECK(induced_l1_norm(a + b) <= induced_l1_norm(a) + induced_l1_norm(b) + 1e-8);
    CHECK(max_norm(a + b) <= max_norm(a) + max_norm(b) + 1e-8);
    CHECK(spectral_norm(a + b) <= spectral_norm(a) + spectral_norm(b) + 1e-8);
    CHECK(spectral_norm(-2.5 * a) == doctest::Approx(2.5 * spectral_norm(a)).epsilon(1e-8));
  }
}

TEST_CASE("power iteration reports non-convergence") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 1.0, 1.0 - 1e-9, 0.5;
  SpectralOptions opts;
  opts.dense_threshold = 0;
  opts.max_iterations = 3;
  opts.tolerance = 1e-16;
  Matrix b = a;
  b(0, 1) = b(1, 0) = 0.3;
  CHECK_THROWS_AS(spectral_norm(b, opts), NumericalError);
  try {
    spectral_norm(b, opts);
  } catch (const NumericalError& e) {
    CHECK(e.last_estimate() > 0.0);
  }
}

TEST_CASE("error report") {
  std::mt19937_64 rng(31);
  const CovMatrix t = props::random_symmetric(6, rng);
  const ErrorReport same = error_report(t, t);
  CHECK(same.frob == 0.0);
  CHECK(same.rel_spectral == 0.0);
  const CovMatrix e = props::random_symmetric(6, rng);
  const ErrorReport r = error_report(e, t);
  const auto diff = oracle::from_eigen(e.values() - t.values());
  const auto ot = oracle::from_eigen(t.values());
  CHECK(r.frob == doctest::Approx(oracle::frobenius(diff)).epsilon(1e-12));
  CHECK(r.l1 == doctest::Approx(oracle::induced_l1(diff)).epsilon(1e-12));
  CHECK(r.max == doctest::Approx(oracle::max_entry(diff)).epsilon(1e-12));
  CHECK(r.spectral == doctest::Approx(oracle::spectral(diff)).epsilon(1e-8));
  CHECK(r.rel_frob == doctest::Approx(r.frob / oracle::frobenius(ot)).epsilon(1e-12));
  CHECK(r.rel_l1 == doctest::Approx(r.l1 / oracle::induced_l1(ot)).epsilon(1e-12));
  CHECK(r.rel_max == doctest::Approx(r.max / oracle::max_entry(ot)).epsilon(1e-12));
  CHECK(r.rel_spectral == doctest::Approx(r.spectral / oracle::spectral(ot)).epsilon(1e-8));
  const ErrorReport zero_target = error_report(e, CovMatrix::zeros(6));
  CHECK(zero_target.rel_frob == doctest::Approx(zero_target.frob / 1e-12));
  CHECK_THROWS_AS(error_report(e, CovMatrix::zeros(5)), InputError);
}
