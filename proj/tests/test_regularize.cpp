#include <cmath>
#include <random>

#include "doctest.h"
#include "lrcov/regularize.hpp"
#include "oracles.hpp"
#include "regularize_properties.hpp"

using namespace lrcov;

namespace {

CovMatrix two_by_two(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return CovMatrix::from_symmetric(m);
}

}  // namespace

TEST_CASE("hard threshold") {
  const CovMatrix v = two_by_two(0.1, 0.3, 0.2);
  const CovMatrix h = hard_threshold(v, 0.5);
  CHECK(h(0, 0) == 0.1);
  CHECK(h(1, 1) == 0.2);
  CHECK(h(0, 1) == 0.0);
  CHECK(h(1, 0) == 0.0);
  CHECK(hard_threshold(v, 0.0).values() == v.values());
  CHECK(hard_threshold(v, 0.3)(0, 1) == 0.3);
  CHECK_THROWS_AS(hard_threshold(v, -0.1), ConfigError);
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(two_by_two(1, 0.7, 1), 0.5)(0, 1) == doctest::Approx(0.2));
  CHECK(soft_threshold(two_by_two(1, -0.7, 1), 0.5)(1, 0) == doctest::Approx(-0.2));
  CHECK(soft_threshold(two_by_two(1, -0.3, 1), 0.5)(0, 1) == 0.0);
  CHECK(soft_threshold(two_by_two(1, 0.5, 1), 0.5)(0, 1) == 0.0);
  const CovMatrix v = two_by_two(-2, 0.4, 3);
  CHECK(soft_threshold(v, 0.0).values() == v.values());
  CHECK(soft_threshold(v, 9.0)(0, 0) == -2.0);
  CHECK(has_nonpositive_diagonal(v));
  CHECK_THROWS_AS(soft_threshold(v, std::nan("")), ConfigError);
}

TEST_CASE("taper weights") {
  CHECK(taper_weight(0, 2, 4) == 1.0);
  CHECK(taper_weight(3, 0, 4) == 0.5);
  CHECK(taper_weight(0, 4, 4) == 0.0);
  CHECK(taper_weight(7, 1, 4) == 0.0);
  CHECK(taper_weight(5, 5, 1) == 1.0);
  CHECK(taper_weight(0, 1, 3) == 1.0);
  CHECK(taper_weight(0, 2, 3) == doctest::Approx(2.0 / 3.0));
  for (std::size_t k = 1; k < 12; ++k) {
    const TaperWeights w(30, k);
    for (std::size_t i = 0; i < 30; ++i) {
      CHECK(w.row_nonzeros(i) <= 2 * k - 1);
      std::size_t count = 0;
      for (std::size_t j = 0; j < 30; ++j) {
        CHECK(w(i, j) == w(j, i));
        CHECK(w(i, j) >= 0.0);
        CHECK(w(i, j) <= 1.0);
        if (w(i, j) != 0.0) ++count;
      }
      CHECK(count == w.row_nonzeros(i));
    }
  }
  CHECK_THROWS_AS(TaperWeights(5, 0), ConfigError);
}

TEST_CASE("taper") {
  std::mt19937_64 rng(5);
  const CovMatrix v = props::random_symmetric(6, rng);
  CHECK(taper(v, 10).values() == v.values());
  const CovMatrix diag = taper(v, 1);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(diag(i, j) == (i == j ? v(i, i) : 0.0));
  }
  const CovMatrix t4 = taper(v, 4);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      const double dist = std::abs(static_cast<double>(i) - static_cast<double>(j));
      const double w = dist <= 2.0 ? 1.0 : (dist >= 4.0 ? 0.0 : 2.0 - 2.0 * dist / 4.0);
      CHECK(std::abs(t4(i, j) - w * v(i, j)) < 1e-15);
    }
  }
}

TEST_CASE("regularizer properties") { CHECK(props::check_regularizers(400, 17) == ""); }
