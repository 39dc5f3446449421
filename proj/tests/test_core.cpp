#include <cmath>
#include <vector>

#include "doctest.h"
#include "lrcov/core.hpp"

using namespace lrcov;

TEST_CASE("kernel values") {
  const KernelSpec k2 = KernelSpec::truncated_polynomial(2.0);
  CHECK(kernel_eval(k2, 0.0) == 1.0);
  CHECK(kernel_eval(k2, 0.5) == 0.75);
  CHECK(kernel_eval(k2, 1.0) == 0.0);
  CHECK(kernel_eval(k2, 1.5) == 0.0);
  CHECK(kernel_eval(KernelSpec::bartlett(), 1.5) == 0.0);
  CHECK(kernel_eval(KernelSpec::bartlett(), 0.25) == 0.75);

  // Reference values evaluated in 30-digit arithmetic.
  const KernelSpec qs = KernelSpec::quadratic_spectral();
  CHECK(kernel_eval(qs, 0.0) == 1.0);
  CHECK(kernel_eval(qs, 0.5) == doctest::Approx(0.686930730064059446634).epsilon(1e-13));
  CHECK(kernel_eval(qs, 1.0) == doctest::Approx(0.13786058167459355).epsilon(1e-12));
  CHECK(kernel_eval(qs, 2.0) == doctest::Approx(-0.0096508008555533).epsilon(1e-10));
  CHECK(kernel_eval(qs, 0.25) == doctest::Approx(0.91394557824356908).epsilon(1e-13));
  CHECK(kernel_eval(qs, 1e-9) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_eval(qs, 2e-8) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(kernel_eval(k2, std::nan("")), InputError);
  CHECK_THROWS_AS(kernel_eval(qs, INFINITY), InputError);
}

TEST_CASE("kernels are even") {
  for (const KernelSpec& k : {KernelSpec::truncated_polynomial(2.0), KernelSpec::truncated_polynomial(1.5),
                              KernelSpec::bartlett(), KernelSpec::quadratic_spectral()}) {
    for (double x = -3.0; x <= 3.0; x += 0.0137) CHECK(kernel_eval(k, x) == kernel_eval(k, -x));
  }
}

TEST_CASE("truncated polynomial smoothness bound") {
  const KernelSpec k2 = KernelSpec::truncated_polynomial(2.0);
  for (int i = 0; i <= 1000; ++i) {
    const double x = -1.0 + 2.0 * i / 1000.0;
    CHECK(std::abs(1.0 - kernel_eval(k2, x)) <= x * x + 1e-15);
  }
}

TEST_CASE("difference sequence validation") {
  CHECK_NOTHROW(validate_diff_sequence(std::vector<double>{0.1942, 0.2809, 0.3832, -0.8582}));
  CHECK_NOTHROW(validate_diff_sequence(std::vector<double>{1 / std::sqrt(2.0), -1 / std::sqrt(2.0)}));
  CHECK_THROWS_AS(validate_diff_sequence(std::vector<double>{1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate_diff_sequence(std::vector<double>{2.0, -2.0}), ConfigError);
  CHECK_THROWS_AS(validate_diff_sequence(std::vector<double>{}), ConfigError);
  CHECK(standard_diff_sequence().size() == 4);
}

TEST_CASE("default bandwidth") {
  const auto direct = [](std::size_t n, std::size_t p) {
    const double a = std::floor(std::pow(static_cast<double>(n) / std::log(static_cast<double>(p)), 0.25));
    const double b = std::floor((static_cast<double>(n) - 10.0) / 28.0);
    return static_cast<std::size_t>(std::min(a, b));
  };
  CHECK(default_bandwidth(200, 300) == 2);
  CHECK(default_bandwidth(1600, 300) == 4);
  CHECK(default_bandwidth(39, 2) == 1);
  for (std::size_t n : {39u, 60u, 120u, 200u, 400u, 800u, 960u, 1600u, 5000u}) {
    for (std::size_t p : {2u, 5u, 50u, 300u, 1000u}) CHECK(default_bandwidth(n, p) == direct(n, p));
  }
  for (std::size_t p : {2u, 30u, 300u}) {
    std::size_t prev = 0;
    for (std::size_t n = 39; n < 3000; n += 17) {
      const std::size_t b = default_bandwidth(n, p);
      CHECK(b >= prev);
      prev = b;
    }
  }
  for (std::size_t n : {100u, 1000u}) {
    std::size_t prev = 1000;
    for (std::size_t p = 2; p < 2000; p += 37) {
      const std::size_t b = default_bandwidth(n, p);
      CHECK(b <= prev);
      prev = b;
    }
  }
  CHECK(default_bandwidth(38, 10) == 1);
  CHECK_THROWS_AS(default_bandwidth(37, 10), ConfigError);
  CHECK_THROWS_AS(default_bandwidth(200, 1), ConfigError);
}

TEST_CASE("diff config") {
  const DiffConfig cfg = DiffConfig::standard(200, 300);
  CHECK(cfg.order() == 3);
  CHECK(cfg.bandwidth() == 2);
  CHECK(cfg.spacing() == 4);
  CHECK(cfg.span() == 12);
  CHECK_NOTHROW(cfg.check_fits(15));
  CHECK_THROWS_AS(cfg.check_fits(14), ConfigError);
  CHECK_THROWS_AS(DiffConfig({1.0, 1.0}, 1, 1), ConfigError);
  CHECK_THROWS_AS(DiffConfig(standard_diff_sequence(), 0, 1), ConfigError);
  CHECK_THROWS_AS(DiffConfig(standard_diff_sequence(), 1, 0), ConfigError);
  const DiffConfig small = cfg.rescaled_for(120, 300);
  CHECK(small.bandwidth() == default_bandwidth(120, 300));
  CHECK(small.spacing() == 2 * small.bandwidth());
}

TEST_CASE("panel validation") {
  Matrix m(3, 2);
  m << 1, 2, 3, 4, 5, 6;
  const TimeSeriesPanel x(m);
  CHECK(x.n() == 3);
  CHECK(x.p() == 2);
  const TimeSeriesPanel s = x.slice(1, 3);
  CHECK(s.n() == 2);
  CHECK(s.data()(0, 0) == 3);
  CHECK_THROWS_AS(TimeSeriesPanel(Matrix(1, 2)), InputError);
  Matrix bad = m;
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(TimeSeriesPanel{bad}, InputError);
}
