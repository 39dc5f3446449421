#include "lrcov/kernels.hpp"

namespace lrcov::simd {
namespace {

void cross_product_rows(const double* a, const double* b, std::size_t rows, std::size_t cols,
                        std::size_t ld, double* out, std::size_t r_begin, std::size_t r_end) {
  for (std::size_t r = r_begin; r < r_end; ++r) {
    double* dst = out + r * cols;
    for (std::size_t s = 0; s < cols; ++s) dst[s] = 0.0;
  }
  for (std::size_t t = 0; t < rows; ++t) {
    const double* at = a + t * ld;
    const double* bt = b + t * ld;
    for (std::size_t r = r_begin; r < r_end; ++r) {
      const double ar = at[r];
      double* dst = out + r * cols;
      for (std::size_t s = 0; s < cols; ++s) dst[s] += ar * bt[s];
    }
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

constexpr KernelTable kTable{cross_product_rows, axpy, sum_squared_diff, dot};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kTable; }

}  // namespace lrcov::simd
