// AArch64 variant. Mirrors the AVX2 layout with 2-wide float64 vectors;
// vmulq/vaddq are kept separate (vfmaq would change rounding).

#include "lrcov/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>

namespace lrcov::simd {
namespace {

constexpr std::size_t kTimeBlock = 64;

inline void block2(const double* a, const double* b, std::size_t t0, std::size_t t1,
                   std::size_t cols, std::size_t ld, double* out, std::size_t r0) {
  double* o0 = out + r0 * cols;
  double* o1 = out + (r0 + 1) * cols;
  std::size_t s = 0;
  for (; s + 4 <= cols; s += 4) {
    float64x2_t c00 = vld1q_f64(o0 + s), c01 = vld1q_f64(o0 + s + 2);
    float64x2_t c10 = vld1q_f64(o1 + s), c11 = vld1q_f64(o1 + s + 2);
    for (std::size_t t = t0; t < t1; ++t) {
      const double* bt = b + t * ld + s;
      const float64x2_t b0 = vld1q_f64(bt);
      const float64x2_t b1 = vld1q_f64(bt + 2);
      const float64x2_t x0 = vdupq_n_f64(a[t * ld + r0]);
      const float64x2_t x1 = vdupq_n_f64(a[t * ld + r0 + 1]);
      c00 = vaddq_f64(c00, vmulq_f64(x0, b0));
      c01 = vaddq_f64(c01, vmulq_f64(x0, b1));
      c10 = vaddq_f64(c10, vmulq_f64(x1, b0));
      c11 = vaddq_f64(c11, vmulq_f64(x1, b1));
    }
    vst1q_f64(o0 + s, c00), vst1q_f64(o0 + s + 2, c01);
    vst1q_f64(o1 + s, c10), vst1q_f64(o1 + s + 2, c11);
  }
  for (; s < cols; ++s) {
    for (std::size_t i = 0; i < 2; ++i) {
      double c = out[(r0 + i) * cols + s];
      for (std::size_t t = t0; t < t1; ++t) c += a[t * ld + r0 + i] * b[t * ld + s];
      out[(r0 + i) * cols + s] = c;
    }
  }
}

void cross_product_rows(const double* a, const double* b, std::size_t rows, std::size_t cols,
                        std::size_t ld, double* out, std::size_t r_begin, std::size_t r_end) {
  for (std::size_t r = r_begin; r < r_end; ++r) {
    std::fill(out + r * cols, out + (r + 1) * cols, 0.0);
  }
  for (std::size_t t0 = 0; t0 < rows; t0 += kTimeBlock) {
    const std::size_t t1 = std::min(rows, t0 + kTimeBlock);
    std::size_t r = r_begin;
    for (; r + 2 <= r_end; r += 2) block2(a, b, t0, t1, cols, ld, out, r);
    for (; r < r_end; ++r) {
      for (std::size_t s = 0; s < cols; ++s) {
        double c = out[r * cols + s];
        for (std::size_t t = t0; t < t1; ++t) c += a[t * ld + r] * b[t * ld + s];
        out[r * cols + s] = c;
      }
    }
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

constexpr KernelTable kTable{cross_product_rows, axpy, sum_squared_diff, dot};

}  // namespace

const KernelTable* neon_kernels() noexcept { return &kTable; }

}  // namespace lrcov::simd

#else

namespace lrcov::simd {
const KernelTable* neon_kernels() noexcept { return nullptr; }
}  // namespace lrcov::simd

#endif
