// Compiled with -mavx2 only. Multiplies and adds stay separate (no FMA) so
// cross_product matches the scalar reference bit for bit.

#include "lrcov/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>

namespace lrcov::simd {
namespace {

constexpr std::size_t kRowBlock = 4;    // output rows held in registers
constexpr std::size_t kTimeBlock = 64;  // input rows per cache tile

// Continues the accumulation of out rows [r0, r0 + 4) over input rows
// [t0, t1). Two 4-wide column vectors per output row: 8 accumulators.
inline void block4(const double* a, const double* b, std::size_t t0, std::size_t t1,
                   std::size_t cols, std::size_t ld, double* out, std::size_t r0) {
  double* o0 = out + (r0 + 0) * cols;
  double* o1 = out + (r0 + 1) * cols;
  double* o2 = out + (r0 + 2) * cols;
  double* o3 = out + (r0 + 3) * cols;
  std::size_t s = 0;
  for (; s + 8 <= cols; s += 8) {
    __m256d c00 = _mm256_loadu_pd(o0 + s), c01 = _mm256_loadu_pd(o0 + s + 4);
    __m256d c10 = _mm256_loadu_pd(o1 + s), c11 = _mm256_loadu_pd(o1 + s + 4);
    __m256d c20 = _mm256_loadu_pd(o2 + s), c21 = _mm256_loadu_pd(o2 + s + 4);
    __m256d c30 = _mm256_loadu_pd(o3 + s), c31 = _mm256_loadu_pd(o3 + s + 4);
    for (std::size_t t = t0; t < t1; ++t) {
      const double* at = a + t * ld + r0;
      const double* bt = b + t * ld + s;
      const __m256d b0 = _mm256_loadu_pd(bt);
      const __m256d b1 = _mm256_loadu_pd(bt + 4);
      __m256d x = _mm256_broadcast_sd(at + 0);
      c00 = _mm256_add_pd(c00, _mm256_mul_pd(x, b0));
      c01 = _mm256_add_pd(c01, _mm256_mul_pd(x, b1));
      x = _mm256_broadcast_sd(at + 1);
      c10 = _mm256_add_pd(c10, _mm256_mul_pd(x, b0));
      c11 = _mm256_add_pd(c11, _mm256_mul_pd(x, b1));
      x = _mm256_broadcast_sd(at + 2);
      c20 = _mm256_add_pd(c20, _mm256_mul_pd(x, b0));
      c21 = _mm256_add_pd(c21, _mm256_mul_pd(x, b1));
      x = _mm256_broadcast_sd(at + 3);
      c30 = _mm256_add_pd(c30, _mm256_mul_pd(x, b0));
      c31 = _mm256_add_pd(c31, _mm256_mul_pd(x, b1));
    }
    _mm256_storeu_pd(o0 + s, c00), _mm256_storeu_pd(o0 + s + 4, c01);
    _mm256_storeu_pd(o1 + s, c10), _mm256_storeu_pd(o1 + s + 4, c11);
    _mm256_storeu_pd(o2 + s, c20), _mm256_storeu_pd(o2 + s + 4, c21);
    _mm256_storeu_pd(o3 + s, c30), _mm256_storeu_pd(o3 + s + 4, c31);
  }
  for (; s + 4 <= cols; s += 4) {
    __m256d c0 = _mm256_loadu_pd(o0 + s), c1 = _mm256_loadu_pd(o1 + s);
    __m256d c2 = _mm256_loadu_pd(o2 + s), c3 = _mm256_loadu_pd(o3 + s);
    for (std::size_t t = t0; t < t1; ++t) {
      const double* at = a + t * ld + r0;
      const __m256d bv = _mm256_loadu_pd(b + t * ld + s);
      c0 = _mm256_add_pd(c0, _mm256_mul_pd(_mm256_broadcast_sd(at + 0), bv));
      c1 = _mm256_add_pd(c1, _mm256_mul_pd(_mm256_broadcast_sd(at + 1), bv));
      c2 = _mm256_add_pd(c2, _mm256_mul_pd(_mm256_broadcast_sd(at + 2), bv));
      c3 = _mm256_add_pd(c3, _mm256_mul_pd(_mm256_broadcast_sd(at + 3), bv));
    }
    _mm256_storeu_pd(o0 + s, c0), _mm256_storeu_pd(o1 + s, c1);
    _mm256_storeu_pd(o2 + s, c2), _mm256_storeu_pd(o3 + s, c3);
  }
  for (; s < cols; ++s) {
    for (std::size_t i = 0; i < kRowBlock; ++i) {
      double c = out[(r0 + i) * cols + s];
      for (std::size_t t = t0; t < t1; ++t) c += a[t * ld + r0 + i] * b[t * ld + s];
      out[(r0 + i) * cols + s] = c;
    }
  }
}

inline void single_row(const double* a, const double* b, std::size_t t0, std::size_t t1,
                       std::size_t cols, std::size_t ld, double* out, std::size_t r) {
  double* o = out + r * cols;
  std::size_t s = 0;
  for (; s + 4 <= cols; s += 4) {
    __m256d c = _mm256_loadu_pd(o + s);
    for (std::size_t t = t0; t < t1; ++t) {
      c = _mm256_add_pd(c, _mm256_mul_pd(_mm256_broadcast_sd(a + t * ld + r),
                                         _mm256_loadu_pd(b + t * ld + s)));
    }
    _mm256_storeu_pd(o + s, c);
  }
  for (; s < cols; ++s) {
    double c = o[s];
    for (std::size_t t = t0; t < t1; ++t) c += a[t * ld + r] * b[t * ld + s];
    o[s] = c;
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
    for (; r + kRowBlock <= r_end; r += kRowBlock) block4(a, b, t0, t1, cols, ld, out, r);
    for (; r < r_end; ++r) single_row(a, b, t0, t1, cols, ld, out, r);
  }
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_squared_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

constexpr KernelTable kTable{cross_product_rows, axpy, sum_squared_diff, dot};

}  // namespace

const KernelTable* avx2_kernels() noexcept { return &kTable; }

}  // namespace lrcov::simd

#else

namespace lrcov::simd {
const KernelTable* avx2_kernels() noexcept { return nullptr; }
}  // namespace lrcov::simd

#endif
