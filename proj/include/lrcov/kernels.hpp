#pragma once

// Inner-loop arithmetic shared by the estimators, regularizers and norms.
//
// Every routine has a portable scalar reference implementation and, where the
// target supports it, an AVX2 (x86-64) or NEON (AArch64) variant. The variant
// is chosen once at startup from the CPU features and may be overridden with
// the LRCOV_SIMD environment variable (scalar, avx2, neon) or set_backend().
//
// cross_product and axpy produce bitwise identical results on every backend:
// each output entry is accumulated in ascending row order using separate
// multiply and add instructions. The reductions (dot products, squared
// differences) use lane-parallel partial sums and agree with the scalar
// reference only to rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace lrcov::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend) noexcept;

/// True when `backend` was compiled in and the running CPU supports it.
bool backend_available(Backend backend) noexcept;

Backend active_backend() noexcept;

/// Throws ConfigError when the backend is not available.
void set_backend(Backend backend);

/// out[r * cols + s] = sum_{t < rows} a[t * ld + r] * b[t * ld + s]
/// for r, s < cols. `out` is overwritten. Parallelized over output rows when
/// OpenMP threads are available; the result does not depend on thread count.
void cross_product(std::span<const double> a, std::span<const double> b, std::size_t rows,
                   std::size_t cols, std::size_t ld, std::span<double> out);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// sum_i (a_i - b_i)^2
double sum_squared_diff(std::span<const double> a, std::span<const double> b);

/// y = A x for a row-major n x n matrix A.
void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);

/// Function table implemented by each backend. Exposed for the equivalence
/// tests, which call the variants directly.
struct KernelTable {
  // Writes rows [r_begin, r_end) of the cross product.
  void (*cross_product_rows)(const double* a, const double* b, std::size_t rows, std::size_t cols,
                             std::size_t ld, double* out, std::size_t r_begin, std::size_t r_end);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum_squared_diff)(const double* a, const double* b, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the backend is not compiled in.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

}  // namespace lrcov::simd
