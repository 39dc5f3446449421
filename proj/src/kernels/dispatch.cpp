#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "lrcov/error.hpp"
#include "lrcov/kernels.hpp"

namespace lrcov::simd {
namespace {

const KernelTable* table_for(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return &scalar_kernels();
    case Backend::Avx2:
      return avx2_kernels();
    case Backend::Neon:
      return neon_kernels();
  }
  return nullptr;
}

bool cpu_supports(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect() noexcept {
  if (const char* env = std::getenv("LRCOV_SIMD")) {
    const std::string want(env);
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
      if (want == backend_name(b) && backend_available(b)) return b;
    }
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

struct State {
  std::atomic<Backend> backend{detect()};
};

State& state() {
  static State s;
  return s;
}

const KernelTable& active() noexcept { return *table_for(state().backend.load()); }

void check_size(std::size_t have, std::size_t need, const char* what) {
  if (have < need) throw InputError(std::string("kernel buffer too small: ") + what);
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) noexcept {
  return table_for(backend) != nullptr && cpu_supports(backend);
}

Backend active_backend() noexcept { return state().backend.load(); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw ConfigError("SIMD backend '" + std::string(backend_name(backend)) +
                      "' is not available on this machine");
  }
  state().backend.store(backend);
}

void cross_product(std::span<const double> a, std::span<const double> b, std::size_t rows,
                   std::size_t cols, std::size_t ld, std::span<double> out) {
  if (rows > 0) {
    check_size(a.size(), (rows - 1) * ld + cols, "a");
    check_size(b.size(), (rows - 1) * ld + cols, "b");
  }
  check_size(out.size(), cols * cols, "out");
  const KernelTable& k = active();
  constexpr std::size_t kChunk = 16;
  const std::size_t chunks = (cols + kChunk - 1) / kChunk;
  const bool parallel = rows * cols * cols > (1u << 18) && chunks > 1 && !omp_in_parallel();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t r0 = c * kChunk;
    const std::size_t r1 = std::min(cols, r0 + kChunk);
    k.cross_product_rows(a.data(), b.data(), rows, cols, ld, out.data(), r0, r1);
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_size(y.size(), x.size(), "y");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  check_size(b.size(), a.size(), "b");
  return active().sum_squared_diff(a.data(), b.data(), a.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_size(b.size(), a.size(), "b");
  return active().dot(a.data(), b.data(), a.size());
}

void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  check_size(a.size(), n * n, "a");
  check_size(y.size(), n, "y");
  const KernelTable& k = active();
  for (std::size_t i = 0; i < n; ++i) y[i] = k.dot(a.data() + i * n, x.data(), n);
}

}  // namespace lrcov::simd
