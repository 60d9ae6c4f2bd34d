#include <atomic>
#include <string>

#include "hcp/error.hpp"
#include "hcp/kernels.hpp"

namespace hcp::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(HCP_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept { return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar; }

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) noexcept {
  return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (!backend_available(b))
    throw ConfigError("kernel backend '" + std::string(backend_name(b)) + "' not supported on this CPU");
  current().store(b, std::memory_order_relaxed);
}

void reset_backend() noexcept { current().store(detect(), std::memory_order_relaxed); }

#if defined(HCP_HAVE_AVX2_KERNELS)
#define HCP_DISPATCH(fn, ...)                                                   \
  (active_backend() == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define HCP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("dot: length mismatch");
  return HCP_DISPATCH(dot, a, b);
}

double quad_form(std::span<const double> a, std::size_t dim, std::span<const double> x) {
  if (a.size() != dim * dim || x.size() != dim) throw ValidationError("quad_form: dimension mismatch");
  return HCP_DISPATCH(quad_form, a, dim, x);
}

std::size_t count_in_range(std::span<const double> v, double lo, double hi) {
  return HCP_DISPATCH(count_in_range, v, lo, hi);
}

#undef HCP_DISPATCH

}  // namespace hcp::kernels
