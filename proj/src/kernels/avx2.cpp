// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// CPUID check, so nothing in this file may be inlined into generic code.

#include <immintrin.h>

#include "hcp/kernels.hpp"

namespace hcp::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_raw(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  return dot_raw(a.data(), b.data(), a.size());
}

double quad_form(std::span<const double> a, std::size_t dim, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) acc += x[j] * dot_raw(a.data() + j * dim, x.data(), dim);
  return acc;
}

std::size_t count_in_range(std::span<const double> v, double lo, double hi) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const double* p = v.data();
  const std::size_t n = v.size();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(p + i);
    __m256d in = _mm256_and_pd(_mm256_cmp_pd(x, vlo, _CMP_GE_OQ), _mm256_cmp_pd(x, vhi, _CMP_LE_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(in)));
  }
  for (; i < n; ++i) count += (p[i] >= lo && p[i] <= hi) ? 1 : 0;
  return count;
}

}  // namespace hcp::kernels::avx2
