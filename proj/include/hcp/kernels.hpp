#pragma once

// Data-parallel inner loops shared by the numerical modules.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is chosen once at startup from CPUID and can
// be overridden with force_backend() (tests use this to check equivalence).
// The two backends sum in different orders, so results agree to rounding,
// not bit-for-bit; within one backend every kernel is deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace hcp::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b) noexcept;
bool backend_available(Backend b) noexcept;
Backend active_backend() noexcept;

// Throws hcp::ConfigError if the backend is not supported on this CPU.
void force_backend(Backend b);

// Restores CPUID-based selection.
void reset_backend() noexcept;

// sum_i a[i] * b[i]; a.size() == b.size().
double dot(std::span<const double> a, std::span<const double> b);

// x^T A x for a dim x dim matrix stored column-major in `a`.
double quad_form(std::span<const double> a, std::size_t dim, std::span<const double> x);

// Number of entries with lo <= v[i] <= hi. Infinite bounds are allowed.
std::size_t count_in_range(std::span<const double> v, double lo, double hi);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double quad_form(std::span<const double> a, std::size_t dim, std::span<const double> x);
std::size_t count_in_range(std::span<const double> v, double lo, double hi);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double quad_form(std::span<const double> a, std::size_t dim, std::span<const double> x);
std::size_t count_in_range(std::span<const double> v, double lo, double hi);
}  // namespace avx2

}  // namespace hcp::kernels
