#include "hcp/kernels.hpp"

namespace hcp::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double quad_form(std::span<const double> a, std::size_t dim, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double* col = a.data() + j * dim;
    double t = 0.0;
    for (std::size_t i = 0; i < dim; ++i) t += col[i] * x[i];
    acc += x[j] * t;
  }
  return acc;
}

std::size_t count_in_range(std::span<const double> v, double lo, double hi) {
  std::size_t n = 0;
  for (double e : v) n += (e >= lo && e <= hi) ? 1 : 0;
  return n;
}

}  // namespace hcp::kernels::scalar
