#include "hcp/elliptical.hpp"

#include <cmath>

#include "hcp/error.hpp"

namespace hcp {

std::string_view kind_name(SphericalKind k) noexcept {
  switch (k) {
    case SphericalKind::Gaussian: return "gaussian";
    case SphericalKind::StudentT: return "student_t";
    case SphericalKind::Laplace: return "laplace";
    case SphericalKind::UniformSphere: return "uniform_sphere";
  }
  return "unknown";
}

SphericalKind parse_kind(std::string_view s) {
  for (SphericalKind k : {SphericalKind::Gaussian, SphericalKind::StudentT, SphericalKind::Laplace,
                          SphericalKind::UniformSphere})
    if (s == kind_name(k)) return k;
  throw ConfigError("unknown distribution kind '" + std::string(s) +
                    "' (expected gaussian|student_t|laplace|uniform_sphere)");
}

Eigen::MatrixXd sample_spherical(const SphericalFamily& family, Eigen::Index k, Eigen::Index count, Rng& rng) {
  if (k < 1 || count < 1) throw ValidationError("sample_spherical: k and count must be positive");
  if (family.kind == SphericalKind::StudentT && !(family.dof > 0))
    throw ConfigError("student_t: dof must be positive");

  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(family.kind == SphericalKind::StudentT ? family.dof : 1.0);
  std::exponential_distribution<double> expo(1.0);

  Eigen::MatrixXd out(count, k);
  for (Eigen::Index r = 0; r < count; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) out(r, c) = normal(rng);
    switch (family.kind) {
      case SphericalKind::Gaussian: break;
      case SphericalKind::StudentT: out.row(r) *= std::sqrt(family.dof / chi2(rng)); break;
      case SphericalKind::Laplace: out.row(r) *= std::sqrt(expo(rng)); break;
      case SphericalKind::UniformSphere: {
        double norm = out.row(r).norm();
        while (norm == 0.0) {
          for (Eigen::Index c = 0; c < k; ++c) out(r, c) = normal(rng);
          norm = out.row(r).norm();
        }
        out.row(r) /= norm;
        break;
      }
    }
  }
  return out;
}

Eigen::MatrixXd sample_elliptical(const EllipticalSpec& spec, Eigen::Index count, Rng& rng) {
  if (spec.mixing.cols() < 1) throw ValidationError("sample_elliptical: mixing matrix needs at least one column");
  if (spec.center.size() != spec.mixing.rows())
    throw ValidationError("sample_elliptical: center and mixing dimensions differ");
  const Eigen::MatrixXd z = sample_spherical(spec.family, spec.mixing.cols(), count, rng);
  Eigen::MatrixXd out = z * spec.mixing.transpose();
  out.rowwise() += spec.center.transpose();
  return out;
}

}  // namespace hcp
