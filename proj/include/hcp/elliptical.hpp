#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace hcp {

using Rng = std::mt19937_64;

enum class SphericalKind { Gaussian, StudentT, Laplace, UniformSphere };

struct SphericalFamily {
  SphericalKind kind = SphericalKind::Gaussian;
  double dof = 4.0;  // StudentT only
};

std::string_view kind_name(SphericalKind k) noexcept;
// gaussian|student_t|laplace|uniform_sphere. Throws ConfigError.
SphericalKind parse_kind(std::string_view s);

// c + M z with z spherical in R^k; M is m x k.
struct EllipticalSpec {
  SphericalFamily family;
  Eigen::VectorXd center;
  Eigen::MatrixXd mixing;

  Eigen::Index dim() const noexcept { return mixing.rows(); }
  // M M^T, the covariance up to the family's scale factor.
  Eigen::MatrixXd scatter() const { return mixing * mixing.transpose(); }
};

// count x k matrix of i.i.d. spherical rows.
//   gaussian:       z ~ N(0, I)
//   student_t:      z * sqrt(dof / chi2_dof)
//   laplace:        z * sqrt(E), E ~ Exp(1)
//   uniform_sphere: z / ||z||
Eigen::MatrixXd sample_spherical(const SphericalFamily& family, Eigen::Index k, Eigen::Index count, Rng& rng);

// count x m matrix with rows c + M z_i.
Eigen::MatrixXd sample_elliptical(const EllipticalSpec& spec, Eigen::Index count, Rng& rng);

}  // namespace hcp
