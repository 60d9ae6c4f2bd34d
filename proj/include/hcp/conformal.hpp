#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hcp/linalg.hpp"
#include "hcp/projection.hpp"
#include "hcp/regression.hpp"

namespace hcp {

// Order-statistic indices for a calibration set of size t_calib.
//   joint_hi = ceil((T+1)(1-alpha)), comp_lo = floor((T+1) alpha/2),
//   comp_hi  = ceil((T+1)(1-alpha/2)).
// Index 0 is the lower sentinel (-inf for signed scores, 0 for norms) and
// t_calib+1 is +inf.
struct QuantileIndices {
  std::size_t t_calib = 0;
  double alpha = 0.0;
  std::size_t joint_hi = 0;
  std::size_t comp_lo = 0;
  std::size_t comp_hi = 0;
};

// Throws ConfigError unless 0 < alpha < 1 and t_calib >= 1.
QuantileIndices quantile_indices(std::size_t t_calib, double alpha);

// Sorted scores with sentinels: k = 0 -> lower, k = T+1 -> +inf, else s_(k).
double order_statistic(const std::vector<double>& sorted, std::size_t k, double lower);

// ---- score-level primitives -------------------------------------------------

// ||r_t||_A for each row r_t of `residuals`.
Eigen::VectorXd a_norm_scores(const Eigen::MatrixXd& residuals, const SymmetricMatrix& a);

// s_(joint_hi) with s_(0) = 0 and s_(T+1) = +inf.
double calibrate_radius(const Eigen::VectorXd& scores, double alpha);

struct IntervalOffsets {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

// Per-column signed-score quantiles (rows are calibration points).
IntervalOffsets calibrate_offsets(const Eigen::MatrixXd& signed_scores, double alpha);

// Fraction of rows of `signed_scores` inside [lo_i, hi_i], per column.
Eigen::VectorXd component_coverage(const Eigen::MatrixXd& signed_scores, const IntervalOffsets& offsets);

// Fraction of rows inside every interval simultaneously.
double rectangle_joint_coverage(const Eigen::MatrixXd& signed_scores, const IntervalOffsets& offsets);

// Fraction of scores <= radius.
double ball_coverage(const Eigen::VectorXd& scores, double radius);

// ---- fitted models ----------------------------------------------------------

struct EllipsoidModel {
  std::shared_ptr<const Regressor> regressor;
  // P_A when the reconciled variant is used.
  std::optional<Eigen::MatrixXd> projection;
  SymmetricMatrix a_matrix;
  double radius = 0.0;

  Eigen::VectorXd center(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd centers(const Eigen::MatrixXd& features) const;
};

struct RectangleModel {
  std::shared_ptr<const Regressor> regressor;
  // Empty means no projection (plain component-wise SCP).
  Eigen::MatrixXd projection;
  Method method = Method::Direct;
  Eigen::VectorXd lo_offsets;
  Eigen::VectorXd hi_offsets;

  Eigen::VectorXd center(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd centers(const Eigen::MatrixXd& features) const;
};

// Joint-coverage ellipsoid. With `projection` the centre map is P_A mu and
// the projection must be A-self-adjoint (as projection_from_weight(h, A) is).
EllipsoidModel calibrate_ellipsoid(std::shared_ptr<const Regressor> regressor, const SymmetricMatrix& a_matrix,
                                   const Eigen::MatrixXd& calib_features, const Eigen::MatrixXd& calib_targets,
                                   double alpha, const ProjectionMatrix* projection = nullptr);

// Plain component-wise SCP with signed scores: scores y - mu(x).
RectangleModel calibrate_plain_rectangles(std::shared_ptr<const Regressor> regressor,
                                          const Eigen::MatrixXd& calib_features,
                                          const Eigen::MatrixXd& calib_targets, double alpha);

// Hierarchical component-wise SCP: scores y - P mu(x). With P built from a
// covariance estimated on a separate split this is the data-based variant.
RectangleModel calibrate_rectangles(std::shared_ptr<const Regressor> regressor, const ProjectionMatrix& p,
                                    const Eigen::MatrixXd& calib_features, const Eigen::MatrixXd& calib_targets,
                                    double alpha);

bool region_contains(const EllipsoidModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Per-component membership in the closed intervals.
std::vector<bool> region_contains(const RectangleModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// hi - lo per component; independent of x, may be +inf.
Eigen::VectorXd rectangle_lengths(const RectangleModel& model);

// r * det(A)^{-1/(2m)}. +inf when the radius is infinite; throws
// NotPositiveDefinite when A is singular.
double ellipsoid_normalized_volume(const EllipsoidModel& model);
double normalized_volume(const SymmetricMatrix& a, double radius);

}  // namespace hcp
