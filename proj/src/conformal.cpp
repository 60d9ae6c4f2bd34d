#include "hcp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "hcp/error.hpp"
#include "hcp/kernels.hpp"

namespace hcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// floor/ceil of a product that is meant to be exact in decimal arithmetic:
// values within a few ulps of an integer are snapped to it first.
double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v)) ? r : v;
}
std::size_t exact_floor(double v) { return static_cast<std::size_t>(std::floor(snap(v))); }
std::size_t exact_ceil(double v) { return static_cast<std::size_t>(std::ceil(snap(v))); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1), got " + std::to_string(alpha));
}

std::vector<double> sorted_copy(const double* begin, std::size_t n) {
  std::vector<double> v(begin, begin + n);
  std::sort(v.begin(), v.end());
  return v;
}

void check_calibration(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets) {
  if (targets.rows() == 0) throw InsufficientData("calibration set is empty");
  if (features.rows() != targets.rows())
    throw ValidationError("calibration features and targets have different row counts");
}

}  // namespace

QuantileIndices quantile_indices(std::size_t t_calib, double alpha) {
  check_alpha(alpha);
  if (t_calib < 1) throw InsufficientData("quantile_indices: t_calib must be at least 1");
  const double n1 = static_cast<double>(t_calib + 1);
  QuantileIndices q;
  q.t_calib = t_calib;
  q.alpha = alpha;
  q.joint_hi = std::min(exact_ceil(n1 * (1.0 - alpha)), t_calib + 1);
  q.comp_lo = exact_floor(n1 * alpha / 2.0);
  q.comp_hi = std::min(exact_ceil(n1 * (1.0 - alpha / 2.0)), t_calib + 1);
  return q;
}

double order_statistic(const std::vector<double>& sorted, std::size_t k, double lower) {
  if (k == 0) return lower;
  if (k > sorted.size()) return kInf;
  return sorted[k - 1];
}

Eigen::VectorXd a_norm_scores(const Eigen::MatrixXd& residuals, const SymmetricMatrix& a) {
  if (residuals.cols() != a.dim()) throw ValidationError("a_norm_scores: residual width does not match A");
  const auto dim = static_cast<std::size_t>(a.dim());
  const std::span<const double> am(a.data().data(), dim * dim);
  Eigen::VectorXd scores(residuals.rows());
  Eigen::VectorXd r(residuals.cols());
  for (Eigen::Index t = 0; t < residuals.rows(); ++t) {
    r = residuals.row(t).transpose();
    // A PSD: clamp the tiny negative values rounding can produce.
    scores(t) = std::sqrt(std::max(0.0, kernels::quad_form(am, dim, {r.data(), dim})));
  }
  return scores;
}

double calibrate_radius(const Eigen::VectorXd& scores, double alpha) {
  const auto q = quantile_indices(static_cast<std::size_t>(scores.size()), alpha);
  const auto sorted = sorted_copy(scores.data(), static_cast<std::size_t>(scores.size()));
  return order_statistic(sorted, q.joint_hi, 0.0);
}

IntervalOffsets calibrate_offsets(const Eigen::MatrixXd& signed_scores, double alpha) {
  const auto q = quantile_indices(static_cast<std::size_t>(signed_scores.rows()), alpha);
  IntervalOffsets out{Eigen::VectorXd(signed_scores.cols()), Eigen::VectorXd(signed_scores.cols())};
  for (Eigen::Index i = 0; i < signed_scores.cols(); ++i) {
    const auto sorted = sorted_copy(signed_scores.col(i).data(), static_cast<std::size_t>(signed_scores.rows()));
    out.lo(i) = order_statistic(sorted, q.comp_lo, -kInf);
    out.hi(i) = order_statistic(sorted, q.comp_hi, -kInf);
  }
  return out;
}

Eigen::VectorXd component_coverage(const Eigen::MatrixXd& signed_scores, const IntervalOffsets& offsets) {
  if (signed_scores.cols() != offsets.lo.size()) throw ValidationError("component_coverage: width mismatch");
  Eigen::VectorXd cov(signed_scores.cols());
  const auto rows = static_cast<std::size_t>(signed_scores.rows());
  for (Eigen::Index i = 0; i < signed_scores.cols(); ++i) {
    const std::size_t inside = kernels::count_in_range({signed_scores.col(i).data(), rows}, offsets.lo(i), offsets.hi(i));
    cov(i) = rows ? static_cast<double>(inside) / static_cast<double>(rows) : 0.0;
  }
  return cov;
}

double rectangle_joint_coverage(const Eigen::MatrixXd& signed_scores, const IntervalOffsets& offsets) {
  if (signed_scores.rows() == 0) return 0.0;
  std::size_t inside = 0;
  for (Eigen::Index t = 0; t < signed_scores.rows(); ++t) {
    const auto r = signed_scores.row(t).transpose().array();
    inside += ((r >= offsets.lo.array()) && (r <= offsets.hi.array())).all() ? 1 : 0;
  }
  return static_cast<double>(inside) / static_cast<double>(signed_scores.rows());
}

double ball_coverage(const Eigen::VectorXd& scores, double radius) {
  if (scores.size() == 0) return 0.0;
  const std::size_t inside = kernels::count_in_range({scores.data(), static_cast<std::size_t>(scores.size())}, -kInf, radius);
  return static_cast<double>(inside) / static_cast<double>(scores.size());
}

Eigen::VectorXd EllipsoidModel::center(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd mu = regressor->predict(x);
  return projection ? Eigen::VectorXd(*projection * mu) : mu;
}

Eigen::MatrixXd EllipsoidModel::centers(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd mu = regressor->predict_batch(features);
  if (projection) return mu * projection->transpose();
  return mu;
}

Eigen::VectorXd RectangleModel::center(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd mu = regressor->predict(x);
  return projection.size() ? Eigen::VectorXd(projection * mu) : mu;
}

Eigen::MatrixXd RectangleModel::centers(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd mu = regressor->predict_batch(features);
  if (projection.size()) return mu * projection.transpose();
  return mu;
}

EllipsoidModel calibrate_ellipsoid(std::shared_ptr<const Regressor> regressor, const SymmetricMatrix& a_matrix,
                                   const Eigen::MatrixXd& calib_features, const Eigen::MatrixXd& calib_targets,
                                   double alpha, const ProjectionMatrix* projection) {
  check_alpha(alpha);
  check_calibration(calib_features, calib_targets);
  if (calib_targets.cols() != a_matrix.dim()) throw ValidationError("calibrate_ellipsoid: A does not match targets");
  EllipsoidModel model{std::move(regressor), std::nullopt, a_matrix, 0.0};
  if (projection) {
    const Eigen::MatrixXd ap = a_matrix.data() * projection->p;
    const double scale = 1.0 + a_matrix.data().cwiseAbs().rowwise().sum().maxCoeff();
    if ((ap - ap.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw ValidationError("calibrate_ellipsoid: projection is not A-self-adjoint (expected P_A)");
    model.projection = projection->p;
  }
  const Eigen::MatrixXd residuals = calib_targets - model.centers(calib_features);
  model.radius = calibrate_radius(a_norm_scores(residuals, a_matrix), alpha);
  return model;
}

RectangleModel calibrate_plain_rectangles(std::shared_ptr<const Regressor> regressor,
                                          const Eigen::MatrixXd& calib_features,
                                          const Eigen::MatrixXd& calib_targets, double alpha) {
  check_alpha(alpha);
  check_calibration(calib_features, calib_targets);
  RectangleModel model;
  model.regressor = std::move(regressor);
  const Eigen::MatrixXd scores = calib_targets - model.regressor->predict_batch(calib_features);
  auto off = calibrate_offsets(scores, alpha);
  model.lo_offsets = std::move(off.lo);
  model.hi_offsets = std::move(off.hi);
  return model;
}

RectangleModel calibrate_rectangles(std::shared_ptr<const Regressor> regressor, const ProjectionMatrix& p,
                                    const Eigen::MatrixXd& calib_features, const Eigen::MatrixXd& calib_targets,
                                    double alpha) {
  check_alpha(alpha);
  check_calibration(calib_features, calib_targets);
  if (p.p.rows() != calib_targets.cols() || p.p.cols() != calib_targets.cols())
    throw ValidationError("calibrate_rectangles: projection is " + std::to_string(p.p.rows()) + "x" +
                          std::to_string(p.p.cols()) + ", targets have " + std::to_string(calib_targets.cols()) +
                          " columns");
  RectangleModel model;
  model.regressor = std::move(regressor);
  model.projection = p.p;
  model.method = p.method;
  const Eigen::MatrixXd scores = calib_targets - model.centers(calib_features);
  auto off = calibrate_offsets(scores, alpha);
  model.lo_offsets = std::move(off.lo);
  model.hi_offsets = std::move(off.hi);
  return model;
}

bool region_contains(const EllipsoidModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (std::isinf(model.radius)) return true;
  const Eigen::VectorXd r = y - model.center(x);
  return a_norm_scores(r.transpose(), model.a_matrix)(0) <= model.radius;
}

std::vector<bool> region_contains(const RectangleModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd c = model.center(x);
  if (y.size() != c.size()) throw ValidationError("region_contains: y has wrong length");
  std::vector<bool> inside(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double s = y(i) - c(i);
    inside[static_cast<std::size_t>(i)] = s >= model.lo_offsets(i) && s <= model.hi_offsets(i);
  }
  return inside;
}

Eigen::VectorXd rectangle_lengths(const RectangleModel& model) { return model.hi_offsets - model.lo_offsets; }

double normalized_volume(const SymmetricMatrix& a, double radius) {
  if (std::isinf(radius)) return kInf;
  const double m = static_cast<double>(a.dim());
  return radius * std::exp(-log_det_spd(a) / (2.0 * m));
}

double ellipsoid_normalized_volume(const EllipsoidModel& model) {
  return normalized_volume(model.a_matrix, model.radius);
}

}  // namespace hcp
