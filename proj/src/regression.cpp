#include "hcp/regression.hpp"

#include <cmath>
#include <string>

#include "hcp/error.hpp"
#include "hcp/linalg.hpp"

namespace hcp {

double eval_shape(Shape s, double v) noexcept {
  switch (s) {
    case Shape::Linear: return v;
    case Shape::Square: return v * v;
    case Shape::Sin: return std::sin(v);
    case Shape::LogAbs: return std::log(std::abs(v) + 1.0);
    case Shape::Cos: return std::cos(v);
    case Shape::Sqrt: return std::sqrt(std::max(v, 0.0));
    case Shape::Exp: return std::exp(std::min(v, kExpClamp));
  }
  return 0.0;
}

const std::array<Generator, kNumGenerators>& generators() noexcept {
  static const std::array<Generator, kNumGenerators> g{{
      {0, Shape::Linear}, {0, Shape::Square}, {0, Shape::Sin}, {0, Shape::LogAbs},
      {1, Shape::Linear}, {1, Shape::Square}, {1, Shape::Cos}, {1, Shape::Sqrt},
      {2, Shape::Linear}, {2, Shape::Square}, {2, Shape::Exp},
  }};
  return g;
}

double eval_generator(int j, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Generator& g = generators().at(static_cast<std::size_t>(j));
  return eval_shape(g.shape, x(g.covariate));
}

const std::vector<Shape>& regression_shapes() noexcept {
  static const std::vector<Shape> shapes{Shape::Linear, Shape::Square, Shape::Sin, Shape::LogAbs,
                                         Shape::Cos,    Shape::Sqrt,   Shape::Exp};
  return shapes;
}

int feature_index(int covariate, Shape s) noexcept {
  const auto& shapes = regression_shapes();
  for (std::size_t i = 0; i < shapes.size(); ++i)
    if (shapes[i] == s) return covariate * static_cast<int>(shapes.size()) + static_cast<int>(i);
  return -1;
}

Eigen::MatrixXd expand_basis(const Eigen::MatrixXd& features) {
  if (features.cols() != kNumCovariates)
    throw ValidationError("expand_basis: expected 3 feature columns, got " + std::to_string(features.cols()));
  const auto& shapes = regression_shapes();
  const auto per = static_cast<Eigen::Index>(shapes.size());
  Eigen::MatrixXd out(features.rows(), kNumCovariates * per);
  for (Eigen::Index c = 0; c < kNumCovariates; ++c)
    for (Eigen::Index s = 0; s < per; ++s)
      out.col(c * per + s) = features.col(c).unaryExpr([&](double v) { return eval_shape(shapes[static_cast<std::size_t>(s)], v); });
  return out;
}

Eigen::VectorXd Regressor::predict(const Eigen::VectorXd& x) const {
  return predict_batch(x.transpose()).row(0).transpose();
}

FittedRegressor::FittedRegressor(Eigen::VectorXd column_mean, Eigen::VectorXd column_scale,
                                 Eigen::MatrixXd coefficients, Eigen::VectorXd intercepts, std::vector<bool> mask,
                                 double ridge_lambda)
    : column_mean_(std::move(column_mean)),
      column_scale_(std::move(column_scale)),
      coefficients_(std::move(coefficients)),
      intercepts_(std::move(intercepts)),
      mask_(std::move(mask)),
      ridge_lambda_(ridge_lambda) {
  if (coefficients_.rows() != column_mean_.size() || column_scale_.size() != column_mean_.size() ||
      coefficients_.cols() != intercepts_.size() || mask_.size() != static_cast<std::size_t>(intercepts_.size()))
    throw ValidationError("FittedRegressor: inconsistent dimensions");
}

namespace {

Eigen::MatrixXd standardise(const Eigen::MatrixXd& basis, const Eigen::VectorXd& mean, const Eigen::VectorXd& scale) {
  Eigen::MatrixXd z(basis.rows(), basis.cols());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    if (scale(j) > 0)
      z.col(j) = (basis.col(j).array() - mean(j)) / scale(j);
    else
      z.col(j).setZero();
  }
  return z;
}

}  // namespace

Eigen::MatrixXd FittedRegressor::predict_batch(const Eigen::MatrixXd& features) const {
  const Eigen::MatrixXd z = standardise(expand_basis(features), column_mean_, column_scale_);
  Eigen::MatrixXd out = z * coefficients_;
  out.rowwise() += intercepts_.transpose();
  return out;
}

std::shared_ptr<const FittedRegressor> fit(const RegressorSpec& spec, const Eigen::MatrixXd& features,
                                           const Eigen::MatrixXd& targets) {
  if (!(spec.ridge_lambda >= 0)) throw ConfigError("ridge_lambda must be non-negative");
  if (features.rows() != targets.rows())
    throw ValidationError("fit: features and targets have different row counts");
  const Eigen::Index t = features.rows();
  const Eigen::Index m = targets.cols();
  std::vector<bool> mask = spec.feature_mask.empty() ? std::vector<bool>(static_cast<std::size_t>(m), true)
                                                     : spec.feature_mask;
  if (mask.size() != static_cast<std::size_t>(m))
    throw ValidationError("fit: feature mask has " + std::to_string(mask.size()) + " entries, expected " +
                          std::to_string(m));

  const Eigen::MatrixXd basis = expand_basis(features);
  const Eigen::Index p = basis.cols();
  if (t <= p + 1)
    throw InsufficientData("fit: need more than " + std::to_string(p + 1) + " training rows, got " + std::to_string(t));

  const double td = static_cast<double>(t);
  Eigen::VectorXd mean = basis.colwise().mean().transpose();
  Eigen::VectorXd scale(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double sd = std::sqrt((basis.col(j).array() - mean(j)).square().sum() / td);
    // Constant columns (e.g. sqrt of an always-negative covariate) carry no signal.
    scale(j) = (std::isfinite(sd) && sd > 1e-12 * (1.0 + std::abs(mean(j)))) ? sd : 0.0;
  }
  const Eigen::MatrixXd z = standardise(basis, mean, scale);
  const Eigen::VectorXd target_mean = targets.colwise().mean().transpose();
  const Eigen::MatrixXd centred = targets.rowwise() - target_mean.transpose();

  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(p, m);
  const Eigen::Index per = p / kNumCovariates;
  for (bool full : {true, false}) {
    std::vector<Eigen::Index> nodes;
    for (Eigen::Index i = 0; i < m; ++i)
      if (mask[static_cast<std::size_t>(i)] == full) nodes.push_back(i);
    if (nodes.empty()) continue;

    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < (full ? p : 2 * per); ++j)
      if (scale(j) > 0) cols.push_back(j);
    if (cols.empty()) continue;

    const Eigen::MatrixXd zs = z(Eigen::all, cols);
    const Eigen::MatrixXd ys = centred(Eigen::all, nodes);
    Eigen::MatrixXd gram = zs.transpose() * zs / td;
    gram.diagonal().array() += spec.ridge_lambda;
    const Eigen::MatrixXd rhs = zs.transpose() * ys / td;
    const SymmetricMatrix g(gram);
    Eigen::MatrixXd beta;
    try {
      beta = spd_solve(g, rhs);
    } catch (const NotPositiveDefinite&) {
      beta = pseudo_inverse(g).data() * rhs;
    }
    coef(cols, nodes) = beta;
  }
  return std::make_shared<const FittedRegressor>(std::move(mean), std::move(scale), std::move(coef), target_mean,
                                                 std::move(mask), spec.ridge_lambda);
}

}  // namespace hcp
