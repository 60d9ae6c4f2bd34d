#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace hcp {

// Scalar shapes underlying the eleven generating functions g_1..g_11:
//   x, x^2, sin x, log(|x|+1) on x1; x, x^2, cos x, sqrt x on x2; x, x^2, exp x on x3.
// sqrt uses max(x, 0) and exp clamps its argument at 30 so both are total.
enum class Shape { Linear, Square, Sin, LogAbs, Cos, Sqrt, Exp };

inline constexpr int kNumCovariates = 3;
inline constexpr int kNumGenerators = 11;
inline constexpr double kExpClamp = 30.0;

double eval_shape(Shape s, double v) noexcept;

struct Generator {
  int covariate;
  Shape shape;
};

// g_{j+1} for j in [0, 11).
const std::array<Generator, kNumGenerators>& generators() noexcept;

// Value of g_{j+1} at feature vector x (length 3).
double eval_generator(int j, const Eigen::Ref<const Eigen::VectorXd>& x);

// Distinct shapes applied to every covariate by the regression basis.
const std::vector<Shape>& regression_shapes() noexcept;

// Feature index of (covariate, shape) in the expanded design; -1 if absent.
int feature_index(int covariate, Shape s) noexcept;

// T x (3 * |regression_shapes()|) expansion, covariate-major.
Eigen::MatrixXd expand_basis(const Eigen::MatrixXd& features);

// Point forecaster x -> mu(x) in R^m. Implementations must be immutable and
// deterministic; the conformal layer relies on nothing else.
class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual Eigen::Index output_dim() const = 0;
  // One row of predictions per row of `features`.
  virtual Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& features) const = 0;

  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;
};

struct RegressorSpec {
  double ridge_lambda = 1e-6;
  // Per node; false drops every x3 feature for that node. Empty means all true.
  std::vector<bool> feature_mask;
};

// Ridge regression on the standardised basis expansion, one model per node.
// Minimises (1/T) ||y - b0 - Z beta||^2 + lambda ||beta||^2 where Z holds the
// basis columns standardised on the training data (intercept unpenalised).
class FittedRegressor final : public Regressor {
 public:
  FittedRegressor(Eigen::VectorXd column_mean, Eigen::VectorXd column_scale, Eigen::MatrixXd coefficients,
                  Eigen::VectorXd intercepts, std::vector<bool> mask, double ridge_lambda);

  Eigen::Index output_dim() const override { return intercepts_.size(); }
  Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& features) const override;

  const Eigen::VectorXd& column_mean() const noexcept { return column_mean_; }
  // Zero marks a constant (inactive) column.
  const Eigen::VectorXd& column_scale() const noexcept { return column_scale_; }
  // features x nodes, standardised scale.
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  const Eigen::VectorXd& intercepts() const noexcept { return intercepts_; }
  const std::vector<bool>& mask() const noexcept { return mask_; }
  double ridge_lambda() const noexcept { return ridge_lambda_; }

 private:
  Eigen::VectorXd column_mean_;
  Eigen::VectorXd column_scale_;
  Eigen::MatrixXd coefficients_;
  Eigen::VectorXd intercepts_;
  std::vector<bool> mask_;
  double ridge_lambda_;
};

// Throws InsufficientData when T does not exceed the feature count + 1.
std::shared_ptr<const FittedRegressor> fit(const RegressorSpec& spec, const Eigen::MatrixXd& features,
                                           const Eigen::MatrixXd& targets);

}  // namespace hcp
