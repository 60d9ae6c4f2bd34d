#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "hcp/hierarchy.hpp"
#include "hcp/linalg.hpp"

namespace hcp {

enum class Method { Direct, OLS, WLS, MinT, Combi, CustomW };

std::string_view method_name(Method m) noexcept;
// Case-insensitive: direct|ols|wls|mint|combi. Throws ConfigError.
Method parse_method(std::string_view s);

// Reconciliation map P with P H = H. Only Direct (identity) and the
// projection_from_weight family are idempotent; Combi is an average.
struct ProjectionMatrix {
  Eigen::MatrixXd p;
  Method method = Method::CustomW;
  std::string weight_descriptor;
};

struct CovarianceEstimate {
  SymmetricMatrix sigma_hat;
  std::size_t sample_count = 0;
  Eigen::VectorXd mean_residual;
};

// P_W = H (H^T W H)^{-1} H^T W, the W-orthogonal projection onto Im(H).
// W may be semi-definite as long as H^T W H is positive definite; otherwise
// NotPositiveDefinite is thrown.
ProjectionMatrix projection_from_weight(const Hierarchy& h, const SymmetricMatrix& w,
                                        std::string weight_descriptor = "custom");

// Mean-centred second moment with 1/T normalisation. Rows are residuals.
CovarianceEstimate estimate_covariance(const Eigen::MatrixXd& residuals);

// Default MinT ridge: 1e-8 * Tr(sigma_hat) / m.
double default_mint_ridge(const CovarianceEstimate& cov);

// Direct -> Id; OLS -> P_1; WLS -> P_{pinv(Diag sigma_hat)};
// MinT -> P_{pinv(sigma_hat + ridge Id)}; Combi -> (OLS + WLS + MinT) / 3.
// `ridge` defaults to default_mint_ridge(cov).
ProjectionMatrix reconciliation_matrix(Method method, const Hierarchy& h,
                                       const CovarianceEstimate* cov = nullptr,
                                       std::optional<double> ridge = std::nullopt);

// Same constructions from a known (oracle) covariance; MinT uses sigma^{-1}.
ProjectionMatrix reconciliation_matrix_oracle(Method method, const Hierarchy& h, const SymmetricMatrix& sigma);

}  // namespace hcp
