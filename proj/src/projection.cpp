#include "hcp/projection.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "hcp/error.hpp"

namespace hcp {

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Direct: return "direct";
    case Method::OLS: return "ols";
    case Method::WLS: return "wls";
    case Method::MinT: return "mint";
    case Method::Combi: return "combi";
    case Method::CustomW: return "custom";
  }
  return "unknown";
}

Method parse_method(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Method m : {Method::Direct, Method::OLS, Method::WLS, Method::MinT, Method::Combi})
    if (lower == method_name(m)) return m;
  throw ConfigError("unknown reconciliation method '" + std::string(s) + "' (expected direct|ols|wls|mint|combi)");
}

ProjectionMatrix projection_from_weight(const Hierarchy& h, const SymmetricMatrix& w, std::string weight_descriptor) {
  if (static_cast<std::size_t>(w.dim()) != h.m())
    throw ValidationError("projection_from_weight: weight is " + std::to_string(w.dim()) + "x" +
                          std::to_string(w.dim()) + ", hierarchy has m=" + std::to_string(h.m()));
  const Eigen::MatrixXd htw = h.h().transpose() * w.data();
  // Symmetric in exact arithmetic; rounding grows with cond(W), so symmetrize
  // here instead of going through the input check.
  const Eigen::MatrixXd g0 = htw * h.h();
  const SymmetricMatrix gram(Eigen::MatrixXd(0.5 * (g0 + g0.transpose())));
  const Eigen::MatrixXd g = spd_solve(gram, htw);
  return {h.h() * g, Method::CustomW, std::move(weight_descriptor)};
}

CovarianceEstimate estimate_covariance(const Eigen::MatrixXd& residuals) {
  if (residuals.rows() < 2)
    throw InsufficientData("estimate_covariance: need at least 2 residuals, got " + std::to_string(residuals.rows()));
  const double t = static_cast<double>(residuals.rows());
  Eigen::VectorXd mean = residuals.colwise().mean().transpose();
  const Eigen::MatrixXd centred = residuals.rowwise() - mean.transpose();
  Eigen::MatrixXd second = (centred.transpose() * centred) / t;
  return {SymmetricMatrix(0.5 * (second + second.transpose())), static_cast<std::size_t>(residuals.rows()),
          std::move(mean)};
}

double default_mint_ridge(const CovarianceEstimate& cov) {
  const auto m = static_cast<double>(cov.sigma_hat.dim());
  return m > 0 ? 1e-8 * cov.sigma_hat.data().trace() / m : 0.0;
}

namespace {

ProjectionMatrix tagged(ProjectionMatrix p, Method m) {
  p.method = m;
  return p;
}

ProjectionMatrix ols(const Hierarchy& h) {
  return tagged(projection_from_weight(h, SymmetricMatrix::identity(static_cast<Eigen::Index>(h.m())), "identity"),
                Method::OLS);
}

ProjectionMatrix wls(const Hierarchy& h, const SymmetricMatrix& sigma) {
  const SymmetricMatrix w = pseudo_inverse(SymmetricMatrix::diagonal(sigma.data().diagonal()));
  return tagged(projection_from_weight(h, w, "pinv(diag(sigma))"), Method::WLS);
}

ProjectionMatrix mint(const Hierarchy& h, const SymmetricMatrix& sigma, double ridge, std::string descriptor) {
  const auto m = static_cast<Eigen::Index>(h.m());
  const SymmetricMatrix regularised(sigma.data() + ridge * Eigen::MatrixXd::Identity(m, m));
  try {
    return tagged(projection_from_weight(h, pseudo_inverse(regularised), std::move(descriptor)), Method::MinT);
  } catch (const NotPositiveDefinite& e) {
    throw NearSingularCovariance(std::string("MinT: ") + e.what());
  }
}

ProjectionMatrix combi(const ProjectionMatrix& o, const ProjectionMatrix& w, const ProjectionMatrix& t) {
  return {(o.p + w.p + t.p) / 3.0, Method::Combi, "mean(ols,wls,mint)"};
}

ProjectionMatrix direct(const Hierarchy& h) {
  const auto m = static_cast<Eigen::Index>(h.m());
  return {Eigen::MatrixXd::Identity(m, m), Method::Direct, "none"};
}

}  // namespace

ProjectionMatrix reconciliation_matrix(Method method, const Hierarchy& h, const CovarianceEstimate* cov,
                                       std::optional<double> ridge) {
  switch (method) {
    case Method::Direct: return direct(h);
    case Method::OLS: return ols(h);
    case Method::CustomW: throw ConfigError("reconciliation_matrix: use projection_from_weight for custom weights");
    default: break;
  }
  if (cov == nullptr)
    throw ConfigError("reconciliation method '" + std::string(method_name(method)) + "' needs a covariance estimate");
  if (static_cast<std::size_t>(cov->sigma_hat.dim()) != h.m())
    throw ValidationError("reconciliation_matrix: covariance dimension does not match hierarchy");
  const double r = ridge.value_or(default_mint_ridge(*cov));
  if (!(r >= 0)) throw ConfigError("MinT ridge must be non-negative");
  const SymmetricMatrix& s = cov->sigma_hat;
  switch (method) {
    case Method::WLS: return wls(h, s);
    case Method::MinT: return mint(h, s, r, "pinv(sigma+ridge)");
    case Method::Combi: return combi(ols(h), wls(h, s), mint(h, s, r, "pinv(sigma+ridge)"));
    default: break;
  }
  throw ConfigError("unhandled reconciliation method");
}

ProjectionMatrix reconciliation_matrix_oracle(Method method, const Hierarchy& h, const SymmetricMatrix& sigma) {
  switch (method) {
    case Method::Direct: return direct(h);
    case Method::OLS: return ols(h);
    case Method::WLS: return wls(h, sigma);
    case Method::MinT: return mint(h, sigma, 0.0, "inv(sigma)");
    case Method::Combi: return combi(ols(h), wls(h, sigma), mint(h, sigma, 0.0, "inv(sigma)"));
    case Method::CustomW: break;
  }
  throw ConfigError("reconciliation_matrix_oracle: custom weights not supported");
}

}  // namespace hcp
