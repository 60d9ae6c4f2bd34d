#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hcp/elliptical.hpp"
#include "hcp/hierarchy.hpp"
#include "hcp/projection.hpp"

namespace hcp {

// Norm-defining matrix for the ellipsoidal regions.
enum class AMatrixChoice { Identity, Diag, Full };

std::string_view a_matrix_name(AMatrixChoice a) noexcept;
AMatrixChoice parse_a_matrix(std::string_view s);

enum class ScoreMode {
  Pipeline,      // synthetic data -> regression -> conformal
  DirectScores,  // residuals drawn straight from a fixed elliptical law
};

// Fixed elliptical law for DirectScores: c + M z with M an m x m standard
// normal matrix drawn once from mixing_seed, and oracle covariance M M^T.
struct DirectScoreSpec {
  SphericalFamily family;
  std::uint64_t mixing_seed = 20240601;
  double center = 10.0;
};

EllipticalSpec make_direct_score_spec(const DirectScoreSpec& d, Eigen::Index m);

struct ExperimentConfig {
  std::string hierarchy_id = "a1";
  std::shared_ptr<const Hierarchy> hierarchy;
  std::size_t t = 20000;
  std::size_t runs = 200;
  double alpha = 0.1;
  std::array<double, 4> fractions{0.4, 0.2, 0.2, 0.2};  // train, est, calib, test
  std::vector<Method> methods{Method::Direct, Method::OLS, Method::WLS, Method::MinT, Method::Combi};
  std::vector<AMatrixChoice> a_matrices{AMatrixChoice::Full};
  double ridge_lambda = 1e-6;
  std::optional<double> mint_ridge;
  ScoreMode mode = ScoreMode::Pipeline;
  DirectScoreSpec direct;
  std::optional<SphericalFamily> noise_family;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

// Resolves a1..a3, b1..b3 (or 1..6) to a builder hierarchy.
std::shared_ptr<const Hierarchy> builtin_hierarchy(std::string_view id);

struct SplitPlan {
  std::vector<Eigen::Index> train, est, calib, test;
};

// Sizes floor(f * t) for est, calib and test; train takes the remainder.
SplitPlan split(std::size_t t, const std::array<double, 4>& fractions, Rng& rng);

struct MethodResult {
  std::string name;
  bool ellipsoid = false;
  bool ok = true;
  std::string status = "ok";
  Eigen::VectorXd coverage;   // per node, rectangles only
  Eigen::VectorXd sq_length;  // per node, rectangles only
  double total_sq_length = std::numeric_limits<double>::quiet_NaN();
  double joint_coverage = std::numeric_limits<double>::quiet_NaN();
  double radius = std::numeric_limits<double>::quiet_NaN();
  double volume = std::numeric_limits<double>::quiet_NaN();
};

struct RunResult {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::vector<MethodResult> methods;
  std::map<std::string, double> timings;  // seconds

  const MethodResult* find(std::string_view name) const;
};

// "ellipsoid_plain:<a>" / "ellipsoid_reconciled:<a>".
std::string ellipsoid_method_name(bool reconciled, AMatrixChoice a);

RunResult run_once(const ExperimentConfig& config, std::uint64_t seed, std::size_t run_id = 0);

struct MetricSummary {
  std::string metric;
  double mean = 0.0;
  double gamma = 0.0;  // 1.96 * std / sqrt(n)
  std::size_t n = 0;
};

struct MethodSummary {
  std::string method;
  std::vector<MetricSummary> metrics;
  std::size_t failures = 0;
  std::size_t runs = 0;

  const MetricSummary* find(std::string_view metric) const;
};

struct McSummary {
  std::size_t n_runs = 0;
  std::vector<MethodSummary> methods;

  const MethodSummary* find(std::string_view method) const;
};

// Mean and 95% half-width of the finite values (population std, as reported
// for the Monte-Carlo tables).
MetricSummary summarize_values(std::string metric, const std::vector<double>& values);

McSummary summarize(const std::vector<RunResult>& runs);

struct MonteCarloResult {
  std::vector<RunResult> runs;
  McSummary summary;
};

// Run i uses seed config.seed + i. Results do not depend on `parallelism`.
MonteCarloResult monte_carlo(const ExperimentConfig& config, std::size_t n_runs, unsigned parallelism);

}  // namespace hcp
