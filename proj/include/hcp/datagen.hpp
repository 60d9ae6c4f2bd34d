#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hcp/elliptical.hpp"
#include "hcp/hierarchy.hpp"

namespace hcp {

// One signed generating function r * g_{basis+1} in a leaf's effect.
struct Effect {
  int basis = 0;  // 0-based index into generators()
  int sign = 1;   // +1 or -1
};

// Random specification of one synthetic experiment: leaf effects f, leaf
// noise correlation R and per-node covariate masks.
struct ExperimentSpec {
  std::shared_ptr<const Hierarchy> hierarchy;
  std::vector<std::vector<Effect>> effects;  // per leaf
  Eigen::MatrixXd correlation;               // R = 100 D^-1 M^T M D^-1
  Eigen::MatrixXd noise_factor;              // B with B^T B = R
  std::vector<bool> masks;                   // per node; aggregates always true
  double noise_mean = 10.0;
  Eigen::Vector3d feature_mean{10.0, -5.0, 5.0};
  Eigen::Vector3d feature_var{2.0, 2.0, 1.0};
  // Non-Gaussian leaf noise (extension); z drawn from this family instead of N(0, I).
  std::optional<SphericalFamily> noise_family;

  // f(x) for one feature vector, length n.
  Eigen::VectorXd leaf_mean(const Eigen::VectorXd& x) const;
};

struct Dataset {
  Eigen::MatrixXd features;  // t x 3
  Eigen::MatrixXd targets;   // t x m, coherent rows
};

inline constexpr double kMaskProbability = 0.8;
inline constexpr double kCorrelationScale = 100.0;

ExperimentSpec draw_spec(std::shared_ptr<const Hierarchy> h, Rng& rng);

Dataset generate(const ExperimentSpec& spec, Eigen::Index t, Rng& rng);

}  // namespace hcp
