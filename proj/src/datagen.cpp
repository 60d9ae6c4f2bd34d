#include "hcp/datagen.hpp"

#include <cmath>

#include "hcp/error.hpp"
#include "hcp/regression.hpp"

namespace hcp {

Eigen::VectorXd ExperimentSpec::leaf_mean(const Eigen::VectorXd& x) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(effects.size()));
  for (std::size_t i = 0; i < effects.size(); ++i)
    for (const Effect& e : effects[i]) f(static_cast<Eigen::Index>(i)) += e.sign * eval_generator(e.basis, x);
  return f;
}

ExperimentSpec draw_spec(std::shared_ptr<const Hierarchy> h, Rng& rng) {
  if (!h) throw ValidationError("draw_spec: hierarchy is null");
  const auto n = static_cast<Eigen::Index>(h->n());
  const auto m = static_cast<Eigen::Index>(h->m());
  std::normal_distribution<double> normal(0.0, 1.0);

  ExperimentSpec spec;
  spec.hierarchy = h;

  Eigen::MatrixXd mix(n, n);
  Eigen::VectorXd col_norm(n);
  do {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) mix(i, j) = normal(rng);
    col_norm = mix.colwise().norm().transpose();
  } while ((col_norm.array() == 0.0).any());

  // B = sqrt(100) M D^-1, so B^T B = 100 D^-1 M^T M D^-1 = R.
  spec.noise_factor = std::sqrt(kCorrelationScale) * mix * col_norm.cwiseInverse().asDiagonal();
  spec.correlation = spec.noise_factor.transpose() * spec.noise_factor;
  spec.correlation = 0.5 * (spec.correlation + spec.correlation.transpose());
  spec.correlation.diagonal().setConstant(kCorrelationScale);

  std::uniform_int_distribution<int> count(1, kNumGenerators);
  std::uniform_int_distribution<int> basis(0, kNumGenerators - 1);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution keep(kMaskProbability);

  spec.effects.resize(static_cast<std::size_t>(n));
  for (auto& leaf : spec.effects) {
    const int k = count(rng);
    leaf.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const int b = basis(rng);
      leaf.push_back({b, coin(rng) ? 1 : -1});
    }
  }

  spec.masks.assign(static_cast<std::size_t>(m), true);
  for (Eigen::Index i = 0; i < n; ++i) spec.masks[static_cast<std::size_t>(i)] = keep(rng);
  return spec;
}

Dataset generate(const ExperimentSpec& spec, Eigen::Index t, Rng& rng) {
  if (t < 1) throw ValidationError("generate: t must be positive");
  if (!spec.hierarchy) throw ValidationError("generate: spec has no hierarchy");
  const Hierarchy& h = *spec.hierarchy;
  const auto n = static_cast<Eigen::Index>(h.n());
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset d{Eigen::MatrixXd(t, kNumCovariates), Eigen::MatrixXd(t, static_cast<Eigen::Index>(h.m()))};
  const Eigen::Vector3d sd = spec.feature_var.cwiseSqrt();
  Eigen::MatrixXd leaves(t, n);
  for (Eigen::Index r = 0; r < t; ++r) {
    for (int c = 0; c < kNumCovariates; ++c) d.features(r, c) = spec.feature_mean(c) + sd(c) * normal(rng);
    leaves.row(r) = spec.leaf_mean(d.features.row(r).transpose()).transpose();
  }

  Eigen::MatrixXd z;
  if (spec.noise_family) {
    z = sample_spherical(*spec.noise_family, n, t, rng);
  } else {
    z.resize(t, n);
    for (Eigen::Index r = 0; r < t; ++r)
      for (Eigen::Index j = 0; j < n; ++j) z(r, j) = normal(rng);
  }
  // Row epsilon^T = mean + z^T B.
  leaves += z * spec.noise_factor;
  leaves.array() += spec.noise_mean;
  d.targets = leaves * h.h().transpose();
  return d;
}

}  // namespace hcp
