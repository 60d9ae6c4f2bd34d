#include <cmath>

#include <gtest/gtest.h>

#include "hcp/datagen.hpp"
#include "hcp/error.hpp"
#include "hcp/regression.hpp"
#include "support.hpp"

namespace hcp {
namespace {

std::shared_ptr<const Hierarchy> config1() { return std::make_shared<const Hierarchy>(Hierarchy::type_a(1)); }

TEST(DrawSpec, CorrelationHasFixedDiagonalAndIsPsd) {
  Rng rng(71);
  for (int draw = 0; draw < 50; ++draw) {
    const ExperimentSpec spec = draw_spec(config1(), rng);
    ASSERT_EQ(spec.correlation.rows(), 12);
    for (Eigen::Index i = 0; i < 12; ++i) EXPECT_NEAR(spec.correlation(i, i), 100.0, 1e-9);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(spec.correlation).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-8 * 100.0);
    EXPECT_LT(test::max_abs(spec.noise_factor.transpose() * spec.noise_factor - spec.correlation), 1e-9);
  }
}

TEST(DrawSpec, EffectCountsAndMasks) {
  Rng rng(72);
  double total = 0.0;
  std::size_t leaves = 0, kept = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const ExperimentSpec spec = draw_spec(config1(), rng);
    ASSERT_EQ(spec.effects.size(), 12u);
    ASSERT_EQ(spec.masks.size(), 16u);
    for (const auto& leaf : spec.effects) {
      ASSERT_GE(leaf.size(), 1u);
      ASSERT_LE(leaf.size(), 11u);
      total += static_cast<double>(leaf.size());
      for (const Effect& e : leaf) {
        ASSERT_GE(e.basis, 0);
        ASSERT_LT(e.basis, kNumGenerators);
        ASSERT_TRUE(e.sign == 1 || e.sign == -1);
      }
    }
    for (std::size_t i = 12; i < 16; ++i) EXPECT_TRUE(spec.masks[i]);
    for (std::size_t i = 0; i < 12; ++i) kept += spec.masks[i];
    leaves += 12;
  }
  EXPECT_NEAR(total / static_cast<double>(leaves), 6.0, 0.3);
  EXPECT_NEAR(static_cast<double>(kept) / static_cast<double>(leaves), kMaskProbability, 0.02);
}

TEST(Generate, FeatureMomentsAndCoherence) {
  Rng rng(73);
  const ExperimentSpec spec = draw_spec(config1(), rng);
  const Dataset d = generate(spec, 100000, rng);
  const Eigen::Vector3d mean = d.features.colwise().mean();
  EXPECT_LT((mean - Eigen::Vector3d(10, -5, 5)).cwiseAbs().maxCoeff(), 0.05);
  const Eigen::RowVector3d var = (d.features.rowwise() - mean.transpose()).array().square().colwise().mean();
  EXPECT_LT((var - Eigen::RowVector3d(2, 2, 1)).cwiseAbs().maxCoeff(), 0.05);
  for (Eigen::Index t = 0; t < d.targets.rows(); t += 97) EXPECT_TRUE(spec.hierarchy->is_coherent(d.targets.row(t).transpose()));
}

TEST(Generate, NoiseCovarianceMatchesCorrelation) {
  Rng rng(74);
  const ExperimentSpec spec = draw_spec(config1(), rng);
  const Dataset d = generate(spec, 100000, rng);
  Eigen::MatrixXd noise(d.features.rows(), 12);
  for (Eigen::Index t = 0; t < d.features.rows(); ++t)
    noise.row(t) = d.targets.row(t).head(12) - spec.leaf_mean(d.features.row(t).transpose()).transpose();
  const Eigen::RowVectorXd mean = noise.colwise().mean();
  EXPECT_LT((mean.array() - 10.0).abs().maxCoeff(), 0.2);
  const Eigen::MatrixXd c = noise.rowwise() - mean;
  const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(noise.rows());
  EXPECT_LE((cov - spec.correlation).norm(), 0.05 * spec.correlation.norm());
}

TEST(Generate, LeafMeanSumsSignedGenerators) {
  Rng rng(75);
  const ExperimentSpec spec = draw_spec(config1(), rng);
  const Eigen::Vector3d x(9.5, -4.0, 5.5);
  const Eigen::VectorXd f = spec.leaf_mean(x);
  for (std::size_t i = 0; i < 12; ++i) {
    double ref = 0.0;
    for (const Effect& e : spec.effects[i]) ref += e.sign * eval_generator(e.basis, x);
    EXPECT_DOUBLE_EQ(f(static_cast<Eigen::Index>(i)), ref);
  }
}

TEST(Generate, DeterministicForASeedAndNoiseFamilySwitches) {
  Rng a(76), b(76);
  const ExperimentSpec sa = draw_spec(config1(), a), sb = draw_spec(config1(), b);
  const Dataset da = generate(sa, 200, a), db = generate(sb, 200, b);
  EXPECT_EQ(da.features, db.features);
  EXPECT_EQ(da.targets, db.targets);

  ExperimentSpec heavy = sa;
  heavy.noise_family = SphericalFamily{SphericalKind::StudentT, 4.0};
  Rng c(77);
  const Dataset dh = generate(heavy, 200, c);
  EXPECT_TRUE(dh.targets.allFinite());
  EXPECT_THROW(generate(sa, 0, c), ValidationError);
}

}  // namespace
}  // namespace hcp
