#include "hcp/hierarchy.hpp"

#include <string>

#include "hcp/error.hpp"

namespace hcp {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void validate_levels(const std::vector<LevelRange>& levels, std::size_t m) {
  if (levels.empty()) throw ValidationError("hierarchy: levels must not be empty");
  std::size_t next = 1;
  for (const auto& lv : levels) {
    if (lv.first != next || lv.last < lv.first)
      throw ValidationError("hierarchy: levels must partition 1..m contiguously, got range [" +
                            std::to_string(lv.first) + "," + std::to_string(lv.last) + "]");
    next = lv.last + 1;
  }
  if (next != m + 1) throw ValidationError("hierarchy: levels do not cover all " + std::to_string(m) + " nodes");
}

// Appends one aggregate row per group of `group` consecutive leaves.
void add_block_rows(Eigen::MatrixXd& h, std::size_t& row, std::size_t groups, std::size_t group) {
  for (std::size_t g = 0; g < groups; ++g, ++row)
    h.row(static_cast<Eigen::Index>(row))
        .segment(static_cast<Eigen::Index>(g * group), static_cast<Eigen::Index>(group))
        .setOnes();
}

}  // namespace

Hierarchy::Hierarchy(Eigen::MatrixXd h, std::vector<LevelRange> levels)
    : h_(std::move(h)), levels_(std::move(levels)) {}

Hierarchy Hierarchy::from_sub_matrix(const Eigen::MatrixXd& h_sub, std::optional<std::vector<LevelRange>> levels) {
  const auto n = static_cast<std::size_t>(h_sub.cols());
  const auto aggregates = static_cast<std::size_t>(h_sub.rows());
  if (n < 2) throw ValidationError("hierarchy: need at least 2 leaves, got " + std::to_string(n));
  if (aggregates < 1) throw ValidationError("hierarchy: need at least one aggregate row");
  if (!h_sub.allFinite()) throw ValidationError("hierarchy: h_sub has non-finite entries");
  const std::size_t m = n + aggregates;

  Eigen::MatrixXd h(m, n);
  h.topRows(static_cast<Eigen::Index>(n)).setIdentity();
  h.bottomRows(static_cast<Eigen::Index>(aggregates)) = h_sub;

  std::vector<LevelRange> lv = levels ? std::move(*levels)
                                      : std::vector<LevelRange>{{1, n}, {n + 1, m}};
  validate_levels(lv, m);
  return Hierarchy(std::move(h), std::move(lv));
}

Hierarchy Hierarchy::type_a(int k) {
  if (k <= 0) throw ValidationError("type A hierarchy: k must be positive, got " + std::to_string(k));
  const std::size_t children = ipow(3, k);
  const std::size_t per_child = ipow(4, k);
  const std::size_t n = children * per_child;
  const std::size_t m = n + children + 1;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, n);
  h.topRows(static_cast<Eigen::Index>(n)).setIdentity();
  std::size_t row = n;
  add_block_rows(h, row, children, per_child);
  add_block_rows(h, row, 1, n);
  return Hierarchy(std::move(h), {{1, n}, {n + 1, n + children}, {m, m}});
}

Hierarchy Hierarchy::type_b(int k) {
  if (k <= 0) throw ValidationError("type B hierarchy: k must be positive, got " + std::to_string(k));
  const std::size_t children = ipow(2, k);
  const std::size_t grandchildren = children * children;
  const std::size_t per_grandchild = ipow(3, k);
  const std::size_t n = grandchildren * per_grandchild;
  const std::size_t m = n + grandchildren + children + 1;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, n);
  h.topRows(static_cast<Eigen::Index>(n)).setIdentity();
  std::size_t row = n;
  add_block_rows(h, row, grandchildren, per_grandchild);
  add_block_rows(h, row, children, children * per_grandchild);
  add_block_rows(h, row, 1, n);
  return Hierarchy(std::move(h), {{1, n},
                                  {n + 1, n + grandchildren},
                                  {n + grandchildren + 1, n + grandchildren + children},
                                  {m, m}});
}

Eigen::VectorXd Hierarchy::aggregate(const Eigen::VectorXd& bottom) const {
  if (static_cast<std::size_t>(bottom.size()) != n())
    throw ValidationError("aggregate: expected " + std::to_string(n()) + " leaf values, got " +
                          std::to_string(bottom.size()));
  return h_ * bottom;
}

bool Hierarchy::is_coherent(const Eigen::VectorXd& u, double tol) const {
  if (static_cast<std::size_t>(u.size()) != m())
    throw ValidationError("is_coherent: expected length " + std::to_string(m()) + ", got " +
                          std::to_string(u.size()));
  if (tol < 0) throw ValidationError("is_coherent: tolerance must be non-negative");
  const double gap = (u - h_ * u.head(h_.cols())).lpNorm<Eigen::Infinity>();
  const double scale = u.size() ? u.lpNorm<Eigen::Infinity>() : 0.0;
  return gap <= tol * (1.0 + scale);
}

std::size_t Hierarchy::level_of(std::size_t node) const {
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (node + 1 >= levels_[i].first && node + 1 <= levels_[i].last) return i;
  throw ValidationError("level_of: node " + std::to_string(node) + " out of range");
}

}  // namespace hcp
