#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hcp {

// 1-based inclusive node range [first, last].
struct LevelRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool operator==(const LevelRange&) const = default;
};

inline constexpr double kDefaultCoherenceTol = 1e-9;

// Aggregation hierarchy described by its structural matrix H = [Id_n; H_sub].
// Leaves occupy rows 1..n; aggregates follow in level order (deepest first,
// root last). Immutable once built.
class Hierarchy {
 public:
  // Levels default to two groups {leaves, aggregates}.
  static Hierarchy from_sub_matrix(const Eigen::MatrixXd& h_sub,
                                   std::optional<std::vector<LevelRange>> levels = std::nullopt);

  // Root, 3^k children, 4^k leaves per child.
  static Hierarchy type_a(int k);
  // Root, 2^k children, 2^k grandchildren per child, 3^k leaves per grandchild.
  static Hierarchy type_b(int k);

  std::size_t m() const noexcept { return static_cast<std::size_t>(h_.rows()); }
  std::size_t n() const noexcept { return static_cast<std::size_t>(h_.cols()); }
  const Eigen::MatrixXd& h() const noexcept { return h_; }
  Eigen::MatrixXd h_sub() const { return h_.bottomRows(h_.rows() - h_.cols()); }
  const std::vector<LevelRange>& levels() const noexcept { return levels_; }

  // H * bottom.
  Eigen::VectorXd aggregate(const Eigen::VectorXd& bottom) const;

  // ||u - H u_{1:n}||_inf <= tol * (1 + ||u||_inf).
  bool is_coherent(const Eigen::VectorXd& u, double tol = kDefaultCoherenceTol) const;

  // 0-based level index of a 0-based node.
  std::size_t level_of(std::size_t node) const;

 private:
  Hierarchy(Eigen::MatrixXd h, std::vector<LevelRange> levels);

  Eigen::MatrixXd h_;
  std::vector<LevelRange> levels_;
};

}  // namespace hcp
