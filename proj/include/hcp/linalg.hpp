#pragma once

#include <Eigen/Dense>

namespace hcp {

// Dense symmetric matrix. Construction checks that the input is symmetric up
// to 1e-10 * (1 + ||A||_inf) and stores (A + A^T) / 2.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Eigen::MatrixXd& a);

  static SymmetricMatrix identity(Eigen::Index dim);
  static SymmetricMatrix diagonal(const Eigen::VectorXd& d);

  Eigen::Index dim() const noexcept { return data_.rows(); }
  const Eigen::MatrixXd& data() const noexcept { return data_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

 private:
  Eigen::MatrixXd data_;
};

inline constexpr double kDefaultPinvTol = 1e-10;

// Solves a X = b by Cholesky. Throws NotPositiveDefinite when a pivot is not
// positive (relative to the largest pivot).
Eigen::MatrixXd spd_solve(const SymmetricMatrix& a, const Eigen::MatrixXd& b);

// Moore-Penrose pseudo-inverse through the symmetric eigendecomposition.
// Eigenvalues with |lambda| <= rel_tol * max|lambda| are treated as zero.
SymmetricMatrix pseudo_inverse(const SymmetricMatrix& a, double rel_tol = kDefaultPinvTol);

// Tr(w b) without forming the product.
double trace_of_product(const SymmetricMatrix& w, const Eigen::MatrixXd& b);

// log det(a) from the Cholesky factor; throws NotPositiveDefinite.
double log_det_spd(const SymmetricMatrix& a);

}  // namespace hcp
