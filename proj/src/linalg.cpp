#include "hcp/linalg.hpp"

#include <cmath>
#include <span>
#include <string>

#include "hcp/error.hpp"
#include "hcp/kernels.hpp"

namespace hcp {

namespace {

constexpr double kSymmetryTol = 1e-10;
// Pivots below this fraction of the largest one count as zero.
constexpr double kPivotTol = 1e-14;

std::span<const double> as_span(const Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

Eigen::LLT<Eigen::MatrixXd> checked_cholesky(const SymmetricMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.data());
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed: non-positive pivot");
  const Eigen::VectorXd d = llt.matrixLLT().diagonal().array().square();
  if (d.size() > 0 && (!d.allFinite() || d.minCoeff() <= kPivotTol * d.maxCoeff()))
    throw NotPositiveDefinite("Cholesky factorization failed: numerically singular pivot");
  return llt;
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols())
    throw ValidationError("symmetric matrix must be square, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
  if (a.size() > 0) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    const double asym = (a - a.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
    if (!(asym <= kSymmetryTol * (1.0 + norm))) throw ValidationError("matrix is not symmetric");
  }
  data_ = 0.5 * (a + a.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index dim) {
  return SymmetricMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymmetricMatrix SymmetricMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymmetricMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

Eigen::MatrixXd spd_solve(const SymmetricMatrix& a, const Eigen::MatrixXd& b) {
  if (b.rows() != a.dim())
    throw ValidationError("spd_solve: rhs has " + std::to_string(b.rows()) + " rows, expected " +
                          std::to_string(a.dim()));
  return checked_cholesky(a).solve(b);
}

SymmetricMatrix pseudo_inverse(const SymmetricMatrix& a, double rel_tol) {
  if (!(rel_tol > 0)) throw ValidationError("pseudo_inverse: rel_tol must be positive");
  if (a.dim() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.data());
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff = rel_tol * lambda.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (std::abs(lambda(i)) > cutoff) inv(i) = 1.0 / lambda(i);
  const Eigen::MatrixXd& v = eig.eigenvectors();
  return SymmetricMatrix(v * inv.asDiagonal() * v.transpose());
}

double trace_of_product(const SymmetricMatrix& w, const Eigen::MatrixXd& b) {
  if (b.rows() != w.dim() || b.cols() != w.dim())
    throw ValidationError("trace_of_product: dimension mismatch");
  // Tr(W B) = sum_ij W_ij B_ji = sum_ij W_ji B_ji since W is symmetric.
  return kernels::dot(as_span(w.data()), as_span(b));
}

double log_det_spd(const SymmetricMatrix& a) {
  const auto llt = checked_cholesky(a);
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace hcp
