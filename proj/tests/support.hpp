#pragma once

// Reference computations for the tests. Everything here is written with
// plain loops so it shares no code path with the library (no Eigen
// decompositions, no kernels).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hcp/hierarchy.hpp"

namespace hcp::test {

using Rng = std::mt19937_64;

// Gauss-Jordan with partial pivoting; b may have several columns.
inline Eigen::MatrixXd naive_solve(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) < 1e-300) throw std::runtime_error("naive_solve: singular");
    for (Eigen::Index k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
    for (Eigen::Index k = 0; k < b.cols(); ++k) std::swap(b(c, k), b(piv, k));
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c) / a(c, c);
      for (Eigen::Index k = 0; k < n; ++k) a(r, k) -= f * a(c, k);
      for (Eigen::Index k = 0; k < b.cols(); ++k) b(r, k) -= f * b(c, k);
    }
  }
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index k = 0; k < b.cols(); ++k) b(r, k) /= a(r, r);
  return b;
}

inline Eigen::MatrixXd naive_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline double naive_trace(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

// Column-by-column weighted least squares: P u = H argmin_b (u - Hb)^T W (u - Hb).
inline Eigen::MatrixXd naive_projection(const Eigen::MatrixXd& h, const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd htw = naive_product(h.transpose(), w);
  const Eigen::MatrixXd gram = naive_product(htw, h);
  return naive_product(h, naive_solve(gram, htw));
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

// B B^T + shift I with B square Gaussian.
inline Eigen::MatrixXd random_pd(Rng& rng, Eigen::Index dim, double shift = 0.1) {
  const Eigen::MatrixXd b = random_matrix(rng, dim, dim);
  Eigen::MatrixXd a = b * b.transpose();
  a.diagonal().array() += shift;
  return (a + a.transpose()) / 2.0;
}

// Rank-r PSD matrix.
inline Eigen::MatrixXd random_psd(Rng& rng, Eigen::Index dim, Eigen::Index rank) {
  const Eigen::MatrixXd b = random_matrix(rng, dim, rank);
  const Eigen::MatrixXd a = b * b.transpose();
  return (a + a.transpose()) / 2.0;
}

// Random tree: n leaves under `groups` parents (contiguous blocks) and one
// root. Aggregates are listed parents first, root last.
inline Hierarchy random_tree(Rng& rng, int max_leaves = 12) {
  const int n = std::uniform_int_distribution<int>(2, max_leaves)(rng);
  const int groups = std::uniform_int_distribution<int>(1, std::max(1, n / 2))(rng);
  std::vector<int> cut{0};
  {
    std::vector<int> pos;
    for (int i = 1; i < n; ++i) pos.push_back(i);
    std::shuffle(pos.begin(), pos.end(), rng);
    pos.resize(static_cast<std::size_t>(groups - 1));
    std::sort(pos.begin(), pos.end());
    cut.insert(cut.end(), pos.begin(), pos.end());
    cut.push_back(n);
  }
  const int parents = groups > 1 ? groups : 0;
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(parents + 1, n);
  for (int g = 0; g < parents; ++g)
    for (int c = cut[static_cast<std::size_t>(g)]; c < cut[static_cast<std::size_t>(g) + 1]; ++c) sub(g, c) = 1.0;
  sub.row(parents).setOnes();
  return Hierarchy::from_sub_matrix(sub);
}

// Any projection onto Im(H): P = H G with G H = I, G = G0 + K (I - H G0).
inline Eigen::MatrixXd random_projection_onto(Rng& rng, const Eigen::MatrixXd& h, double spread = 1.0) {
  const Eigen::Index m = h.rows(), n = h.cols();
  const Eigen::MatrixXd g0 = naive_solve(naive_product(h.transpose(), h), h.transpose());
  const Eigen::MatrixXd k = spread * random_matrix(rng, n, m);
  const Eigen::MatrixXd g = g0 + k * (Eigen::MatrixXd::Identity(m, m) - h * g0);
  return h * g;
}

// Order statistic index by counting: smallest k in [0, T+1] with k >= q, where
// q is supplied as an exact fraction num/den.
inline std::size_t ceil_fraction(std::uint64_t num, std::uint64_t den) { return (num + den - 1) / den; }
inline std::size_t floor_fraction(std::uint64_t num, std::uint64_t den) { return num / den; }

inline double max_abs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace hcp::test
