#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "owf/algebra.hpp"

namespace owf {

using OctVector = std::vector<Octonion>;

/// Dense m x n octonion matrix stored row-major. Row l holds the entries of
/// the sensing vector a_l; measurements use its Hermitian form a_l^* x.
class OctMatrix {
 public:
  OctMatrix() = default;
  OctMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static OctMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Octonion& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Octonion& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Octonion> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Octonion> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Octonion> data_;
};

double norm(std::span<const Octonion> x);

/// Stacked coordinate image, length 8n.
Eigen::VectorXd aleph(std::span<const Octonion> x);
OctVector aleph_inv(const Eigen::Ref<const Eigen::VectorXd>& v);

/// 8m x 8n block matrix with block (l, k) = gimel(A(l, k)).
Eigen::MatrixXd gimel(const OctMatrix& a);
/// 8n x 8 stacked image of a column vector: block k = gimel(x_k).
Eigen::MatrixXd gimel(std::span<const Octonion> x);

/// Entry l is sum_k A(l,k) * x_k, products taken left to right.
OctVector mat_vec(const OctMatrix& a, std::span<const Octonion> x);

/// sum_k conj(x_k) * y_k.
Octonion herm_inner(std::span<const Octonion> x, std::span<const Octonion> y);

/// Y = (1/m) sum_l y_l a_l a_l^*, i.e. Y(i,j) = (1/m) sum_l y_l A(l,i) conj(A(l,j)).
/// Only the upper triangle is accumulated; the lower one is filled by
/// conjugation so the result is Hermitian exactly.
OctMatrix accumulate_spectral_matrix(std::span<const double> y, const OctMatrix& a);

struct EigenPair {
  OctVector vector;  // unit norm
  double value = 0.0;
  int iterations = 0;
};

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Normalized power iteration v <- op(v)/|op(v)| on a symmetric real operator
/// of size 8n, started from the real-part vector (1, 0, ..., 0, 1, 0, ...)
/// normalized. Stops after `iters` steps or when successive Rayleigh
/// quotients differ by less than `tol`.
EigenPair power_iterate(const LinearOperator& op, Eigen::Index dim, int iters, double tol);

/// Normalized power iteration on the real image gimel(Y). Starts from the
/// all-ones real-part vector. Throws std::domain_error when Y is zero.
EigenPair power_leading_eigvec(const OctMatrix& y, int iters = 200, double tol = 1e-10);

/// Same iteration for an already-built symmetric real operator of size 8n.
EigenPair power_leading_eigvec(const Eigen::MatrixXd& real_op, int iters = 200, double tol = 1e-10);

}  // namespace owf
