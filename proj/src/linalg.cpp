#include "owf/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace owf {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("dimension mismatch: ") + what);
}

}  // namespace

OctMatrix OctMatrix::identity(std::size_t n) {
  OctMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Octonion(1.0);
  return m;
}

double norm(std::span<const Octonion> x) {
  double s = 0.0;
  for (const auto& v : x) s += v.norm_sq();
  return std::sqrt(s);
}

Eigen::VectorXd aleph(std::span<const Octonion> x) {
  Eigen::VectorXd v(8 * static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t i = 0; i < 8; ++i) v(static_cast<Eigen::Index>(8 * k + i)) = x[k][i];
  return v;
}

OctVector aleph_inv(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() % 8 != 0) throw std::invalid_argument("real image length must be a multiple of 8");
  OctVector x(static_cast<std::size_t>(v.size() / 8));
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t i = 0; i < 8; ++i) x[k][i] = v(static_cast<Eigen::Index>(8 * k + i));
  return x;
}

Eigen::MatrixXd gimel(const OctMatrix& a) {
  Eigen::MatrixXd g(8 * a.rows(), 8 * a.cols());
  for (std::size_t l = 0; l < a.rows(); ++l)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const RealMat8 b = gimel(a(l, k));
      for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) g(8 * l + r, 8 * k + c) = b(r, c);
    }
  return g;
}

Eigen::MatrixXd gimel(std::span<const Octonion> x) {
  Eigen::MatrixXd g(8 * x.size(), 8);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const RealMat8 b = gimel(x[k]);
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) g(8 * k + r, c) = b(r, c);
  }
  return g;
}

OctVector mat_vec(const OctMatrix& a, std::span<const Octonion> x) {
  require(a.cols() == x.size(), "mat_vec");
  OctVector out(a.rows());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const auto row = a.row(l);
    for (std::size_t k = 0; k < row.size(); ++k) mul_acc(row[k], x[k], out[l]);
  }
  return out;
}

Octonion herm_inner(std::span<const Octonion> x, std::span<const Octonion> y) {
  require(x.size() == y.size(), "herm_inner");
  Octonion acc;
  for (std::size_t k = 0; k < x.size(); ++k) conj_mul_acc(x[k], y[k], acc);
  return acc;
}

OctMatrix accumulate_spectral_matrix(std::span<const double> y, const OctMatrix& a) {
  require(y.size() == a.rows(), "accumulate_spectral_matrix");
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  OctMatrix out(n, n);
  for (std::size_t l = 0; l < m; ++l) {
    if (y[l] == 0.0) continue;
    const auto row = a.row(l);
    for (std::size_t i = 0; i < n; ++i) {
      const Octonion wi = row[i] * y[l];
      for (std::size_t j = i; j < n; ++j) mul_acc(wi, conjugate(row[j]), out(i, j));
    }
  }
  const double inv_m = m > 0 ? 1.0 / static_cast<double>(m) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = Octonion(out(i, i).real() * inv_m);
    for (std::size_t j = i + 1; j < n; ++j) {
      out(i, j) *= inv_m;
      out(j, i) = conjugate(out(i, j));
    }
  }
  return out;
}

EigenPair power_iterate(const LinearOperator& op, Eigen::Index dim, int iters, double tol) {
  if (dim == 0 || dim % 8 != 0) throw std::invalid_argument("power iteration needs an operator of size 8n");

  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index k = 0; k < dim; k += 8) v(k) = 1.0;
  v.normalize();

  Eigen::VectorXd w = op(v);
  double rq = v.dot(w);
  EigenPair out;
  for (int it = 1; it <= iters; ++it) {
    const double wn = w.norm();
    if (wn == 0.0 || !std::isfinite(wn)) throw std::domain_error("no dominant eigenvector");
    v = w / wn;
    w = op(v);
    const double next = v.dot(w);
    out.iterations = it;
    const bool done = std::abs(next - rq) < tol;
    rq = next;
    if (done) break;
  }
  out.value = rq;
  out.vector = aleph_inv(v);
  return out;
}

EigenPair power_leading_eigvec(const Eigen::MatrixXd& op, int iters, double tol) {
  if (op.rows() != op.cols()) throw std::invalid_argument("power iteration needs a square operator");
  if (op.size() == 0 || op.cwiseAbs().maxCoeff() == 0.0) throw std::domain_error("no dominant eigenvector");
  return power_iterate([&op](const Eigen::VectorXd& v) -> Eigen::VectorXd { return op * v; }, op.rows(), iters,
                       tol);
}

EigenPair power_leading_eigvec(const OctMatrix& y, int iters, double tol) {
  require(y.rows() == y.cols(), "power_leading_eigvec");
  return power_leading_eigvec(gimel(y), iters, tol);
}

}  // namespace owf
