#include "owf/baseline.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace owf::baseline {

namespace {

using Apply = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

LanczosResult lanczos(const Apply& apply, Eigen::Index dim, int steps) {
  if (dim == 0) throw std::invalid_argument("lanczos on an empty operator");
  if (steps < 1) throw std::invalid_argument("lanczos needs at least one step");
  const Eigen::Index k_max = std::min<Eigen::Index>(steps, dim);

  Eigen::MatrixXd basis(dim, k_max);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = Eigen::VectorXd::Ones(dim) / std::sqrt(static_cast<double>(dim));

  Eigen::Index k = 0;
  for (; k < k_max; ++k) {
    Eigen::VectorXd w = apply(basis.col(k));
    alpha.push_back(basis.col(k).dot(w));
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    const double b = w.norm();
    if (k + 1 == k_max) break;
    if (b <= 1e-12 * std::max(1.0, std::abs(alpha.back()))) break;
    beta.push_back(b);
    basis.col(k + 1) = w / b;
  }
  const auto used = static_cast<Eigen::Index>(alpha.size());

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
  for (Eigen::Index i = 0; i < used; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < used) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  const Eigen::Index top = used - 1;  // eigenvalues ascending

  LanczosResult out;
  out.ritz_value = eig.eigenvalues()(top);
  out.vector = basis.leftCols(used) * eig.eigenvectors().col(top);
  out.vector.normalize();
  out.steps = static_cast<int>(used);
  return out;
}

}  // namespace

LanczosResult lanczos_leading(const Eigen::MatrixXd& op, int steps) {
  if (op.rows() != op.cols()) throw std::invalid_argument("lanczos needs a square matrix");
  return lanczos([&op](const Eigen::VectorXd& v) -> Eigen::VectorXd { return op * v; }, op.rows(), steps);
}

LanczosResult lanczos_spectral(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, int iters) {
  if (a.rows() != y.size()) throw std::invalid_argument("dimension mismatch: lanczos_init");
  if ((y.array() < 0.0).any()) throw std::invalid_argument("measurements must be non-negative");
  if (y.sum() == 0.0) throw std::domain_error("degenerate measurements");
  const double inv_m = 1.0 / static_cast<double>(a.rows());
  auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return a.transpose() * (y.cwiseProduct(a * v)) * inv_m;
  };
  return lanczos(apply, a.cols(), iters);
}

Eigen::VectorXd lanczos_init(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, int iters) {
  LanczosResult r = lanczos_spectral(a, y, iters);
  return r.vector * std::sqrt(y.sum() / static_cast<double>(a.rows()));
}

double objective(const Eigen::VectorXd& x, const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return ((a * x).array().square() - y.array()).square().sum();
}

Eigen::VectorXd gradient(const Eigen::VectorXd& x, const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const Eigen::VectorXd r = a * x;
  const Eigen::VectorXd w = ((r.array().square() - y.array()) * r.array()).matrix();
  return a.transpose() * w;
}

Eigen::VectorXd gd_solve(const RealPrInstance& inst, const GdConfig& cfg) {
  if (inst.a.rows() != inst.y.size()) throw std::invalid_argument("dimension mismatch: gd_solve");
  if (cfg.iters < 0) throw std::invalid_argument("iters must be >= 0");
  if (!(cfg.step_scale > 0.0)) throw std::invalid_argument("step_scale must be > 0");

  Eigen::VectorXd x = cfg.init ? *cfg.init : lanczos_init(inst.a, inst.y, cfg.lanczos_iters);
  if (x.size() != inst.a.cols()) throw std::invalid_argument("dimension mismatch: initial point");

  const double m = static_cast<double>(inst.a.rows());
  const double mean_y = inst.y.sum() / m;
  const double step = (mean_y > 0.0 ? cfg.step_scale / mean_y : cfg.step_scale) / m;
  for (int it = 0; it < cfg.iters; ++it) {
    x -= step * gradient(x, inst.a, inst.y);
    if (!x.allFinite()) throw std::runtime_error("divergence: reduce step scale");
  }
  return x;
}

double sign_aligned_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  return std::min((estimate - truth).norm(), (estimate + truth).norm());
}

Eigen::VectorXd sign_align(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  return (estimate - truth).norm() <= (estimate + truth).norm() ? estimate : Eigen::VectorXd(-estimate);
}

}  // namespace owf::baseline
