#pragma once

#include <optional>

#include <Eigen/Core>

namespace owf::baseline {

/// Real phase retrieval instance: y_l = (a_l^T x)^2 with a_l the rows of A.
struct RealPrInstance {
  Eigen::VectorXd x;
  Eigen::MatrixXd a;
  Eigen::VectorXd y;
};

struct LanczosResult {
  Eigen::VectorXd vector;  // unit norm
  double ritz_value = 0.0;
  int steps = 0;
};

/// Leading eigenpair of the symmetric matrix op via Lanczos tridiagonalization
/// with full reorthogonalization, `steps` Krylov steps from a deterministic
/// all-ones start. Stops early on an invariant subspace.
LanczosResult lanczos_leading(const Eigen::MatrixXd& op, int steps);

/// Leading eigenvector of (1/m) sum y_l a_l a_l^T scaled by sqrt(sum(y)/m).
/// The weighted covariance is applied matrix-free. Throws std::domain_error
/// for all-zero y.
Eigen::VectorXd lanczos_init(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, int iters = 100);

/// Lanczos Ritz pair for the same weighted covariance, unscaled.
LanczosResult lanczos_spectral(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, int iters);

/// sum_l ((a_l^T x)^2 - y_l)^2.
double objective(const Eigen::VectorXd& x, const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

/// sum_l ((a_l^T x)^2 - y_l) (a_l^T x) a_l, a quarter of the analytic gradient,
/// mirroring the octonion solver's convention.
Eigen::VectorXd gradient(const Eigen::VectorXd& x, const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

struct GdConfig {
  int iters = 2000;
  /// Step alpha = step_scale / (sum(y)/m) on the m-averaged gradient.
  double step_scale = 0.1;
  int lanczos_iters = 100;
  /// Start point; Lanczos initialization when empty.
  std::optional<Eigen::VectorXd> init;
};

/// Gradient descent on the quartic objective. Throws std::runtime_error when
/// the objective stops being finite.
Eigen::VectorXd gd_solve(const RealPrInstance& inst, const GdConfig& cfg);

/// min(|xh - x|, |xh + x|).
double sign_aligned_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

/// Estimate multiplied by the sign that brings it closest to truth.
Eigen::VectorXd sign_align(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

}  // namespace owf::baseline
