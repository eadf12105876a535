#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "owf/linalg.hpp"

namespace owf {

/// How the gradient step size is derived from the measurements.
///
///  - kPaper: alpha = mu * m / sum(y) applied to the raw summed gradient.
///  - kMeanNormalized: same alpha, gradient averaged over the m terms.
///
/// The literal paper constants (mu = 5, raw sum) overshoot by a factor of
/// order m and diverge; kMeanNormalized with kDefaultMeanStepScale is the
/// calibrated default.
enum class StepRule { kPaper, kMeanNormalized };

/// Initial radius: sqrt(sum(y^2)/m) as in the OWF listing, or the usual
/// Wirtinger-flow sqrt(sum(y)/m). The first grows like |x|^2 and only
/// matches unit-norm signals, so the second is the default.
enum class InitScale { kPaper, kConventional };

/// Matrix whose leading eigenvector seeds the iteration.
///  - kOctonion: gimel(Y) with Y = (1/m) sum y_l a_l a_l^* built in octonion
///    arithmetic.
///  - kQuadratic: (1/m) sum y_l gimel(a_l^*)^T gimel(a_l^*), the real
///    quadratic form of sum y_l |a_l^* x|^2. Not equal to gimel(Y) because
///    the product is not associative. Default; it tracks the signal far
///    more closely at moderate m/n.
enum class SpectralForm { kOctonion, kQuadratic };

enum class InitMode { kSpectral, kProvided };

inline constexpr double kPaperStepScale = 5.0;
inline constexpr double kDefaultMeanStepScale = 0.5;

struct OwfConfig {
  int max_iters = 2000;
  StepRule step_rule = StepRule::kMeanNormalized;
  double step_scale = kDefaultMeanStepScale;
  /// Divide the gradient by m. Implied by kMeanNormalized.
  bool grad_averaging = false;
  /// Early stop once one step changes the objective by at most stop_tol times
  /// its initial value; 0 runs all iterations.
  double stop_tol = 0.0;
  InitMode init = InitMode::kSpectral;
  /// Used when init == kProvided; length 8n.
  Eigen::VectorXd initial;
  InitScale init_scale = InitScale::kConventional;
  SpectralForm spectral_form = SpectralForm::kQuadratic;
  int power_iters = 200;
  double power_tol = 1e-10;

  void validate() const;
};

StepRule parse_step_rule(std::string_view s);
std::string_view to_string(StepRule r);
/// kPaperStepScale for kPaper, kDefaultMeanStepScale otherwise.
double default_step_scale(StepRule r);

struct SolveReport {
  OctVector estimate;
  /// Objective at x^(0) ... x^(iterations).
  std::vector<double> objective;
  /// Distance to the supplied truth per iterate; empty without truth.
  std::vector<double> distance;
  int iterations = 0;
  double wall_ms = 0.0;
};

/// sum_l (|gimel(a_l^*) xr|^2 - y_l)^2.
double objective(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y);

/// sum_l (|gimel(a_l^*) xr|^2 - y_l) gimel(a_l^*)^T gimel(a_l^*) xr.
/// One quarter of the analytic gradient of objective(); `average` divides by m.
Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y,
                         bool average = false);

/// Objective and (optionally) unscaled gradient in one pass over the rows.
double evaluate(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y,
                Eigen::VectorXd* grad);

/// Spectral initial point, length 8n. Throws std::domain_error("degenerate
/// measurements") for all-zero y.
Eigen::VectorXd spectral_init(const OctMatrix& a, std::span<const double> y, const OwfConfig& cfg = {});

/// Octonion Wirtinger flow. `truth`, when non-empty, enables the distance
/// trace. Throws std::runtime_error on a non-finite objective.
SolveReport owf_solve(const OctMatrix& a, std::span<const double> y, const OwfConfig& cfg,
                      std::span<const Octonion> truth = {});

/// Unit octonion g minimizing |xs - x g| over unit g, computed as
/// sign(herm_inner(x, xs)). Throws std::domain_error when x is zero or the
/// inner product vanishes.
Octonion phase_align(std::span<const Octonion> x, std::span<const Octonion> xs);

/// min over unit z of |xs - x z|, with x the reference. When herm_inner(x, xs)
/// vanishes every unit z gives sqrt(|xs|^2 + |x|^2) and g = 1 is used.
double distance(std::span<const Octonion> x, std::span<const Octonion> xs);

/// Entrywise right product x_k * g.
OctVector right_multiply(std::span<const Octonion> x, const Octonion& g);

}  // namespace owf
