#include "owf/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace owf {

namespace {

void check_dims(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y) {
  if (xr.size() != static_cast<Eigen::Index>(8 * a.cols()) || y.size() != a.rows())
    throw std::invalid_argument("dimension mismatch: solver inputs");
}

const Octonion* as_octonions(const Eigen::Ref<const Eigen::VectorXd>& xr) {
  static_assert(sizeof(Octonion) == 8 * sizeof(double));
  return reinterpret_cast<const Octonion*>(xr.data());
}

bool uses_averaging(const OwfConfig& cfg) {
  return cfg.grad_averaging || cfg.step_rule == StepRule::kMeanNormalized;
}

}  // namespace

void OwfConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(step_scale > 0.0)) throw std::invalid_argument("step_scale must be > 0");
  if (stop_tol < 0.0) throw std::invalid_argument("stop_tol must be >= 0");
  if (power_iters < 1) throw std::invalid_argument("power_iters must be >= 1");
}

StepRule parse_step_rule(std::string_view s) {
  if (s == "paper") return StepRule::kPaper;
  if (s == "mean-normalized" || s == "mean") return StepRule::kMeanNormalized;
  throw std::invalid_argument("unknown step rule: " + std::string(s));
}

std::string_view to_string(StepRule r) { return r == StepRule::kPaper ? "paper" : "mean-normalized"; }

double default_step_scale(StepRule r) { return r == StepRule::kPaper ? kPaperStepScale : kDefaultMeanStepScale; }

double evaluate(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y,
                Eigen::VectorXd* grad) {
  check_dims(xr, a, y);
  const std::size_t n = a.cols();
  const Octonion* x = as_octonions(xr);
  Octonion* g = nullptr;
  if (grad != nullptr) {
    grad->setZero(xr.size());
    g = reinterpret_cast<Octonion*>(grad->data());
  }

  double f = 0.0;
  for (std::size_t l = 0; l < a.rows(); ++l) {
    const auto row = a.row(l);
    // r = a_l^* x; gimel(a_l^*)^T aleph(r) has block k equal to aleph(a_lk * r).
    Octonion r;
    for (std::size_t k = 0; k < n; ++k) conj_mul_acc(row[k], x[k], r);
    const double res = r.norm_sq() - y[l];
    f += res * res;
    if (g != nullptr) {
      const Octonion rs = r * res;
      for (std::size_t k = 0; k < n; ++k) mul_acc(row[k], rs, g[k]);
    }
  }
  return f;
}

double objective(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y) {
  return evaluate(xr, a, y, nullptr);
}

Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& xr, const OctMatrix& a, std::span<const double> y,
                         bool average) {
  Eigen::VectorXd g;
  evaluate(xr, a, y, &g);
  if (average && a.rows() > 0) g /= static_cast<double>(a.rows());
  return g;
}

Eigen::VectorXd spectral_init(const OctMatrix& a, std::span<const double> y, const OwfConfig& cfg) {
  if (y.size() != a.rows()) throw std::invalid_argument("dimension mismatch: spectral_init");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : y) {
    if (v < 0.0) throw std::invalid_argument("measurements must be non-negative");
    sum += v;
    sum_sq += v * v;
  }
  if (sum == 0.0) throw std::domain_error("degenerate measurements");
  const double m = static_cast<double>(a.rows());
  const auto dim = static_cast<Eigen::Index>(8 * a.cols());

  EigenPair lead;
  if (cfg.spectral_form == SpectralForm::kOctonion) {
    lead = power_leading_eigvec(accumulate_spectral_matrix(y, a), cfg.power_iters, cfg.power_tol);
  } else {
    const std::size_t n = a.cols();
    auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
      const Octonion* vx = as_octonions(v);
      auto* ox = reinterpret_cast<Octonion*>(out.data());
      for (std::size_t l = 0; l < a.rows(); ++l) {
        if (y[l] == 0.0) continue;
        const auto row = a.row(l);
        Octonion r;
        for (std::size_t k = 0; k < n; ++k) conj_mul_acc(row[k], vx[k], r);
        r *= y[l] / m;
        for (std::size_t k = 0; k < n; ++k) mul_acc(row[k], r, ox[k]);
      }
      return out;
    };
    lead = power_iterate(op, dim, cfg.power_iters, cfg.power_tol);
  }

  const double radius = cfg.init_scale == InitScale::kPaper ? std::sqrt(sum_sq / m) : std::sqrt(sum / m);
  return aleph(lead.vector) * radius;
}

SolveReport owf_solve(const OctMatrix& a, std::span<const double> y, const OwfConfig& cfg,
                      std::span<const Octonion> truth) {
  cfg.validate();
  if (y.size() != a.rows()) throw std::invalid_argument("dimension mismatch: owf_solve");
  if (!truth.empty() && truth.size() != a.cols()) throw std::invalid_argument("dimension mismatch: truth");
  const auto start = std::chrono::steady_clock::now();

  double sum = 0.0;
  for (double v : y) {
    if (v < 0.0) throw std::invalid_argument("measurements must be non-negative");
    sum += v;
  }

  Eigen::VectorXd xr;
  if (cfg.init == InitMode::kProvided) {
    if (cfg.initial.size() != static_cast<Eigen::Index>(8 * a.cols()))
      throw std::invalid_argument("dimension mismatch: initial point");
    xr = cfg.initial;
  } else {
    xr = spectral_init(a, y, cfg);
  }

  const double m = static_cast<double>(a.rows());
  double step = sum > 0.0 ? cfg.step_scale * m / sum : cfg.step_scale;
  if (uses_averaging(cfg)) step /= m;

  SolveReport report;
  report.objective.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
  auto track_distance = [&](const Eigen::VectorXd& v) {
    if (truth.empty()) return;
    const std::span<const Octonion> est(as_octonions(v), a.cols());
    report.distance.push_back(distance(truth, est));
  };

  Eigen::VectorXd grad;
  double f = evaluate(xr, a, y, &grad);
  report.objective.push_back(f);
  track_distance(xr);
  if (!std::isfinite(f)) throw std::runtime_error("divergence: reduce step scale");

  const double f0 = f;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    xr -= step * grad;
    const double next = evaluate(xr, a, y, &grad);
    if (!std::isfinite(next)) throw std::runtime_error("divergence: reduce step scale");
    report.objective.push_back(next);
    track_distance(xr);
    report.iterations = it;
    const bool stalled = cfg.stop_tol > 0.0 && (f == 0.0 || std::abs(f - next) <= cfg.stop_tol * f0);
    f = next;
    if (stalled) break;
  }

  report.estimate = aleph_inv(xr);
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Octonion phase_align(std::span<const Octonion> x, std::span<const Octonion> xs) {
  if (x.size() != xs.size()) throw std::invalid_argument("dimension mismatch: phase_align");
  if (norm(x) == 0.0) throw std::domain_error("alignment reference is zero");
  const Octonion h = herm_inner(x, xs);
  if (h.norm_sq() == 0.0) throw std::domain_error("alignment undefined (orthogonal)");
  return sign_unit(h);
}

OctVector right_multiply(std::span<const Octonion> x, const Octonion& g) {
  OctVector out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) mul_acc(x[k], g, out[k]);
  return out;
}

double distance(std::span<const Octonion> x, std::span<const Octonion> xs) {
  if (x.size() != xs.size()) throw std::invalid_argument("dimension mismatch: distance");
  if (norm(x) == 0.0) throw std::domain_error("alignment reference is zero");
  const Octonion h = herm_inner(x, xs);
  const Octonion g = h.norm_sq() == 0.0 ? Octonion(1.0) : sign_unit(h);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (xs[k] - x[k] * g).norm_sq();
  return std::sqrt(s);
}

}  // namespace owf
