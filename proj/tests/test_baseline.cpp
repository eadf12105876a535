#include <doctest.h>

#include <cmath>
#include <random>

#include "owf/baseline.hpp"

using namespace owf::baseline;

namespace {

RealPrInstance planted(Eigen::Index dim, Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealPrInstance inst;
  inst.x.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) inst.x(i) = normal(rng);
  inst.x.normalize();
  inst.a.resize(m, dim);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) inst.a(r, c) = normal(rng);
  inst.y = (inst.a * inst.x).array().square().matrix();
  return inst;
}

double abs_cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace

TEST_CASE("lanczos on a rank-one matrix") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(20);
  for (Eigen::Index i = 0; i < 20; ++i) v(i) = normal(rng);
  v.normalize();
  const LanczosResult r = lanczos_leading(v * v.transpose(), 100);
  CHECK(abs_cosine(r.vector, v) > 1.0 - 1e-8);
  CHECK(r.ritz_value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("lanczos matches a dense eigensolver") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(30, 30);
  for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = normal(rng);
  const Eigen::MatrixXd s = b * b.transpose();
  const LanczosResult r = lanczos_leading(s, 30);
  const double top = (s * r.vector).dot(r.vector);
  CHECK(r.ritz_value == doctest::Approx(top).epsilon(1e-10));
  CHECK((s * r.vector - r.ritz_value * r.vector).norm() < 1e-8 * r.ritz_value);
}

TEST_CASE("lanczos Ritz value grows with the number of steps") {
  const RealPrInstance inst = planted(40, 400, 3);
  double prev = -1.0;
  for (int steps : {1, 2, 5, 10, 50, 100}) {
    const LanczosResult r = lanczos_spectral(inst.a, inst.y, steps);
    CHECK(r.ritz_value >= prev - 1e-12);
    prev = r.ritz_value;
  }
}

TEST_CASE("lanczos_init") {
  SUBCASE("correlates with the signal at m/n = 20") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const RealPrInstance inst = planted(16, 320, 100 + seed);
      const Eigen::VectorXd x0 = lanczos_init(inst.a, inst.y);
      CHECK(abs_cosine(x0, inst.x) > 0.5);
      CHECK(x0.norm() == doctest::Approx(std::sqrt(inst.y.sum() / 320.0)).epsilon(1e-12));
    }
  }
  SUBCASE("degenerate measurements") {
    const RealPrInstance inst = planted(4, 10, 4);
    CHECK_THROWS_AS(lanczos_init(inst.a, Eigen::VectorXd::Zero(10)), std::domain_error);
  }
}

TEST_CASE("real gradient matches central differences") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const RealPrInstance inst = planted(6, 18, 200 + static_cast<std::uint64_t>(trial));
    Eigen::VectorXd x(6);
    for (Eigen::Index i = 0; i < 6; ++i) x(i) = normal(rng);
    const Eigen::VectorXd g = 4.0 * gradient(x, inst.a, inst.y);
    Eigen::VectorXd fd(6);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < 6; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      fd(i) = (objective(xp, inst.a, inst.y) - objective(xm, inst.a, inst.y)) / (2 * h);
    }
    CHECK((g - fd).norm() / fd.norm() < 1e-5);
  }
}

TEST_CASE("gd_solve") {
  SUBCASE("fixed point") {
    const RealPrInstance inst = planted(8, 80, 6);
    GdConfig cfg;
    cfg.iters = 100;
    cfg.init = inst.x;
    CHECK((gd_solve(inst, cfg) - inst.x).norm() < 1e-12);
  }
  SUBCASE("recovers a well-sampled signal up to sign") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const RealPrInstance inst = planted(16, 320, 300 + seed);
      const Eigen::VectorXd est = gd_solve(inst, GdConfig{});
      CHECK(sign_aligned_error(est, inst.x) < 1e-3);
    }
  }
  SUBCASE("fails when under-sampled") {
    // m equal to the dimension: real phase retrieval is not injective there.
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const RealPrInstance inst = planted(32, 32, 400 + seed);
      try {
        const Eigen::VectorXd est = gd_solve(inst, GdConfig{});
        failures += sign_aligned_error(est, inst.x) > 0.1 ? 1 : 0;
      } catch (const std::runtime_error&) {
        ++failures;
      }
    }
    CHECK(failures == 5);
  }
  SUBCASE("divergence is reported") {
    const RealPrInstance inst = planted(8, 80, 7);
    GdConfig cfg;
    cfg.step_scale = 1e6;
    CHECK_THROWS_AS(gd_solve(inst, cfg), std::runtime_error);
  }
}

TEST_CASE("sign alignment") {
  Eigen::VectorXd x(3);
  x << 1, 2, 3;
  CHECK(sign_aligned_error(-x, x) == 0.0);
  CHECK(sign_align(-x, x) == x);
}
