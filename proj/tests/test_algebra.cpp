#include <doctest.h>

#include <cmath>
#include <random>

#include "owf/algebra.hpp"

using namespace owf;

namespace {

Octonion random_octonion(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Octonion o;
  for (std::size_t i = 0; i < 8; ++i) o[i] = normal(rng);
  return o;
}

double max_abs_diff(const Octonion& a, const Octonion& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 8; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// e_i * e_j, row i, column j: {sign, unit}. Read off the columns of the
// left-multiplication matrix instantiated at each unit.
constexpr int kTable[8][8][2] = {
    {{1, 0}, {1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {1, 7}},
    {{1, 1}, {-1, 0}, {-1, 3}, {1, 2}, {-1, 5}, {1, 4}, {1, 7}, {-1, 6}},
    {{1, 2}, {1, 3}, {-1, 0}, {-1, 1}, {-1, 6}, {-1, 7}, {1, 4}, {1, 5}},
    {{1, 3}, {-1, 2}, {1, 1}, {-1, 0}, {-1, 7}, {1, 6}, {-1, 5}, {1, 4}},
    {{1, 4}, {1, 5}, {1, 6}, {1, 7}, {-1, 0}, {-1, 1}, {-1, 2}, {-1, 3}},
    {{1, 5}, {-1, 4}, {1, 7}, {-1, 6}, {1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
    {{1, 6}, {-1, 7}, {-1, 4}, {1, 5}, {1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
    {{1, 7}, {1, 6}, {-1, 5}, {-1, 4}, {1, 3}, {1, 2}, {-1, 1}, {-1, 0}},
};

}  // namespace

TEST_CASE("aleph reads coordinates") {
  Octonion x(1.0);
  x[3] = 2.0;
  const RealVec8 v = aleph(x);
  CHECK(v == RealVec8{1, 0, 0, 2, 0, 0, 0, 0});
  CHECK(aleph(Octonion()) == RealVec8{});

  std::mt19937_64 rng(1);
  const Octonion r = random_octonion(rng);
  CHECK(aleph_inv(aleph(r)) == r);
}

TEST_CASE("gimel of the identity and of e1") {
  const RealMat8 id = gimel(Octonion(1.0));
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) CHECK(id(r, c) == (r == c ? 1.0 : 0.0));

  const RealMat8 g = gimel(Octonion::unit(1));
  RealMat8 want;
  want(0, 1) = -1;
  want(1, 0) = 1;
  want(2, 3) = 1;
  want(3, 2) = -1;
  want(4, 5) = 1;
  want(5, 4) = -1;
  want(6, 7) = -1;
  want(7, 6) = 1;
  CHECK(g.m == want.m);
}

TEST_CASE("gimel column 0 is aleph and gimel_inv reads it back") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Octonion x = random_octonion(rng);
    CHECK(gimel_inv(gimel(x)) == x);
  }
}

TEST_CASE("gimel is a scaled orthogonal matrix") {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Octonion x = random_octonion(rng);
    const RealMat8 g = gimel(x);
    const RealMat8 gtg = g.transposed() * g;
    const double n2 = x.norm_sq();
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) worst = std::max(worst, std::abs(gtg(r, c) - (r == c ? n2 : 0.0)) / n2);
    CHECK(g.transposed().m == gimel(conjugate(x)).m);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("unit products") {
  CHECK(Octonion::unit(1) * Octonion::unit(1) == Octonion(-1.0));
  CHECK(Octonion::unit(1) * Octonion::unit(2) == -Octonion::unit(3));
  for (std::size_t i = 1; i < 8; ++i) CHECK(Octonion::unit(i) * Octonion::unit(i) == Octonion(-1.0));

  std::mt19937_64 rng(4);
  const Octonion x = random_octonion(rng);
  CHECK(Octonion(1.0) * x == x);
  CHECK(x * Octonion(1.0) == x);
}

TEST_CASE("unit table matches the frozen fixture") {
  const UnitTable t = unit_table();
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(t[i][j].sign == kTable[i][j][0]);
      CHECK(t[i][j].index == kTable[i][j][1]);
      // The fast product agrees on units as well.
      CHECK(Octonion::unit(i) * Octonion::unit(j) ==
            Octonion::unit(static_cast<std::size_t>(kTable[i][j][1])) * static_cast<double>(kTable[i][j][0]));
    }
}

TEST_CASE("distinct imaginary units anticommute") {
  for (std::size_t i = 1; i < 8; ++i)
    for (std::size_t j = 1; j < 8; ++j)
      if (i != j) CHECK(Octonion::unit(i) * Octonion::unit(j) == -(Octonion::unit(j) * Octonion::unit(i)));
}

TEST_CASE("some unit triple is anti-associative") {
  bool found = false;
  for (std::size_t i = 1; i < 8 && !found; ++i)
    for (std::size_t j = 1; j < 8 && !found; ++j)
      for (std::size_t k = 1; k < 8 && !found; ++k) {
        const Octonion ei = Octonion::unit(i), ej = Octonion::unit(j), ek = Octonion::unit(k);
        const Octonion left = (ei * ej) * ek;
        const Octonion right = ei * (ej * ek);
        if (left == -right && left.norm_sq() > 0.0) found = true;
      }
  CHECK(found);
}

TEST_CASE("fast product equals the matrix reference") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const Octonion a = random_octonion(rng);
    const Octonion b = random_octonion(rng);
    CHECK(max_abs_diff(a * b, mul_reference(a, b)) < 1e-12);
  }
}

TEST_CASE("norm is multiplicative") {
  const Octonion a = Octonion(1.0) + Octonion::unit(1);
  const Octonion b = Octonion(1.0) + Octonion::unit(2);
  CHECK((a * b).norm() == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Octonion x = random_octonion(rng);
    const Octonion y = random_octonion(rng);
    worst = std::max(worst, std::abs((x * y).norm() - x.norm() * y.norm()) / (x.norm() * y.norm()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("alternative laws") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const Octonion a = random_octonion(rng);
    const Octonion b = random_octonion(rng);
    CHECK(max_abs_diff(a * (a * b), (a * a) * b) < 1e-12);
    CHECK(max_abs_diff((b * a) * a, b * (a * a)) < 1e-12);
  }
}

TEST_CASE("conjugate") {
  const Octonion x = Octonion(1.0) + Octonion::unit(1);
  CHECK(conjugate(x) == Octonion(1.0) - Octonion::unit(1));
  CHECK(conjugate(Octonion(3.5)) == Octonion(3.5));

  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Octonion r = random_octonion(rng);
    CHECK(conjugate(conjugate(r)) == r);
    const Octonion p = r * conjugate(r);
    CHECK(max_abs_diff(p, Octonion(r.norm_sq())) < 1e-12);
    CHECK(max_abs_diff(r * inverse(r), Octonion(1.0)) < 1e-12);
  }
}

TEST_CASE("sign_unit") {
  CHECK(sign_unit(Octonion::unit(2) * 3.0) == Octonion::unit(2));
  CHECK(sign_unit(Octonion(1.0)) == Octonion(1.0));
  CHECK_THROWS_WITH_AS(sign_unit(Octonion()), "zero octonion has no sign", std::domain_error);
  CHECK_THROWS_AS(inverse(Octonion()), std::domain_error);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(sign_unit(random_octonion(rng)).norm() - 1.0) < 1e-14);
}

TEST_CASE("fused kernels match the operator forms") {
  std::mt19937_64 rng(10);
  const Octonion a = random_octonion(rng);
  const Octonion b = random_octonion(rng);
  Octonion acc = random_octonion(rng);
  const Octonion start = acc;
  mul_acc(a, b, acc);
  CHECK(max_abs_diff(acc, start + a * b) < 1e-14);
  Octonion acc2 = start;
  conj_mul_acc(a, b, acc2);
  CHECK(max_abs_diff(acc2, start + conjugate(a) * b) < 1e-14);
}
