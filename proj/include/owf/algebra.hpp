#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace owf {

/// Real 8-vector image of an octonion under the coordinate map.
using RealVec8 = std::array<double, 8>;

/// Row-major 8x8 real matrix; the left-multiplication image of an octonion.
struct RealMat8 {
  std::array<double, 64> m{};

  double& operator()(std::size_t r, std::size_t c) { return m[r * 8 + c]; }
  double operator()(std::size_t r, std::size_t c) const { return m[r * 8 + c]; }

  RealMat8 transposed() const;
  RealVec8 apply(const RealVec8& v) const;
  RealMat8 operator*(const RealMat8& rhs) const;
};

/// An element of the octonion algebra, x = c[0] + c[1] e1 + ... + c[7] e7.
///
/// Multiplication follows the left-multiplication matrix returned by
/// gimel(): a*b is the product gimel(a) * aleph(b) read back as an
/// octonion. The product is bilinear, alternative and norm-multiplicative
/// but neither commutative nor associative.
class Octonion {
 public:
  constexpr Octonion() = default;
  constexpr explicit Octonion(const RealVec8& c) : c_(c) {}
  constexpr Octonion(double real) : c_{real, 0, 0, 0, 0, 0, 0, 0} {}  // NOLINT

  static constexpr Octonion unit(std::size_t i) {
    RealVec8 c{};
    c[i] = 1.0;
    return Octonion(c);
  }

  constexpr double operator[](std::size_t i) const { return c_[i]; }
  constexpr double& operator[](std::size_t i) { return c_[i]; }
  constexpr const RealVec8& coeffs() const { return c_; }

  constexpr double real() const { return c_[0]; }
  double norm_sq() const;
  double norm() const { return std::sqrt(norm_sq()); }

  Octonion& operator+=(const Octonion& o);
  Octonion& operator-=(const Octonion& o);
  Octonion& operator*=(double s);

  friend Octonion operator+(Octonion a, const Octonion& b) { return a += b; }
  friend Octonion operator-(Octonion a, const Octonion& b) { return a -= b; }
  friend Octonion operator-(Octonion a) { return a *= -1.0; }
  friend Octonion operator*(Octonion a, double s) { return a *= s; }
  friend Octonion operator*(double s, Octonion a) { return a *= s; }
  friend Octonion operator*(const Octonion& a, const Octonion& b);

  friend bool operator==(const Octonion&, const Octonion&) = default;

 private:
  RealVec8 c_{};
};

RealVec8 aleph(const Octonion& x);
Octonion aleph_inv(const RealVec8& v);

/// Left-multiplication matrix: aleph(a*b) == gimel(a) * aleph(b).
RealMat8 gimel(const Octonion& x);
/// Reads column 0, which equals aleph(x).
Octonion gimel_inv(const RealMat8& g);

Octonion conjugate(const Octonion& x);
Octonion inverse(const Octonion& x);

/// x / |x|. Throws std::domain_error for the zero octonion.
Octonion sign_unit(const Octonion& x);

/// Product evaluated through the explicit matrix, gimel(a) * aleph(b).
/// Slower than operator* and kept as the reference the fast path is checked
/// against.
Octonion mul_reference(const Octonion& a, const Octonion& b);

/// Unit products e_i * e_j = sign * e_index, generated from gimel().
struct UnitProduct {
  int sign;
  int index;
  friend bool operator==(const UnitProduct&, const UnitProduct&) = default;
};
using UnitTable = std::array<std::array<UnitProduct, 8>, 8>;
UnitTable unit_table();

/// Fused kernels used by the solver inner loops. Semantically identical to
/// the operator forms.
void mul_acc(const Octonion& a, const Octonion& b, Octonion& acc);          // acc += a*b
void conj_mul_acc(const Octonion& a, const Octonion& b, Octonion& acc);     // acc += conj(a)*b

}  // namespace owf
