#include "owf/algebra.hpp"

namespace owf {

RealMat8 RealMat8::transposed() const {
  RealMat8 t;
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RealVec8 RealMat8::apply(const RealVec8& v) const {
  RealVec8 out{};
  for (std::size_t r = 0; r < 8; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < 8; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

RealMat8 RealMat8::operator*(const RealMat8& rhs) const {
  RealMat8 out;
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < 8; ++k) s += (*this)(r, k) * rhs(k, c);
      out(r, c) = s;
    }
  return out;
}

double Octonion::norm_sq() const {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return s;
}

Octonion& Octonion::operator+=(const Octonion& o) {
  for (std::size_t i = 0; i < 8; ++i) c_[i] += o.c_[i];
  return *this;
}

Octonion& Octonion::operator-=(const Octonion& o) {
  for (std::size_t i = 0; i < 8; ++i) c_[i] -= o.c_[i];
  return *this;
}

Octonion& Octonion::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

// Row r of gimel(a) dotted with aleph(b), written out.
void mul_acc(const Octonion& a, const Octonion& b, Octonion& acc) {
  const double a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
  const double a4 = a[4], a5 = a[5], a6 = a[6], a7 = a[7];
  const double b0 = b[0], b1 = b[1], b2 = b[2], b3 = b[3];
  const double b4 = b[4], b5 = b[5], b6 = b[6], b7 = b[7];
  acc[0] += a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4 - a5 * b5 - a6 * b6 - a7 * b7;
  acc[1] += a1 * b0 + a0 * b1 + a3 * b2 - a2 * b3 + a5 * b4 - a4 * b5 - a7 * b6 + a6 * b7;
  acc[2] += a2 * b0 - a3 * b1 + a0 * b2 + a1 * b3 + a6 * b4 + a7 * b5 - a4 * b6 - a5 * b7;
  acc[3] += a3 * b0 + a2 * b1 - a1 * b2 + a0 * b3 + a7 * b4 - a6 * b5 + a5 * b6 - a4 * b7;
  acc[4] += a4 * b0 - a5 * b1 - a6 * b2 - a7 * b3 + a0 * b4 + a1 * b5 + a2 * b6 + a3 * b7;
  acc[5] += a5 * b0 + a4 * b1 - a7 * b2 + a6 * b3 - a1 * b4 + a0 * b5 - a3 * b6 + a2 * b7;
  acc[6] += a6 * b0 + a7 * b1 + a4 * b2 - a5 * b3 - a2 * b4 + a3 * b5 + a0 * b6 - a1 * b7;
  acc[7] += a7 * b0 - a6 * b1 + a5 * b2 + a4 * b3 - a3 * b4 - a2 * b5 + a1 * b6 + a0 * b7;
}

void conj_mul_acc(const Octonion& a, const Octonion& b, Octonion& acc) {
  const double a0 = a[0], a1 = -a[1], a2 = -a[2], a3 = -a[3];
  const double a4 = -a[4], a5 = -a[5], a6 = -a[6], a7 = -a[7];
  const double b0 = b[0], b1 = b[1], b2 = b[2], b3 = b[3];
  const double b4 = b[4], b5 = b[5], b6 = b[6], b7 = b[7];
  acc[0] += a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3 - a4 * b4 - a5 * b5 - a6 * b6 - a7 * b7;
  acc[1] += a1 * b0 + a0 * b1 + a3 * b2 - a2 * b3 + a5 * b4 - a4 * b5 - a7 * b6 + a6 * b7;
  acc[2] += a2 * b0 - a3 * b1 + a0 * b2 + a1 * b3 + a6 * b4 + a7 * b5 - a4 * b6 - a5 * b7;
  acc[3] += a3 * b0 + a2 * b1 - a1 * b2 + a0 * b3 + a7 * b4 - a6 * b5 + a5 * b6 - a4 * b7;
  acc[4] += a4 * b0 - a5 * b1 - a6 * b2 - a7 * b3 + a0 * b4 + a1 * b5 + a2 * b6 + a3 * b7;
  acc[5] += a5 * b0 + a4 * b1 - a7 * b2 + a6 * b3 - a1 * b4 + a0 * b5 - a3 * b6 + a2 * b7;
  acc[6] += a6 * b0 + a7 * b1 + a4 * b2 - a5 * b3 - a2 * b4 + a3 * b5 + a0 * b6 - a1 * b7;
  acc[7] += a7 * b0 - a6 * b1 + a5 * b2 + a4 * b3 - a3 * b4 - a2 * b5 + a1 * b6 + a0 * b7;
}

Octonion operator*(const Octonion& a, const Octonion& b) {
  Octonion out;
  mul_acc(a, b, out);
  return out;
}

RealVec8 aleph(const Octonion& x) { return x.coeffs(); }

Octonion aleph_inv(const RealVec8& v) { return Octonion(v); }

RealMat8 gimel(const Octonion& x) {
  const double x0 = x[0], x1 = x[1], x2 = x[2], x3 = x[3];
  const double x4 = x[4], x5 = x[5], x6 = x[6], x7 = x[7];
  RealMat8 g;
  g.m = {x0, -x1, -x2, -x3, -x4, -x5, -x6, -x7,  //
         x1, x0,  x3,  -x2, x5,  -x4, -x7, x6,   //
         x2, -x3, x0,  x1,  x6,  x7,  -x4, -x5,  //
         x3, x2,  -x1, x0,  x7,  -x6, x5,  -x4,  //
         x4, -x5, -x6, -x7, x0,  x1,  x2,  x3,   //
         x5, x4,  -x7, x6,  -x1, x0,  -x3, x2,   //
         x6, x7,  x4,  -x5, -x2, x3,  x0,  -x1,  //
         x7, -x6, x5,  x4,  -x3, -x2, x1,  x0};
  return g;
}

Octonion gimel_inv(const RealMat8& g) {
  RealVec8 c{};
  for (std::size_t i = 0; i < 8; ++i) c[i] = g(i, 0);
  return Octonion(c);
}

Octonion conjugate(const Octonion& x) {
  Octonion out = -x;
  out[0] = x[0];
  return out;
}

Octonion inverse(const Octonion& x) {
  const double n2 = x.norm_sq();
  if (n2 == 0.0) throw std::domain_error("zero octonion has no inverse");
  return conjugate(x) * (1.0 / n2);
}

Octonion sign_unit(const Octonion& x) {
  const double n = x.norm();
  if (n == 0.0) throw std::domain_error("zero octonion has no sign");
  return x * (1.0 / n);
}

Octonion mul_reference(const Octonion& a, const Octonion& b) {
  return aleph_inv(gimel(a).apply(aleph(b)));
}

UnitTable unit_table() {
  UnitTable t{};
  for (std::size_t i = 0; i < 8; ++i) {
    const RealMat8 g = gimel(Octonion::unit(i));
    for (std::size_t j = 0; j < 8; ++j) {
      // Column j of gimel(e_i) is aleph(e_i * e_j); exactly one entry is +-1.
      for (std::size_t k = 0; k < 8; ++k) {
        if (g(k, j) != 0.0) {
          t[i][j] = {g(k, j) > 0 ? 1 : -1, static_cast<int>(k)};
          break;
        }
      }
    }
  }
  return t;
}

}  // namespace owf
