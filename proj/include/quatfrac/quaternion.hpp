#pragma once

// Real and complex quaternions, structural sets and coordinate maps.
//
// Coordinates are always stored against the standard basis {1, i, j, k}.
// A structural set psi only enters through coords()/from_coords(), so there
// is a single multiplication table for every basis.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>
#include <type_traits>

namespace quatfrac {

using Complex = std::complex<double>;

template <class T>
struct BasicQuaternion {
  std::array<T, 4> c{};

  constexpr BasicQuaternion() = default;
  constexpr BasicQuaternion(T x0, T x1, T x2, T x3) : c{x0, x1, x2, x3} {}
  // Implicit from a scalar: s -> s + 0i + 0j + 0k.
  constexpr BasicQuaternion(T s) : c{s, T{}, T{}, T{}} {}  // NOLINT

  // Real -> complex promotion; the complex unit commutes with everything so
  // this is an algebra embedding.
  template <class U>
    requires(!std::is_same_v<U, T> && std::is_convertible_v<U, T>)
  constexpr BasicQuaternion(const BasicQuaternion<U>& o)  // NOLINT
      : c{T(o.c[0]), T(o.c[1]), T(o.c[2]), T(o.c[3])} {}

  constexpr T& operator[](std::size_t k) { return c[k]; }
  constexpr const T& operator[](std::size_t k) const { return c[k]; }

  [[nodiscard]] constexpr T scalar() const { return c[0]; }

  constexpr BasicQuaternion& operator+=(const BasicQuaternion& o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr BasicQuaternion& operator-=(const BasicQuaternion& o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr BasicQuaternion& operator*=(const T& s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend constexpr BasicQuaternion operator+(BasicQuaternion a, const BasicQuaternion& b) { return a += b; }
  friend constexpr BasicQuaternion operator-(BasicQuaternion a, const BasicQuaternion& b) { return a -= b; }
  friend constexpr BasicQuaternion operator-(const BasicQuaternion& a) {
    return {-a.c[0], -a.c[1], -a.c[2], -a.c[3]};
  }
  friend constexpr BasicQuaternion operator*(BasicQuaternion a, const T& s) { return a *= s; }
  friend constexpr BasicQuaternion operator*(const T& s, BasicQuaternion a) { return a *= s; }
  friend constexpr BasicQuaternion operator/(BasicQuaternion a, const T& s) {
    for (auto& v : a.c) v /= s;
    return a;
  }

  // Hamilton product: i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.
  friend constexpr BasicQuaternion operator*(const BasicQuaternion& a, const BasicQuaternion& b) {
    return {a.c[0] * b.c[0] - a.c[1] * b.c[1] - a.c[2] * b.c[2] - a.c[3] * b.c[3],
            a.c[0] * b.c[1] + a.c[1] * b.c[0] + a.c[2] * b.c[3] - a.c[3] * b.c[2],
            a.c[0] * b.c[2] - a.c[1] * b.c[3] + a.c[2] * b.c[0] + a.c[3] * b.c[1],
            a.c[0] * b.c[3] + a.c[1] * b.c[2] - a.c[2] * b.c[1] + a.c[3] * b.c[0]};
  }

  friend constexpr bool operator==(const BasicQuaternion&, const BasicQuaternion&) = default;
};

using Quaternion = BasicQuaternion<double>;
using CQuaternion = BasicQuaternion<Complex>;

// Mixed real/complex products promote to complex.
inline CQuaternion operator*(const Quaternion& a, const CQuaternion& b) { return CQuaternion(a) * b; }
inline CQuaternion operator*(const CQuaternion& a, const Quaternion& b) { return a * CQuaternion(b); }
inline CQuaternion operator*(const Complex& s, const Quaternion& q) { return s * CQuaternion(q); }

template <class T>
constexpr BasicQuaternion<T> conj(const BasicQuaternion<T>& q) {
  return {q.c[0], -q.c[1], -q.c[2], -q.c[3]};
}

/// <q, x> = sum q_k x_k in the standard basis, i.e. the real part of conj(q) x.
/// Bilinear (no complex conjugation) for complex quaternions.
template <class T>
constexpr T scalar_product(const BasicQuaternion<T>& q, const BasicQuaternion<T>& x) {
  return q.c[0] * x.c[0] + q.c[1] * x.c[1] + q.c[2] * x.c[2] + q.c[3] * x.c[3];
}

inline double norm2(const Quaternion& q) { return scalar_product(q, q); }
inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }

/// Max-norm over the eight real numbers of a complex quaternion; the residual
/// metric used throughout.
inline double max_abs(const CQuaternion& q) {
  double m = 0.0;
  for (const auto& v : q.c) m = std::max({m, std::abs(v.real()), std::abs(v.imag())});
  return m;
}
inline double max_abs(const Quaternion& q) {
  double m = 0.0;
  for (double v : q.c) m = std::max(m, std::abs(v));
  return m;
}

inline Quaternion real_part(const CQuaternion& q) {
  return {q.c[0].real(), q.c[1].real(), q.c[2].real(), q.c[3].real()};
}
inline Quaternion imag_part(const CQuaternion& q) {
  return {q.c[0].imag(), q.c[1].imag(), q.c[2].imag(), q.c[3].imag()};
}

inline bool is_finite(const CQuaternion& q) {
  for (const auto& v : q.c)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

namespace basis {
inline constexpr Quaternion one{1, 0, 0, 0};
inline constexpr Quaternion i{0, 1, 0, 0};
inline constexpr Quaternion j{0, 0, 1, 0};
inline constexpr Quaternion k{0, 0, 0, 1};
}  // namespace basis

/// Orthonormal quadruple psi_0..psi_3 with its orientation relative to {1,i,j,k}.
class StructuralSet {
 public:
  /// Validates orthonormality (tolerance 1e-10); throws Error{NotOrthonormal}.
  static StructuralSet make(const Quaternion& v0, const Quaternion& v1, const Quaternion& v2,
                            const Quaternion& v3);
  static StructuralSet standard();

  [[nodiscard]] const Quaternion& operator[](std::size_t k) const { return psi_[k]; }
  [[nodiscard]] const std::array<Quaternion, 4>& elements() const { return psi_; }
  /// +1 iff the coordinate matrix of psi has positive determinant.
  [[nodiscard]] int sgn() const { return sgn_; }

  /// The set {conj(psi_k)}; again orthonormal, orientation recomputed.
  [[nodiscard]] StructuralSet conjugated() const;

 private:
  StructuralSet(std::array<Quaternion, 4> psi, int sgn) : psi_(psi), sgn_(sgn) {}
  std::array<Quaternion, 4> psi_;
  int sgn_;
};

/// Alias matching the operation name used in the docs.
inline StructuralSet make_structural_set(const Quaternion& v0, const Quaternion& v1,
                                         const Quaternion& v2, const Quaternion& v3) {
  return StructuralSet::make(v0, v1, v2, v3);
}

/// coords(q, psi)_k = <q, psi_k>.
template <class T>
std::array<T, 4> coords(const BasicQuaternion<T>& q, const StructuralSet& psi) {
  std::array<T, 4> out{};
  for (std::size_t k = 0; k < 4; ++k) out[k] = scalar_product(q, BasicQuaternion<T>(psi[k]));
  return out;
}

/// sum_k c_k psi_k.
template <class T>
BasicQuaternion<T> from_coords(const std::array<T, 4>& c, const StructuralSet& psi) {
  BasicQuaternion<T> out{};
  for (std::size_t k = 0; k < 4; ++k) out += c[k] * BasicQuaternion<T>(psi[k]);
  return out;
}

/// <q, x>_psi = sum of products of psi-coordinates.
template <class T>
T psi_scalar_product(const BasicQuaternion<T>& q, const BasicQuaternion<T>& x, const StructuralSet& psi) {
  const auto cq = coords(q, psi);
  const auto cx = coords(x, psi);
  T s{};
  for (std::size_t k = 0; k < 4; ++k) s += cq[k] * cx[k];
  return s;
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q);
std::ostream& operator<<(std::ostream& os, const CQuaternion& q);

}  // namespace quatfrac
