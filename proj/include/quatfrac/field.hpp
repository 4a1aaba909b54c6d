#pragma once

// Quaternion-valued fields on a box and the seeded polynomial corpus.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "quatfrac/quadrature.hpp"
#include "quatfrac/quaternion.hpp"

namespace quatfrac {

/// A field F : Box4 -> CQuaternion in psi-coordinates. `deriv(x, axes)` returns
/// the mixed partial d^m F / dx_{axes[0]} ... dx_{axes[m-1]}; fields without it
/// fall back to central differences.
struct QField {
  using Value = std::function<CQuaternion(const Point4&)>;
  using Deriv = std::function<CQuaternion(const Point4&, std::span<const int>)>;

  std::string id;
  Box4 domain = Box4::unit();
  Value value;
  Deriv deriv;

  CQuaternion operator()(const Point4& x) const { return value(x); }
  [[nodiscard]] bool has_derivatives() const { return static_cast<bool>(deriv); }

  /// Analytic partial when available, else nested central differences with
  /// step fd_step x (edge length of the domain along the axis).
  [[nodiscard]] CQuaternion partial(const Point4& x, std::span<const int> axes, double fd_step) const;
  [[nodiscard]] CQuaternion partial(const Point4& x, int axis, double fd_step) const {
    const int a[1] = {axis};
    return partial(x, a, fd_step);
  }
};

/// Linear combination sum c_i F_i (left scalar coefficients).
QField combine(const std::vector<std::pair<CQuaternion, QField>>& terms, std::string id);

/// Quaternion-coefficient polynomial in the four psi-coordinates.
class QPolynomial {
 public:
  struct Term {
    std::array<int, 4> exponents{};
    CQuaternion coeff{};
  };

  QPolynomial() = default;
  explicit QPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  [[nodiscard]] CQuaternion operator()(const Point4& x) const;
  [[nodiscard]] CQuaternion derivative(const Point4& x, std::span<const int> axes) const;
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] int degree() const;

  /// As a field with analytic partials of every order.
  [[nodiscard]] QField field(std::string id, const Box4& domain) const;

 private:
  std::vector<Term> terms_;
};

/// Random polynomial of total degree <= `degree` with coefficients in [-1, 1].
QPolynomial random_polynomial(std::uint64_t seed, int degree, bool complex_coefficients = false);

/// Constant field c.
QField constant_field(const CQuaternion& c, const Box4& domain, std::string id = "const");
/// x_psi = sum x_k psi_k.
QField identity_field(const StructuralSet& psi, const Box4& domain);
/// x_1 - conj(psi_0) psi_1 x_0, left psi-regular; equals x1 - i x0 for the standard set.
QField regular_field(const StructuralSet& psi, const Box4& domain);
/// prod_k (x_k - a_k)^2 (scalar), vanishing with its first derivative on the lower faces.
QField vanishing_square_field(const Box4& domain);

/// The 12-field test corpus: constant 1, a random constant, the identity
/// field, the regular field and 8 random degree-<=3 polynomials, all drawn
/// from `seed`.
std::vector<QField> polynomial_corpus(const StructuralSet& psi, const Box4& domain, std::uint64_t seed);

}  // namespace quatfrac
