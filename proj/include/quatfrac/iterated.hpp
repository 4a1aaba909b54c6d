#pragma once

// Iterated psi-Fueter operators (the same structural set n times), the
// iterated fractional operator and the higher-order Borel-Pompeiu chain over
// nested boxes J_1 > J_2 (n = 2 is verified in full).

#include <functional>
#include <optional>
#include <vector>

#include "quatfrac/field.hpp"
#include "quatfrac/frac_fueter.hpp"
#include "quatfrac/fueter.hpp"
#include "quatfrac/quadrature.hpp"
#include "quatfrac/quaternion.hpp"
#include "quatfrac/rl_fractional.hpp"

namespace quatfrac {

/// J_1 > closure(J_2) > ... ; boxes[0] is the outermost.
struct NestedBoxes {
  std::vector<Box4> boxes;

  /// Throws NestingViolation unless every box strictly contains the next one.
  static NestedBoxes make(std::vector<Box4> boxes);
  [[nodiscard]] std::size_t depth() const { return boxes.size(); }
  [[nodiscard]] const Box4& outer() const { return boxes.front(); }
  [[nodiscard]] const Box4& inner() const { return boxes.back(); }
};

/// x -> (psiD)^n F (or the right operator) as a field; its partials come from
/// the partials of F, which must be analytic (MissingDerivative otherwise).
QField fueter_power_field(const QField& F, const StructuralSet& psi, int n, Side side = Side::left);

/// n-fold composition of psi_fueter_left (or right) at x.
CQuaternion iterated_fueter(const QField& F, const StructuralSet& psi, int n, const Point4& x,
                            Side side = Side::left);

/// (psiD)^n applied to x -> script_I(F)(q, x, n - alpha), n = alpha.n.
CQuaternion iterated_frac_fueter(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                                 const Point4& x, const AlphaVec& alpha, Side side = Side::left,
                                 const QuadratureSpec& spec = {});

/// conj-psi Fueter operator applied to x -> frac_fueter_left(F)(q, x, alpha)
/// (0 < Re alpha < 1) against the Laplacian of script_I(F)(q, x, 1 - alpha),
/// taken per axis as D^{1 + alpha_k} of the slice through q.
struct LaplaceFactorization {
  CQuaternion lhs{};
  CQuaternion rhs{};
  [[nodiscard]] double residual() const { return max_abs(lhs - rhs); }
};
LaplaceFactorization laplace_factorization(const QField& F, const Box4& box, const StructuralSet& psi,
                                           const Point4& q, const Point4& x, const AlphaVec& alpha,
                                           const QuadratureSpec& spec = {});

/// Inversion of frak-I through T^(n-1), n = alpha.n in {1, 2}. G = T^(n-1)[F].
/// The left side is the operator of order alpha applied to frak-I[G] along
/// the matching axes, sum_j psi_j (psiD)^(n-1) psi_j<G, psi_j>(slice j); the
/// one-dimensional composition d/dt I^(n - alpha) I^(alpha - n + 1) = id is
/// applied in closed form. Right sides:
///   corrected: 1/2 sum_j [(psiD)^(n-1) G + psi_j (psiD)^(n-1) conj(G) psi_j](slice j)
///   printed:   1/2 sum_j [(psiD)^(n-1) G + (psiD)^(n-1) conj(G) psi_j](slice j)
///   slices:    the corrected form with psiD restricted to the axis of each slice
struct InversionCheck {
  Residual corrected;
  Residual printed;
  Residual slices;
};
InversionCheck inversion_check_T(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                                 const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec);

/// K(y - x), or the fractional kernel, as a function of y; std::nullopt skips the node.
using OuterKernel = std::function<std::optional<CQuaternion>(const Point4& y)>;

/// The terms of the chain for two nested boxes at one quadrature level:
///   boundary        int_{dJ2} k(y2) sigma F(y2)
///   mixed_boundary  int_{J2 x dJ1} k(y2) K(y1 - y2) sigma psiD F(y1)
///   mixed_volume    int_{J2 x J1} k(y2) K(y1 - y2) psiD^2 F(y1)
/// `recursive` is boundary - int_{J2} k(y2) E(y2) with E the inner Borel-Pompeiu
/// expression of psiD F on J1 evaluated node by node.
struct ChainTerms {
  CQuaternion boundary{};
  CQuaternion mixed_boundary{};
  CQuaternion mixed_volume{};
  CQuaternion recursive{};
  double skipped_fraction = 0.0;
  [[nodiscard]] CQuaternion expanded() const { return boundary - mixed_boundary + mixed_volume; }
};
/// Boxes use spec.mixed_order Gauss points per axis; the outer boundary uses
/// spec.order. With the Cauchy kernel (k empty) the singular parts at y2 = x
/// and y1 = y2 are subtracted and integrated in closed form through faces.
ChainTerms bp_higher_order_terms(const QField& F, const NestedBoxes& nested, const StructuralSet& psi,
                                 const Point4& x, const QuadratureSpec& level_spec, const OuterKernel& k = {});

/// Higher-order Borel-Pompeiu formula (depth 1 or 2) against F(x) inside the
/// innermost box and 0 outside, one level per refinement step.
Residual verify_bp_higher_order(const QField& F, const NestedBoxes& nested, const StructuralSet& psi,
                                const Point4& x, const QuadratureSpec& spec);

/// Fractional version on g(x) = script_I(F)(q, x, alpha) with base corner
/// box.a strictly below the outermost box. Decomposed: the chain for g
/// against g(x) (0 outside) and the derivative identity at x (inside) or the
/// vanishing of the chain along the derivative segments (outside). Direct:
/// the chain with the fractional kernel against sum_i F(slices) + N[F]
/// inside and 0 outside.
struct FracBPHigher {
  FracBPMode mode = FracBPMode::decomposed;
  Residual chain;
  Residual identity;
  Residual direct;
  [[nodiscard]] double worst() const;
};
FracBPHigher verify_frac_bp_higher(const QField& F, const NestedBoxes& nested, const Box4& box,
                                   const StructuralSet& psi, const Point4& q, const Point4& x, const AlphaVec& alpha,
                                   const QuadratureSpec& spec, FracBPMode mode);

}  // namespace quatfrac
