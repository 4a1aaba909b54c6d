#pragma once

// Classical psi-Fueter layer: the operators, the Cauchy kernel, the
// Teodorescu transform and residual checks for the Stokes and Borel-Pompeiu
// formulas on boxes.

#include <string>
#include <vector>

#include "quatfrac/field.hpp"
#include "quatfrac/quadrature.hpp"
#include "quatfrac/quaternion.hpp"

namespace quatfrac {

struct RefinementStep {
  int level = 0;
  double epsilon = 0.0;  ///< exclusion radius used at this level (0 if none)
  int order = 0;
  double residual = 0.0;
  double skipped_fraction = 0.0;
};

/// Outcome of an identity check: `value` is the max-norm mismatch at the
/// finest level, lhs/rhs the two sides there.
struct Residual {
  double value = 0.0;
  CQuaternion lhs{};
  CQuaternion rhs{};
  QuadratureSpec spec{};
  std::vector<RefinementStep> trace;
  double skipped_fraction = 0.0;

  [[nodiscard]] bool strictly_decreasing() const;
  /// Appends a level and makes it the reported one.
  void record(const RefinementStep& step, const CQuaternion& l, const CQuaternion& r);
};

/// sum_k psi_k d_k F(x) and sum_k d_k F(x) psi_k. Throws OutsideDomain when x
/// is not in the closed domain of F.
CQuaternion psi_fueter_left(const QField& F, const StructuralSet& psi, const Point4& x, double fd_step = 1e-5);
CQuaternion psi_fueter_right(const QField& F, const StructuralSet& psi, const Point4& x, double fd_step = 1e-5);

/// K(u) = conj(u_psi) / (2 pi^2 |u|^4) with u_psi = sum u_k psi_k; throws
/// SingularPoint when |u| < 1e-14.
Quaternion cauchy_kernel_at(const StructuralSet& psi, const Point4& u);
/// K(tau - x).
Quaternion cauchy_kernel(const StructuralSet& psi, const Point4& tau, const Point4& x);
/// d K / d u_i at u.
Quaternion cauchy_kernel_partial(const StructuralSet& psi, const Point4& u, int i);

/// Right inverse of the left psi-Fueter operator,
/// T[F](x) = int K(x - y) F(y) dy = -int K(y - x) F(y) dy,
/// by ball exclusion around x (radius spec.exclusion_for(box)).
CQuaternion teodorescu(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                       const QuadratureSpec& spec);
/// int K(y - x) F(y) dy, the kernel orientation K(y - x) taken literally.
CQuaternion teodorescu_kernel_yx(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                                 const QuadratureSpec& spec);
/// psiD applied to T[F] at x, differentiated under the integral:
/// int sum_k psi_k K(x - y) d_k F(y) dy - int_boundary sigma K(x - y) F(y).
CQuaternion fueter_of_teodorescu(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                                 const QuadratureSpec& spec);
/// |psiD T[F](x) - F(x)| over spec.refine_levels halvings of the exclusion radius.
Residual verify_teodorescu(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                           const QuadratureSpec& spec);

/// | int_boundary g sigma f - int (g psiD[f] + psiD_r[g] f) |, one level per
/// refinement step (quadrature order raised).
Residual verify_stokes_classical(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                                 const QuadratureSpec& spec);

/// Borel-Pompeiu: boundary term int (K(t-x) sigma f + g sigma K(t-x)) minus
/// volume term int (K(y-x) psiD[f] + psiD_r[g] K(y-x)) against f(x)+g(x)
/// inside and 0 outside. A field with an empty `value` counts as zero.
/// Throws OnBoundary if x is within the exclusion radius of the boundary.
Residual verify_borel_pompeiu_classical(const QField& f, const QField& g, const Box4& box,
                                        const StructuralSet& psi, const Point4& x, const QuadratureSpec& spec);

/// The two Borel-Pompeiu integrals for one quadrature level.
struct BorelPompeiuTerms {
  CQuaternion boundary{};
  CQuaternion volume{};
};
BorelPompeiuTerms borel_pompeiu_terms(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                                      const Point4& x, const QuadratureSpec& level_spec);

}  // namespace quatfrac
