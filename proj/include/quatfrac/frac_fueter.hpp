#pragma once

// Fractional psi-Fueter calculus on a box J_a^b: the averaged integral
// script-I, the component integral frak-I, the fractional operators, the
// fractional Cauchy kernel, the correction term N and residual checks for
// the fractional Stokes and Borel-Pompeiu formulas.
//
// Orders follow the true Riemann-Liouville convention: the fractional
// operator of order alpha is sum_j psi_j D^{alpha_j} along the slices
// through q. It factors as psiD_x applied to script_I of order 1 - alpha,
// and psiD_x applied to script_I of order alpha is the operator of order
// 1 - alpha (see `fueter_of_script_I`).

#include <array>
#include <optional>
#include <string>

#include "quatfrac/field.hpp"
#include "quatfrac/fueter.hpp"
#include "quatfrac/quadrature.hpp"
#include "quatfrac/quaternion.hpp"
#include "quatfrac/rl_fractional.hpp"

namespace quatfrac {

/// sum_j (I^{alpha_j}_{a_j+} F)(q_0, ..., x_j, ..., q_3). Needs x_k > a_k for
/// every k (DomainError otherwise).
CQuaternion script_I(const QField& F, const Box4& box, const Point4& q, const Point4& x, const AlphaVec& alpha,
                     const QuadratureSpec& spec = {});

/// d^m/dx_j^m of the j-th term of script_I, i.e. I^{gamma - m} (or D^{m - gamma})
/// of the axis-j slice through q, at x_j. m = 0 is the term itself.
CQuaternion script_I_term(const QField& F, const Box4& box, const Point4& q, int j, Complex gamma_j, double x_j,
                          int m, const QuadratureSpec& spec = {});

/// x -> script_I(F)(q, x, alpha) as a field on `box` with exact partials
/// (mixed partials across distinct axes vanish).
QField script_I_field(const QField& F, const Box4& box, const Point4& q, const AlphaVec& alpha,
                      const QuadratureSpec& spec = {});

/// sum_j 1/(2 Gamma(alpha_j)) int (conj(psi_j) F + conj(F) psi_j)(x_j - t)^(alpha_j - 1) dt.
CQuaternion frak_I(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q, const Point4& x,
                   const AlphaVec& alpha, const QuadratureSpec& spec = {});
/// The same through the components: sum_j I^{alpha_j}[<F, psi_j>](slice).
CQuaternion frak_I_components(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                              const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec = {});

/// sum_j psi_j (D^{alpha_j} F)(q_0, ..., x_j, ..., q_3); alpha must have n = 1.
CQuaternion frac_fueter_left(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                             const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec = {});
/// sum_j (D^{alpha_j} F)(slice) psi_j.
CQuaternion frac_fueter_right(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                              const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec = {});
/// frac_fueter_left at x = q.
CQuaternion frac_fueter_diag(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                             const AlphaVec& alpha, const QuadratureSpec& spec = {});

/// psiD_x script_I(F)(q, x, alpha) = sum_j psi_j d_j I^{alpha_j}(slice), i.e.
/// the fractional operator of order 1 - alpha. `side` puts psi_j on the right.
CQuaternion fueter_of_script_I(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                               const Point4& x, const AlphaVec& alpha, Side side = Side::left,
                               const QuadratureSpec& spec = {});

/// The fractional operator applied to frak_I. Along axis k only the k-th
/// term of frak_I varies; the others are constants in x_k and pick up
/// D^{alpha_k} 1 = (x_k - a_k)^(-alpha_k)/Gamma(1 - alpha_k).
struct RoundTrip {
  CQuaternion matched{};     ///< sum_k psi_k D^{alpha_k}[k-th term]
  CQuaternion full{};        ///< D applied to the whole frak_I
  CQuaternion constants{};   ///< full - matched in closed form
  CQuaternion target{};      ///< sum_j psi_j f_j(slice j); F(q) when x = q
  [[nodiscard]] double matched_residual() const { return max_abs(matched - target); }
  [[nodiscard]] double full_residual() const { return max_abs(full - target); }
  [[nodiscard]] double corrected_residual() const { return max_abs(full - constants - target); }
};
RoundTrip roundtrip_frakI(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                          const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec = {});

/// Composition of fractional operators against sum_j D^{alpha_j + beta_j} F(slice).
struct LaplacianCheck {
  CQuaternion conj_composition{};   ///< conj-psi operator (alpha) after psi operator (beta)
  CQuaternion psi_composition{};    ///< psi operator (alpha) after psi operator (beta)
  CQuaternion conj_diagonal{};      ///< sum_j conj(psi_j) psi_j D^{alpha_j} D^{beta_j} F(slice j)
  CQuaternion psi_diagonal{};       ///< sum_j psi_j^2 D^{alpha_j} D^{beta_j} F(slice j)
  CQuaternion target{};             ///< sum_j D^{alpha_j + beta_j} F(slice j)
  CQuaternion psi_target{};         ///< sum_j psi_j^2 D^{alpha_j + beta_j} F(slice j)
  double cross_magnitude = 0.0;     ///< |conj_composition - conj_diagonal|
  [[nodiscard]] double diagonal_residual() const { return max_abs(conj_diagonal - target); }
  [[nodiscard]] double psi_diagonal_residual() const { return max_abs(psi_diagonal - psi_target); }
  [[nodiscard]] double full_residual() const { return max_abs(conj_composition - target); }
};
LaplacianCheck frac_laplacian_check(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                                    const Point4& x, const AlphaVec& alpha, const AlphaVec& beta,
                                    const QuadratureSpec& spec = {});

/// Fractional Cauchy kernel sum_i D^{alpha_i}_{a_i+} K(y - x), each derivative
/// acting on x_i along the segment from (.., a_i, ..) to x. Throws
/// SegmentHitsSingularity when y is closer than spec.exclusion_for(box) to
/// one of the four segments.
CQuaternion frac_kernel(const StructuralSet& psi, const Box4& box, const Point4& y, const Point4& x,
                        const AlphaVec& alpha, const QuadratureSpec& spec = {});
/// Reference rules on [0, 1] reused by every kernel evaluation with fixed orders.
struct FracKernelRules {
  int points = 8;
  AlphaVec alpha;
  Rule1D legendre;
  std::array<Rule1D, 4> jacobi;  ///< weight (1 - s)^(-Re alpha_i)
  static FracKernelRules make(const AlphaVec& alpha, int points);
};
/// Gauss points per panel of the kernel's 1-D rules for a given spec.
int frac_kernel_points(const QuadratureSpec& spec);
/// Unchecked kernel evaluation (x_k > a_k assumed); std::nullopt when y is
/// within `clearance` of a segment. Panels are graded toward the point of
/// the segment nearest to y.
std::optional<CQuaternion> frac_kernel_eval(const StructuralSet& psi, const Box4& box, const Point4& y,
                                            const Point4& x, const FracKernelRules& rules, double clearance);
/// As frac_kernel with an explicit clearance; std::nullopt instead of throwing.
std::optional<CQuaternion> frac_kernel_if_clear(const StructuralSet& psi, const Box4& box, const Point4& y,
                                                const Point4& x, const AlphaVec& alpha, double clearance,
                                                const QuadratureSpec& spec);

/// Gamma factor in the denominator of N: Gamma(alpha_i) as printed, or
/// Gamma(1 - alpha_i) as produced by D^alpha 1.
enum class GammaConvention { gamma_alpha, gamma_one_minus_alpha };
std::string to_string(GammaConvention c);

/// sum_{i != j} (I^{alpha_j} F)(slice j) / (G(alpha_i) (x_i - a_i)^{alpha_i}).
CQuaternion correction_N(const QField& F, const Box4& box, const Point4& q, const Point4& x,
                         const AlphaVec& alpha, GammaConvention convention, const QuadratureSpec& spec = {});

/// sum_i D^{alpha_i}_{x_i} script_I(F)(q, x, alpha), each derivative taken on
/// the x_i-slice of script_I (the own term, singular like (t - a_i)^alpha_i,
/// and the constant remainder are differentiated separately).
CQuaternion sum_frac_deriv_of_script_I(const QField& F, const Box4& box, const Point4& q, const Point4& x,
                                       const AlphaVec& alpha, const QuadratureSpec& spec = {});

struct DerivativeDecomposition {
  CQuaternion direct{};     ///< sum_frac_deriv_of_script_I
  CQuaternion slices{};     ///< sum_i F(q_0, ..., x_i, ..., q_3)
  CQuaternion n_gamma_alpha{};
  CQuaternion n_one_minus{};
  [[nodiscard]] double residual(GammaConvention c) const;
  /// The convention with the smaller residual.
  [[nodiscard]] GammaConvention winner() const;
};
DerivativeDecomposition decompose_sum_frac_deriv(const QField& F, const Box4& box, const Point4& q, const Point4& x,
                                                 const AlphaVec& alpha, const QuadratureSpec& spec = {});

/// | int_boundary I[g](beta) sigma I[f](alpha)
///   - int (I[g](beta) psiD I[f](alpha) + psiD_r I[g](beta) I[f](alpha)) |
/// with I = script_I(.)(q, ., .). The volume operators are the exact
/// derivatives psiD_x script_I. Every integral is a tensor rule whose axis-j
/// factor is endpoint-singular at a_j for the j-th script_I term.
Residual verify_frac_stokes(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                            const Point4& q, const AlphaVec& alpha, const AlphaVec& beta,
                            const QuadratureSpec& spec);

enum class FracBPMode { decomposed, direct };

struct FracBorelPompeiu {
  FracBPMode mode = FracBPMode::decomposed;
  Residual classical;   ///< decomposed (i): classical formula applied to script_I[f], script_I[g]
  Residual identity;    ///< decomposed (ii): derivative identity (interior) or vanishing along the segments (exterior)
  Residual direct;      ///< direct assembly with the fractional kernel
  [[nodiscard]] double worst() const;
};

/// Fractional Borel-Pompeiu formula at x (x not on the boundary). The
/// target is sum_i (f+g)(slice i) + N[f] + N[g] inside and 0 outside. For
/// exterior points the segments from x toward a must avoid the closed box
/// (two coordinates beyond b), otherwise DomainError.
FracBorelPompeiu verify_frac_borel_pompeiu(const QField& f, const QField& g, const Box4& box,
                                           const StructuralSet& psi, const Point4& q, const Point4& x,
                                           const AlphaVec& alpha, const AlphaVec& beta, const QuadratureSpec& spec,
                                           FracBPMode mode);

/// Classical Borel-Pompeiu expression (boundary minus volume term) for the
/// separable fields script_I[f](alpha) and script_I[g](beta) at x, with the
/// quadrature of one refinement level.
struct SeparableBP {
  CQuaternion lhs{};
  double skipped_fraction = 0.0;
};
SeparableBP borel_pompeiu_of_script_I(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                                      const Point4& q, const Point4& x, const AlphaVec& alpha,
                                      const AlphaVec& beta, const QuadratureSpec& level_spec);

}  // namespace quatfrac
