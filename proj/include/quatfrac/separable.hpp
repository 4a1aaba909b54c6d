#pragma once

// Integrals whose field factor is a sum of one-variable terms,
// S(y) = sum_j s_j(y_j), as produced by script_I.
//
// A tensor rule applied to k(y) s_j(y_j) only needs, for every node t of
// axis j, the kernel weights summed over the other three axes ("marginals").
// The marginals depend on the kernel and the point x alone, so they are
// computed once and shared by every field; the field terms are tabulated on
// the 1-D nodes. The result equals the plain tensor sum.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "quatfrac/quadrature.hpp"
#include "quatfrac/quaternion.hpp"

namespace quatfrac {

/// One term s_j of a separable field; s_j(t) ~ (t - a_j)^nu * smooth near a_j.
struct AxisTerm {
  std::function<CQuaternion(double)> fn;
  double nu = 0.0;
};
using SeparableField = std::array<AxisTerm, 4>;

/// Integral over the box of (sum_j s1_j) mid (sum_k s2_k), or over the face
/// where axis `pinned` is fixed at `at` (pinned < 0: the whole box). Every
/// 1-D factor uses an `order`-point rule that is endpoint-singular with the
/// exponent of its terms, so the result is the tensor rule evaluated in
/// factored form.
CQuaternion separable_product_integral(const SeparableField& s1, const Quaternion& mid, const SeparableField& s2,
                                       const Box4& box, int pinned, double at, int order);

/// Kernel values on the nodes of a tensor rule, summed over every axis but `axis`.
struct Marginal {
  std::size_t axis = 0;
  Rule1D rule;                  ///< nodes of `axis` (a single node when pinned)
  std::vector<CQuaternion> w;   ///< sum of weight * kernel with y_axis = rule.nodes[i]
};

/// std::nullopt marks a node that must be skipped.
using KernelFn = std::function<std::optional<CQuaternion>(const Point4&)>;

struct KernelMarginals {
  std::array<Marginal, 4> volume;                  ///< for the volume term of axis j
  std::array<std::array<Marginal, 4>, 8> face;     ///< face f (order of faces(psi)), term j
  std::array<Quaternion, 8> sigma{};
  std::array<std::size_t, 8> face_axis{};
  double volume_skipped = 0.0;  ///< |weight| of skipped volume nodes, summed over the four rules
  double volume_total = 0.0;
  double face_skipped = 0.0;
  double face_total = 0.0;
  std::size_t nodes = 0;

  [[nodiscard]] double skipped_fraction() const {
    return volume_total > 0.0 ? volume_skipped / volume_total : 0.0;
  }
};

/// Marginals of `kernel` for the boundary terms (axis-j rule endpoint-singular
/// with boundary_nu[j]) and the volume terms (volume_nu[j]). Axes whose
/// coordinate of x lies in [a_k, b_k] are graded toward x_k with
/// spec.panel_order points per panel down to epsilon; the others use
/// spec.order Gauss points. With exclude_ball, volume nodes closer than
/// epsilon to x are skipped.
KernelMarginals kernel_marginals(const Box4& box, const StructuralSet& psi, const Point4& x, double epsilon,
                                 const QuadratureSpec& spec, const std::array<double, 4>& boundary_nu,
                                 const std::array<double, 4>& volume_nu, const KernelFn& kernel, bool exclude_ball);

/// sum over faces of int k sigma S (Side::left) or int S sigma k (Side::right).
CQuaternion marginal_boundary(const KernelMarginals& m, const SeparableField& s, Side side);
/// int k S (Side::left) or int S k (Side::right) over the box.
CQuaternion marginal_volume(const KernelMarginals& m, const SeparableField& s, Side side);

}  // namespace quatfrac
