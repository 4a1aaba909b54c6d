#pragma once

// Numerical integration on boxes in R^4 (coordinates are psi-coordinates):
// 1-D Gauss rules, tensor-product box rules, the eight-face boundary
// integral against the sigma^psi form and singularity-excluding volume
// integration on graded meshes.
//
// Every reduction runs in a fixed node order with compensated (Neumaier)
// summation. Optional worker threads split the outermost axis into fixed
// chunks whose partial sums are combined in chunk order, so results are
// bitwise independent of the worker count.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "quatfrac/error.hpp"
#include "quatfrac/quaternion.hpp"

namespace quatfrac {

using Point4 = std::array<double, 4>;
using Index4 = std::array<std::size_t, 4>;

/// The open rectangle J_a^b = (a0,b0) x ... x (a3,b3) in psi-coordinates.
struct Box4 {
  Point4 a{};
  Point4 b{};

  /// Throws DomainError unless a_k < b_k for every k.
  static Box4 make(const Point4& a, const Point4& b);
  static Box4 unit() { return make({0, 0, 0, 0}, {1, 1, 1, 1}); }

  [[nodiscard]] double measure() const;
  [[nodiscard]] double diameter() const;
  [[nodiscard]] double length(std::size_t k) const { return b[k] - a[k]; }
  [[nodiscard]] bool contains(const Point4& x) const;   // open box
  [[nodiscard]] bool in_closure(const Point4& x) const;
  /// Distance to the boundary; positive inside, 0 on it and for exterior points
  /// it is the distance to the closure, also positive.
  [[nodiscard]] double distance_to_boundary(const Point4& x) const;
  /// True when the closure of `inner` lies in the open box with margin > 0 on every side.
  [[nodiscard]] bool strictly_contains(const Box4& inner) const;
};

struct QuadratureSpec {
  int order = 24;               ///< Gauss points per axis / per 1-D rule
  int refine_levels = 3;        ///< levels in refinement studies
  double exclusion_radius = 0;  ///< <= 0 means 1e-2 x box diameter
  double fd_step = 1e-5;        ///< relative central-difference step
  bool graded = false;          ///< geometric grading of 1-D RL rules toward the base point
  double grading_ratio = 0.3;   ///< width ratio of consecutive graded panels
  int grading_layers = 60;      ///< panels of a graded 1-D RL rule
  int panel_order = 4;          ///< Gauss points per panel of graded 4-D meshes
  int mixed_order = 8;          ///< per-axis order for nested (mixed-domain) integrals
  int threads = 1;              ///< worker threads for tensor sums

  /// Throws ConfigError on order < 2, non-positive fd step, bad ratio, ...
  void validate() const;
  [[nodiscard]] double exclusion_for(const Box4& box) const;
  /// Level `level` of a refinement study: exclusion radius halved `level`
  /// times and panel/rule orders increased.
  [[nodiscard]] QuadratureSpec refined(const Box4& box, int level) const;
};

/// Nodes and weights of a 1-D rule.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  void append(const Rule1D& other);
  template <class F>
  auto apply(F&& f) const {
    using R = std::invoke_result_t<F&, double>;
    R sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Exact for polynomials of degree <= 2n-1 on [lo, hi].
Rule1D gauss_legendre(int n, double lo, double hi);
/// Weight (hi - t)^mu, mu > -1; exact for (hi-t)^mu p(t), deg p <= 2n-1.
/// Throws InvalidExponent if mu <= -1.
Rule1D gauss_jacobi(int n, double mu, double lo, double hi);
/// Weight (t - lo)^nu, nu > -1.
Rule1D gauss_jacobi_lower(int n, double nu, double lo, double hi);
/// Weight (hi - t)^mu (t - lo)^nu.
Rule1D gauss_jacobi2(int n, double mu, double nu, double lo, double hi);
/// Unweighted rule (weights divided by (t_i - lo)^nu) that is exact for
/// integrands of the form (t - lo)^nu p(t).
Rule1D endpoint_singular_rule(int n, double nu, double lo, double hi);
/// Gauss-Legendre with n points on every panel of `breakpoints` (sorted).
Rule1D composite_legendre(std::span<const double> breakpoints, int n);

/// How one axis of a graded mesh is built.
struct AxisPlan {
  std::optional<double> attractor;       ///< grade geometrically toward this point
  std::optional<double> lower_exponent;  ///< integrand ~ (t - lo)^nu * smooth near lo
};

/// Breakpoints c +- L r^m (integer m) clipped to [lo, hi], where L is the
/// distance from c to the nearer end. Symmetric about c near c; stops once
/// panels are narrower than `min_width`.
std::vector<double> graded_breakpoints(double lo, double hi, double c, double ratio, double min_width);

/// Composite rule on [lo, hi] following `plan`: panels from graded_breakpoints
/// (or a single panel), `points` per panel, the panel touching lo replaced by
/// endpoint_singular_rule when a lower exponent is given.
Rule1D axis_rule(double lo, double hi, const AxisPlan& plan, int points, double ratio,
                 double min_width);

using TensorRule = std::array<Rule1D, 4>;

TensorRule legendre_tensor(const Box4& box, int order);

/// Running sum of complex quaternions with Neumaier compensation per real component.
class CompensatedSum {
 public:
  void add(const CQuaternion& q);
  void add(const CompensatedSum& other);
  [[nodiscard]] CQuaternion value() const;

 private:
  void add_component(std::size_t i, double v);
  std::array<double, 8> sum_{};
  std::array<double, 8> comp_{};
};

/// Result of a tensor sum that may skip nodes.
struct TensorSum {
  CQuaternion value{};
  double skipped_weight = 0.0;  ///< sum of |weights| of skipped nodes
  double total_weight = 0.0;    ///< sum of |weights| of all nodes
  std::size_t nodes = 0;

  [[nodiscard]] double skipped_fraction() const {
    return total_weight > 0.0 ? skipped_weight / total_weight : 0.0;
  }
};

namespace detail {
/// Runs body(i) for i in [0, n) on `threads` workers; body must only write
/// to slot i of a caller-owned buffer.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);
[[noreturn]] void throw_non_finite(const Point4& y);
}  // namespace detail

/// Integrand value for one node; std::nullopt marks a skipped node.
using NodeValue = std::optional<CQuaternion>;

/// Tensor-product sum over `rule`. `fn(idx, y)` returns CQuaternion or
/// NodeValue. Throws NonFinite on a non-finite node value.
template <class Fn>
TensorSum tensor_sum(const TensorRule& rule, Fn&& fn, int threads = 1) {
  const std::size_t n0 = rule[0].size();
  std::vector<CompensatedSum> partial(n0);
  std::vector<double> skipped(n0, 0.0);
  std::vector<double> total(n0, 0.0);
  detail::parallel_for(n0, threads, [&](std::size_t i0) {
    CompensatedSum acc;
    Point4 y{};
    Index4 idx{i0, 0, 0, 0};
    y[0] = rule[0].nodes[i0];
    for (std::size_t i1 = 0; i1 < rule[1].size(); ++i1) {
      idx[1] = i1;
      y[1] = rule[1].nodes[i1];
      const double w01 = rule[0].weights[i0] * rule[1].weights[i1];
      for (std::size_t i2 = 0; i2 < rule[2].size(); ++i2) {
        idx[2] = i2;
        y[2] = rule[2].nodes[i2];
        const double w012 = w01 * rule[2].weights[i2];
        for (std::size_t i3 = 0; i3 < rule[3].size(); ++i3) {
          idx[3] = i3;
          y[3] = rule[3].nodes[i3];
          const double w = w012 * rule[3].weights[i3];
          total[i0] += std::abs(w);
          using R = std::invoke_result_t<Fn&, const Index4&, const Point4&>;
          if constexpr (std::is_same_v<R, NodeValue>) {
            const NodeValue v = fn(idx, y);
            if (!v) {
              skipped[i0] += std::abs(w);
              continue;
            }
            if (!is_finite(*v)) detail::throw_non_finite(y);
            acc.add(*v * Complex(w));
          } else {
            const CQuaternion v = fn(idx, y);
            if (!is_finite(v)) detail::throw_non_finite(y);
            acc.add(v * Complex(w));
          }
        }
      }
    }
    partial[i0] = acc;
  });
  TensorSum out;
  CompensatedSum acc;
  for (std::size_t i0 = 0; i0 < n0; ++i0) {
    acc.add(partial[i0]);
    out.skipped_weight += skipped[i0];
    out.total_weight += total[i0];
  }
  out.value = acc.value();
  out.nodes = n0 * rule[1].size() * rule[2].size() * rule[3].size();
  return out;
}

using Integrand4 = std::function<CQuaternion(const Point4&)>;

/// Tensor Gauss-Legendre of order spec.order per axis.
CQuaternion integrate_box4(const Integrand4& f, const Box4& box, const QuadratureSpec& spec);

/// One of the eight faces of a box. `sigma` is the quaternion the sigma^psi
/// form contributes on this face: +psi_k on the face x_k = b_k and -psi_k on
/// x_k = a_k, which is the orientation that makes the Stokes formula hold.
struct Face {
  std::size_t axis = 0;
  bool high = false;
  Quaternion sigma{};
};

std::array<Face, 8> faces(const StructuralSet& psi);

/// Sum over the eight faces of a 3-D tensor rule; `rules[k]` is used for the
/// in-face axis k (rules[face.axis] is ignored and the node is pinned to the
/// face). `fn(face, idx, y)` returns CQuaternion or NodeValue and must apply
/// face.sigma itself.
template <class Fn>
TensorSum boundary_sum(const Box4& box, const StructuralSet& psi, const TensorRule& rules, Fn&& fn,
                       int threads = 1) {
  TensorSum out;
  CompensatedSum acc;
  for (const Face& face : faces(psi)) {
    TensorRule r = rules;
    const double pinned = face.high ? box.b[face.axis] : box.a[face.axis];
    r[face.axis] = Rule1D{{pinned}, {1.0}};
    const TensorSum part =
        tensor_sum(r, [&](const Index4& idx, const Point4& y) { return fn(face, idx, y); }, threads);
    acc.add(part.value);
    out.skipped_weight += part.skipped_weight;
    out.total_weight += part.total_weight;
    out.nodes += part.nodes;
  }
  out.value = acc.value();
  return out;
}

enum class Side { left, right };

/// Integral over the boundary of sigma F (side = left) or F sigma (side = right),
/// tensor Gauss-Legendre of order spec.order on every face.
CQuaternion integrate_boundary(const Integrand4& f, const Box4& box, const StructuralSet& psi,
                               const QuadratureSpec& spec, Side side);

/// Integral of g sigma f over the boundary.
CQuaternion integrate_boundary_form(const Integrand4& g, const Integrand4& f, const Box4& box,
                                    const StructuralSet& psi, const QuadratureSpec& spec);

struct ExclusionResult {
  CQuaternion value{};
  double epsilon = 0.0;
  std::size_t nodes = 0;
};

/// Per-axis rules of the graded mesh used by integrate_excluding_ball: every
/// axis is graded toward center_k (symmetrically near it) down to panel width
/// ~epsilon, with spec.panel_order points per panel. `lower_exponents[k]`
/// requests an endpoint-singular first panel on axis k.
TensorRule exclusion_rules(const Box4& box, const Point4& center, double epsilon,
                           const QuadratureSpec& spec,
                           const std::array<std::optional<double>, 4>& lower_exponents = {});

/// Integral of F over the box minus the ball B(center, epsilon): nodes inside the
/// ball are dropped. A center outside the closed box falls back to integrate_box4.
ExclusionResult integrate_excluding_ball(const Integrand4& f, const Box4& box, const Point4& center,
                                         double epsilon, const QuadratureSpec& spec);

inline double distance(const Point4& x, const Point4& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

}  // namespace quatfrac
