#include "quatfrac/separable.hpp"

#include <cmath>

#include "quatfrac/error.hpp"

namespace quatfrac {

namespace {

Rule1D term_rule(double lo, double hi, double nu, int order) {
  return nu == 0.0 ? gauss_legendre(order, lo, hi) : endpoint_singular_rule(order, nu, lo, hi);
}

Rule1D bp_axis_rule(const Box4& box, std::size_t l, const Point4& x, double eps, const QuadratureSpec& spec,
                    double nu) {
  AxisPlan plan;
  if (nu != 0.0) plan.lower_exponent = nu;
  if (box.in_closure(x) && x[l] >= box.a[l] && x[l] <= box.b[l]) {
    plan.attractor = x[l];
    return axis_rule(box.a[l], box.b[l], plan, spec.panel_order, spec.grading_ratio, eps * spec.grading_ratio);
  }
  return axis_rule(box.a[l], box.b[l], plan, spec.order, spec.grading_ratio, eps * spec.grading_ratio);
}

struct SweepTotals {
  double skipped = 0.0;
  double total = 0.0;
  std::size_t nodes = 0;
};

// Sum of weight * kernel over the three axes other than `axis`, for every node of `axis`.
Marginal sweep(const TensorRule& r, std::size_t axis, const KernelFn& kernel, const Point4& x, double eps,
               bool exclude_ball, int threads, SweepTotals& totals) {
  std::array<std::size_t, 3> other{};
  for (std::size_t k = 0, n = 0; k < 4; ++k)
    if (k != axis) other[n++] = k;
  const std::size_t n = r[axis].size();
  std::vector<CompensatedSum> acc(n);
  std::vector<double> skipped(n, 0.0), total(n, 0.0);
  detail::parallel_for(n, threads, [&](std::size_t i) {
    Point4 y{};
    y[axis] = r[axis].nodes[i];
    const double wi = r[axis].weights[i];
    const Rule1D& r0 = r[other[0]];
    const Rule1D& r1 = r[other[1]];
    const Rule1D& r2 = r[other[2]];
    for (std::size_t i0 = 0; i0 < r0.size(); ++i0) {
      y[other[0]] = r0.nodes[i0];
      for (std::size_t i1 = 0; i1 < r1.size(); ++i1) {
        y[other[1]] = r1.nodes[i1];
        const double w01 = wi * r0.weights[i0] * r1.weights[i1];
        for (std::size_t i2 = 0; i2 < r2.size(); ++i2) {
          y[other[2]] = r2.nodes[i2];
          const double w = w01 * r2.weights[i2];
          total[i] += std::abs(w);
          if (exclude_ball && distance(y, x) < eps) {
            skipped[i] += std::abs(w);
            continue;
          }
          const std::optional<CQuaternion> v = kernel(y);
          if (!v) {
            skipped[i] += std::abs(w);
            continue;
          }
          if (!is_finite(*v)) detail::throw_non_finite(y);
          acc[i].add(*v * Complex(w));
        }
      }
    }
  });
  Marginal m;
  m.axis = axis;
  m.rule = r[axis];
  m.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.w[i] = acc[i].value();
    totals.skipped += skipped[i];
    totals.total += total[i];
  }
  totals.nodes += n * r[other[0]].size() * r[other[1]].size() * r[other[2]].size();
  return m;
}

}  // namespace

CQuaternion separable_product_integral(const SeparableField& s1, const Quaternion& mid, const SeparableField& s2,
                                       const Box4& box, int pinned, double at, int order) {
  std::array<double, 4> len{};
  for (std::size_t l = 0; l < 4; ++l) len[l] = static_cast<int>(l) == pinned ? 1.0 : box.length(l);
  // Integral of one term (or the product of two terms) along its axis.
  auto single = [&](std::size_t l, const std::function<CQuaternion(double)>& fn, double nu) {
    if (static_cast<int>(l) == pinned) return fn(at);
    const Rule1D r = term_rule(box.a[l], box.b[l], nu, order);
    CompensatedSum s;
    for (std::size_t i = 0; i < r.size(); ++i) s.add(fn(r.nodes[i]) * Complex(r.weights[i]));
    return s.value();
  };
  std::array<CQuaternion, 4> i1{}, i2{};
  for (std::size_t l = 0; l < 4; ++l) {
    i1[l] = single(l, s1[l].fn, s1[l].nu);
    i2[l] = single(l, s2[l].fn, s2[l].nu);
  }
  CompensatedSum out;
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t k = 0; k < 4; ++k) {
      double rest = 1.0;
      for (std::size_t l = 0; l < 4; ++l)
        if (l != j && l != k) rest *= len[l];
      if (j != k) {
        out.add((i1[j] * mid * i2[k]) * Complex(rest));
      } else {
        const auto& f1 = s1[j].fn;
        const auto& f2 = s2[j].fn;
        const CQuaternion both = single(
            j, [&](double t) { return f1(t) * mid * f2(t); }, s1[j].nu + s2[j].nu);
        out.add(both * Complex(rest));
      }
    }
  }
  return out.value();
}

KernelMarginals kernel_marginals(const Box4& box, const StructuralSet& psi, const Point4& x, double epsilon,
                                 const QuadratureSpec& spec, const std::array<double, 4>& boundary_nu,
                                 const std::array<double, 4>& volume_nu, const KernelFn& kernel, bool exclude_ball) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::DomainError, "kernel_marginals: radius must be positive");
  KernelMarginals m;
  SweepTotals vol, face;
  for (std::size_t j = 0; j < 4; ++j) {
    TensorRule r;
    for (std::size_t l = 0; l < 4; ++l) r[l] = bp_axis_rule(box, l, x, epsilon, spec, l == j ? volume_nu[j] : 0.0);
    m.volume[j] = sweep(r, j, kernel, x, epsilon, exclude_ball, spec.threads, vol);
  }
  const auto fs = faces(psi);
  for (std::size_t f = 0; f < 8; ++f) {
    const std::size_t ax = fs[f].axis;
    m.sigma[f] = fs[f].sigma;
    m.face_axis[f] = ax;
    const double pinned = fs[f].high ? box.b[ax] : box.a[ax];
    for (std::size_t j = 0; j < 4; ++j) {
      TensorRule r;
      for (std::size_t l = 0; l < 4; ++l)
        r[l] = bp_axis_rule(box, l, x, epsilon, spec, (l == j && j != ax) ? boundary_nu[j] : 0.0);
      r[ax] = Rule1D{{pinned}, {1.0}};
      m.face[f][j] = sweep(r, j, kernel, x, epsilon, false, spec.threads, face);
    }
  }
  m.volume_skipped = vol.skipped;
  m.volume_total = vol.total;
  m.face_skipped = face.skipped;
  m.face_total = face.total;
  m.nodes = vol.nodes + face.nodes;
  return m;
}

CQuaternion marginal_boundary(const KernelMarginals& m, const SeparableField& s, Side side) {
  CompensatedSum out;
  for (std::size_t f = 0; f < 8; ++f) {
    const Quaternion sg = m.sigma[f];
    for (std::size_t j = 0; j < 4; ++j) {
      const Marginal& mg = m.face[f][j];
      for (std::size_t i = 0; i < mg.w.size(); ++i) {
        const CQuaternion v = s[j].fn(mg.rule.nodes[i]);
        out.add(side == Side::left ? (mg.w[i] * sg) * v : v * (sg * mg.w[i]));
      }
    }
  }
  return out.value();
}

CQuaternion marginal_volume(const KernelMarginals& m, const SeparableField& s, Side side) {
  CompensatedSum out;
  for (std::size_t j = 0; j < 4; ++j) {
    const Marginal& mg = m.volume[j];
    for (std::size_t i = 0; i < mg.w.size(); ++i) {
      const CQuaternion v = s[j].fn(mg.rule.nodes[i]);
      out.add(side == Side::left ? mg.w[i] * v : v * mg.w[i]);
    }
  }
  return out.value();
}

}  // namespace quatfrac
