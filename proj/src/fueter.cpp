#include "quatfrac/fueter.hpp"

#include <cmath>
#include <numbers>

#include "quatfrac/error.hpp"

namespace quatfrac {

namespace {

constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;

void require_in_domain(const QField& F, const Point4& x) {
  if (!F.domain.in_closure(x)) throw Error(ErrorKind::OutsideDomain, "point outside the domain of field " + F.id);
}

void require_interior(const Box4& box, const Point4& x, const char* what) {
  if (!box.contains(x)) throw Error(ErrorKind::OutsideDomain, std::string(what) + ": point must be interior");
}

double norm2(const Point4& u) { return u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]; }

Point4 minus(const Point4& a, const Point4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

bool is_zero_field(const QField& f) { return !f.value; }

}  // namespace

bool Residual::strictly_decreasing() const {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (!(trace[i].residual < trace[i - 1].residual)) return false;
  return !trace.empty();
}

void Residual::record(const RefinementStep& step, const CQuaternion& l, const CQuaternion& r) {
  trace.push_back(step);
  value = step.residual;
  skipped_fraction = step.skipped_fraction;
  lhs = l;
  rhs = r;
}

CQuaternion psi_fueter_left(const QField& F, const StructuralSet& psi, const Point4& x, double fd_step) {
  require_in_domain(F, x);
  CQuaternion s{};
  for (int k = 0; k < 4; ++k) s += psi[k] * F.partial(x, k, fd_step);
  return s;
}

CQuaternion psi_fueter_right(const QField& F, const StructuralSet& psi, const Point4& x, double fd_step) {
  require_in_domain(F, x);
  CQuaternion s{};
  for (int k = 0; k < 4; ++k) s += F.partial(x, k, fd_step) * psi[k];
  return s;
}

Quaternion cauchy_kernel_at(const StructuralSet& psi, const Point4& u) {
  const double r2 = norm2(u);
  if (!(r2 >= 1e-28)) throw Error(ErrorKind::SingularPoint, "Cauchy kernel evaluated at its singularity");
  const Quaternion up = from_coords(u, psi);
  return conj(up) / (kTwoPiSq * r2 * r2);
}

Quaternion cauchy_kernel(const StructuralSet& psi, const Point4& tau, const Point4& x) {
  return cauchy_kernel_at(psi, minus(tau, x));
}

Quaternion cauchy_kernel_partial(const StructuralSet& psi, const Point4& u, int i) {
  const double r2 = norm2(u);
  if (!(r2 >= 1e-28)) throw Error(ErrorKind::SingularPoint, "Cauchy kernel evaluated at its singularity");
  const Quaternion up = from_coords(u, psi);
  return (conj(psi[i]) / (r2 * r2) - conj(up) * (4.0 * u[i] / (r2 * r2 * r2))) / kTwoPiSq;
}

CQuaternion teodorescu_kernel_yx(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                                 const QuadratureSpec& spec) {
  require_interior(box, x, "teodorescu");
  const double eps = spec.exclusion_for(box);
  const TensorRule rule = exclusion_rules(box, x, eps, spec);
  return tensor_sum(
             rule,
             [&](const Index4&, const Point4& y) -> CQuaternion {
               if (distance(y, x) < eps) return CQuaternion{};
               return cauchy_kernel(psi, y, x) * F(y);
             },
             spec.threads)
      .value;
}

CQuaternion teodorescu(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                       const QuadratureSpec& spec) {
  return -teodorescu_kernel_yx(F, box, psi, x, spec);
}

CQuaternion fueter_of_teodorescu(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                                 const QuadratureSpec& spec) {
  require_interior(box, x, "teodorescu");
  const double eps = spec.exclusion_for(box);
  const TensorRule rule = exclusion_rules(box, x, eps, spec);
  const CQuaternion volume = tensor_sum(
                                 rule,
                                 [&](const Index4&, const Point4& y) -> CQuaternion {
                                   if (distance(y, x) < eps) return CQuaternion{};
                                   const Point4 u = minus(x, y);
                                   const Quaternion K = cauchy_kernel_at(psi, u);
                                   CQuaternion s{};
                                   for (int k = 0; k < 4; ++k) s += (psi[k] * K) * F.partial(y, k, spec.fd_step);
                                   return s;
                                 },
                                 spec.threads)
                                 .value;
  const CQuaternion boundary =
      boundary_sum(
          box, psi, legendre_tensor(box, spec.order),
          [&](const Face& face, const Index4&, const Point4& y) {
            return (face.sigma * cauchy_kernel_at(psi, minus(x, y))) * F(y);
          },
          spec.threads)
          .value;
  return volume - boundary;
}

Residual verify_teodorescu(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                           const QuadratureSpec& spec) {
  Residual res;
  res.spec = spec;
  const CQuaternion target = F(x);
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(box, level);
    const CQuaternion lhs = fueter_of_teodorescu(F, box, psi, x, s);
    res.record({level, s.exclusion_radius, s.order, max_abs(lhs - target), 0.0}, lhs, target);
  }
  return res;
}

Residual verify_stokes_classical(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                                 const QuadratureSpec& spec) {
  Residual res;
  res.spec = spec;
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(box, level);
    const CQuaternion lhs =
        boundary_sum(
            box, psi, legendre_tensor(box, s.order),
            [&](const Face& face, const Index4&, const Point4& y) { return g(y) * face.sigma * f(y); }, s.threads)
            .value;
    const CQuaternion rhs = integrate_box4(
        [&](const Point4& y) {
          return g(y) * psi_fueter_left(f, psi, y, s.fd_step) + psi_fueter_right(g, psi, y, s.fd_step) * f(y);
        },
        box, s);
    res.record({level, 0.0, s.order, max_abs(lhs - rhs), 0.0}, lhs, rhs);
  }
  return res;
}

BorelPompeiuTerms borel_pompeiu_terms(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                                      const Point4& x, const QuadratureSpec& s) {
  const bool has_f = !is_zero_field(f);
  const bool has_g = !is_zero_field(g);
  BorelPompeiuTerms t;
  t.boundary = boundary_sum(
                   box, psi, legendre_tensor(box, s.order),
                   [&](const Face& face, const Index4&, const Point4& y) {
                     const Quaternion K = cauchy_kernel(psi, y, x);
                     CQuaternion v{};
                     if (has_f) v += (K * face.sigma) * f(y);
                     if (has_g) v += g(y) * (face.sigma * K);
                     return v;
                   },
                   s.threads)
                   .value;
  auto integrand = [&](const Point4& y) {
    const Quaternion K = cauchy_kernel(psi, y, x);
    CQuaternion v{};
    if (has_f) v += K * psi_fueter_left(f, psi, y, s.fd_step);
    if (has_g) v += psi_fueter_right(g, psi, y, s.fd_step) * K;
    return v;
  };
  if (box.in_closure(x)) {
    const double eps = s.exclusion_for(box);
    const TensorRule rule = exclusion_rules(box, x, eps, s);
    t.volume = tensor_sum(
                   rule,
                   [&](const Index4&, const Point4& y) -> CQuaternion {
                     if (distance(y, x) < eps) return CQuaternion{};
                     return integrand(y);
                   },
                   s.threads)
                   .value;
  } else {
    t.volume = integrate_box4(integrand, box, s);
  }
  return t;
}

Residual verify_borel_pompeiu_classical(const QField& f, const QField& g, const Box4& box,
                                        const StructuralSet& psi, const Point4& x, const QuadratureSpec& spec) {
  if (box.distance_to_boundary(x) < spec.exclusion_for(box))
    throw Error(ErrorKind::OnBoundary, "Borel-Pompeiu: point within the exclusion radius of the boundary");
  Residual res;
  res.spec = spec;
  CQuaternion target{};
  if (box.contains(x)) {
    if (!is_zero_field(f)) target += f(x);
    if (!is_zero_field(g)) target += g(x);
  }
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(box, level);
    const BorelPompeiuTerms t = borel_pompeiu_terms(f, g, box, psi, x, s);
    const CQuaternion lhs = t.boundary - t.volume;
    res.record({level, s.exclusion_radius, s.order, max_abs(lhs - target), 0.0}, lhs, target);
  }
  return res;
}

}  // namespace quatfrac
