#include "quatfrac/frac_fueter.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "quatfrac/error.hpp"
#include "quatfrac/gamma.hpp"

namespace quatfrac {

namespace {

void require_above_base(const Box4& box, const Point4& x, const char* what) {
  for (std::size_t k = 0; k < 4; ++k)
    if (!(x[k] > box.a[k]))
      throw Error(ErrorKind::DomainError, std::string(what) + ": every x_k must exceed a_k");
}

void require_first_order(const AlphaVec& alpha, const char* what) {
  if (alpha.n != 1) throw Error(ErrorKind::InvalidOrder, std::string(what) + ": needs 0 < Re alpha < 1");
}

int derivatives_needed(Complex s) { return s.real() < 0.0 ? static_cast<int>(std::floor(-s.real())) + 1 : 0; }

// I^s h for Re s > 0, D^(-s) h for Re s < 0.
CQuaternion rl_apply(const Field1D& h, double a, Complex s, double x, const QuadratureSpec& spec) {
  if (s.real() > 0.0) return rl_integral(h, a, s, x, spec);
  if (s == Complex(0.0)) return h(x);
  const Complex order = -s;
  return rl_derivative_n(h, a, order, x, static_cast<int>(std::floor(order.real())) + 1, spec);
}

Point4 on_axis(Point4 q, int j, double t) {
  q[static_cast<std::size_t>(j)] = t;
  return q;
}

// The j-th script_I term as a function of x_j, singular like (t - a_j)^gamma_j,
// with as many exact derivatives as requested.
Field1D script_I_term_1d(const QField& F, const Box4& box, const Point4& q, int j, Complex gamma, int derivs,
                         const QuadratureSpec& spec) {
  Field1D phi;
  const double a = box.a[static_cast<std::size_t>(j)];
  phi.evaluate = [=](double t) {
    if (t <= a) return CQuaternion{};
    return script_I_term(F, box, q, j, gamma, t, 0, spec);
  };
  for (int m = 1; m <= derivs; ++m)
    phi.derivatives.push_back([=](double t) { return script_I_term(F, box, q, j, gamma, t, m, spec); });
  phi.singular_exponent = gamma.real();
  return phi;
}

Field1D constant_1d(const CQuaternion& c) {
  Field1D h;
  h.evaluate = [c](double) { return c; };
  h.derivatives.push_back([](double) { return CQuaternion{}; });
  return h;
}

// D^alpha h at x from five-point differences of I^(1-alpha) h; h may be
// singular like (t - a)^nu at a (declared through h.singular_exponent).
CQuaternion rl_derivative_by_difference(const Field1D& h, double a, Complex alpha, double x,
                                        const QuadratureSpec& spec) {
  const double step = 1e-2 * (x - a);
  const Complex s = 1.0 - alpha;
  auto I = [&](double t) { return rl_integral(h, a, s, t, spec); };
  return (I(x - 2.0 * step) - I(x + 2.0 * step) + (I(x + step) - I(x - step)) * Complex(8.0)) /
         Complex(12.0 * step);
}

}  // namespace

// ------------------------------------------------------------------ integrals

CQuaternion script_I_term(const QField& F, const Box4& box, const Point4& q, int j, Complex gamma_j, double x_j,
                          int m, const QuadratureSpec& spec) {
  if (j < 0 || j > 3) throw Error(ErrorKind::DomainError, "script_I_term: axis out of range");
  const Complex s = gamma_j - static_cast<double>(m);
  const Field1D h = axis_slice(F, q, j, derivatives_needed(s), spec.fd_step);
  return rl_apply(h, box.a[static_cast<std::size_t>(j)], s, x_j, spec);
}

CQuaternion script_I(const QField& F, const Box4& box, const Point4& q, const Point4& x, const AlphaVec& alpha,
                     const QuadratureSpec& spec) {
  require_above_base(box, x, "script_I");
  CQuaternion s{};
  for (int j = 0; j < 4; ++j) s += script_I_term(F, box, q, j, alpha[static_cast<std::size_t>(j)], x[j], 0, spec);
  return s;
}

QField script_I_field(const QField& F, const Box4& box, const Point4& q, const AlphaVec& alpha,
                      const QuadratureSpec& spec) {
  QField out;
  out.id = "scriptI[" + F.id + "]";
  out.domain = box;
  // On the lower faces the own term vanishes (Re alpha > 0), which extends
  // the field continuously to the closed box.
  out.value = [=](const Point4& x) {
    CQuaternion s{};
    for (int j = 0; j < 4; ++j)
      if (x[j] > box.a[j]) s += script_I_term(F, box, q, j, alpha[static_cast<std::size_t>(j)], x[j], 0, spec);
    return s;
  };
  out.deriv = [=](const Point4& x, std::span<const int> axes) {
    const int k = axes.front();
    for (int ax : axes)
      if (ax != k) return CQuaternion{};
    return script_I_term(F, box, q, k, alpha[static_cast<std::size_t>(k)], x[k], static_cast<int>(axes.size()),
                         spec);
  };
  return out;
}

CQuaternion frak_I(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q, const Point4& x,
                   const AlphaVec& alpha, const QuadratureSpec& spec) {
  require_above_base(box, x, "frak_I");
  CQuaternion s{};
  for (int j = 0; j < 4; ++j) {
    const Quaternion pj = psi[static_cast<std::size_t>(j)];
    Field1D h;
    h.evaluate = [&, j, pj](double t) {
      const CQuaternion v = F(on_axis(q, j, t));
      return (conj(pj) * v + conj(v) * pj) / Complex(2.0);
    };
    s += rl_integral(h, box.a[static_cast<std::size_t>(j)], alpha[static_cast<std::size_t>(j)], x[j], spec);
  }
  return s;
}

CQuaternion frak_I_components(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                              const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec) {
  require_above_base(box, x, "frak_I");
  CQuaternion s{};
  for (int j = 0; j < 4; ++j) {
    const CQuaternion pj(psi[static_cast<std::size_t>(j)]);
    Field1D h;
    h.evaluate = [&, j, pj](double t) { return CQuaternion(scalar_product(pj, F(on_axis(q, j, t)))); };
    s += rl_integral(h, box.a[static_cast<std::size_t>(j)], alpha[static_cast<std::size_t>(j)], x[j], spec);
  }
  return s;
}

// ------------------------------------------------------------------ operators

CQuaternion frac_fueter_left(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                             const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec) {
  require_first_order(alpha, "frac_fueter_left");
  require_above_base(box, x, "frac_fueter_left");
  CQuaternion s{};
  for (int j = 0; j < 4; ++j)
    s += psi[static_cast<std::size_t>(j)] *
         partial_rl_derivative(F, box, j, alpha[static_cast<std::size_t>(j)], q, x[j], spec);
  return s;
}

CQuaternion frac_fueter_right(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                              const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec) {
  require_first_order(alpha, "frac_fueter_right");
  require_above_base(box, x, "frac_fueter_right");
  CQuaternion s{};
  for (int j = 0; j < 4; ++j)
    s += partial_rl_derivative(F, box, j, alpha[static_cast<std::size_t>(j)], q, x[j], spec) *
         psi[static_cast<std::size_t>(j)];
  return s;
}

CQuaternion frac_fueter_diag(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                             const AlphaVec& alpha, const QuadratureSpec& spec) {
  return frac_fueter_left(F, box, psi, q, q, alpha, spec);
}

CQuaternion fueter_of_script_I(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                               const Point4& x, const AlphaVec& alpha, Side side, const QuadratureSpec& spec) {
  require_above_base(box, x, "fueter_of_script_I");
  CQuaternion s{};
  for (int j = 0; j < 4; ++j) {
    const CQuaternion d = script_I_term(F, box, q, j, alpha[static_cast<std::size_t>(j)], x[j], 1, spec);
    s += side == Side::left ? psi[static_cast<std::size_t>(j)] * d : d * psi[static_cast<std::size_t>(j)];
  }
  return s;
}

RoundTrip roundtrip_frakI(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                          const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec) {
  require_first_order(alpha, "roundtrip_frakI");
  require_above_base(box, x, "roundtrip_frakI");
  // Terms of frak_I: phi_j(t) = I^{alpha_j}[f_j](slice j)(t), f_j = <F, psi_j>.
  std::array<Field1D, 4> comp;
  std::array<Field1D, 4> phi;
  std::array<CQuaternion, 4> phi_at_x;
  for (int j = 0; j < 4; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const CQuaternion pj(psi[uj]);
    comp[uj].evaluate = [&, j, pj](double t) { return CQuaternion(scalar_product(pj, F(on_axis(q, j, t)))); };
    comp[uj].derivatives.push_back([&, j, pj](double t) {
      return CQuaternion(scalar_product(pj, F.partial(on_axis(q, j, t), j, spec.fd_step)));
    });
    const double a = box.a[uj];
    const Complex al = alpha[uj];
    const Field1D& c = comp[uj];
    phi[uj].evaluate = [&c, a, al, spec](double t) {
      return t <= a ? CQuaternion{} : rl_integral(c, a, al, t, spec);
    };
    // d/dt I^alpha c = D^(1-alpha) c.
    phi[uj].derivatives.push_back([&c, a, al, spec](double t) { return rl_derivative(c, a, 1.0 - al, t, spec); });
    phi[uj].singular_exponent = al.real();
    phi_at_x[uj] = phi[uj](x[j]);
  }
  RoundTrip r;
  for (int k = 0; k < 4; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double a = box.a[uk];
    const CQuaternion own = rl_derivative_n(phi[uk], a, alpha[uk], x[k], 1, spec);
    CQuaternion others{};
    for (std::size_t j = 0; j < 4; ++j)
      if (j != uk) others += phi_at_x[j];
    const CQuaternion constant_part = rl_derivative_n(constant_1d(others), a, alpha[uk], x[k], 1, spec);
    r.matched += psi[uk] * own;
    r.full += psi[uk] * (own + constant_part);
    r.constants += psi[uk] * (others * power_over_gamma(x[k] - a, -alpha[uk]));
    r.target += psi[uk] * comp[uk](x[k]);
  }
  return r;
}

LaplacianCheck frac_laplacian_check(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                                    const Point4& x, const AlphaVec& alpha, const AlphaVec& beta,
                                    const QuadratureSpec& spec) {
  require_first_order(alpha, "frac_laplacian_check");
  require_first_order(beta, "frac_laplacian_check");
  require_above_base(box, x, "frac_laplacian_check");
  LaplacianCheck out;
  // Constants c_k = (D^{beta_k} F)(slice k)(q_k): the inner operator seen
  // along an axis j != k.
  std::array<CQuaternion, 4> c{};
  for (int k = 0; k < 4; ++k)
    c[static_cast<std::size_t>(k)] = partial_rl_derivative(F, box, k, beta[static_cast<std::size_t>(k)], q, q[k], spec);
  for (int j = 0; j < 4; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double a = box.a[uj];
    Field1D inner;
    inner.evaluate = [&, j](double t) { return partial_rl_derivative(F, box, j, beta[static_cast<std::size_t>(j)], q, t, spec); };
    inner.singular_exponent = -beta[uj].real();
    const CQuaternion diag = rl_derivative_by_difference(inner, a, alpha[uj], x[j], spec);
    CQuaternion others{};
    for (std::size_t k = 0; k < 4; ++k)
      if (k != uj) others += psi[k] * c[k];
    const CQuaternion cross = rl_derivative_n(constant_1d(others), a, alpha[uj], x[j], 1, spec);
    const Complex order = alpha[uj] + beta[uj];
    CQuaternion sum_order;
    if (order.imag() == 0.0 && order.real() == std::floor(order.real())) {
      // Integer order: the classical derivative.
      const std::vector<int> axes(static_cast<std::size_t>(order.real()), j);
      sum_order = F.partial(on_axis(q, j, x[j]), axes, spec.fd_step);
    } else {
      sum_order = partial_rl_derivative(F, box, j, order, q, x[j], spec);
    }
    const Quaternion pj = psi[uj];
    const Quaternion pj2 = pj * pj;
    out.conj_diagonal += (conj(pj) * pj) * diag;
    out.psi_diagonal += pj2 * diag;
    out.conj_composition += conj(pj) * (pj * diag + cross);
    out.psi_composition += pj * (pj * diag + cross);
    out.target += sum_order;
    out.psi_target += pj2 * sum_order;
  }
  out.cross_magnitude = max_abs(out.conj_composition - out.conj_diagonal);
  return out;
}

// ------------------------------------------------------------------ kernel

FracKernelRules FracKernelRules::make(const AlphaVec& alpha, int points) {
  FracKernelRules r;
  r.points = points;
  r.alpha = alpha;
  r.legendre = gauss_legendre(points, 0.0, 1.0);
  for (std::size_t i = 0; i < 4; ++i) r.jacobi[i] = gauss_jacobi(points, -alpha[i].real(), 0.0, 1.0);
  return r;
}

int frac_kernel_points(const QuadratureSpec& spec) { return std::max(6, spec.order / 3); }

std::optional<CQuaternion> frac_kernel_eval(const StructuralSet& psi, const Box4& box, const Point4& y,
                                            const Point4& x, const FracKernelRules& rules, double clearance) {
  // Clearance first, so nothing is evaluated for a rejected node.
  for (std::size_t i = 0; i < 4; ++i) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != i) d2 += (y[k] - x[k]) * (y[k] - x[k]);
    const double c = std::clamp(y[i], box.a[i], x[i]);
    d2 += (y[i] - c) * (y[i] - c);
    if (d2 < clearance * clearance) return std::nullopt;
  }
  CQuaternion total{};
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex al = rules.alpha[i];
    const double a = box.a[i];
    const double xi = x[i];
    Point4 u{y[0] - x[0], y[1] - x[1], y[2] - x[2], y[3] - x[3]};
    double d2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != i) d2 += u[k] * u[k];
    const double c = std::clamp(y[i], a, xi);
    const double dist = std::sqrt(d2 + (y[i] - c) * (y[i] - c));
    // Boundary term k(a) (x-a)^(-alpha) / Gamma(1-alpha).
    u[i] = y[i] - a;
    CQuaternion sum = power_over_gamma(xi - a, -al) * cauchy_kernel_at(psi, u);
    // (1/Gamma(1-alpha)) int_a^x (x-t)^(-alpha) k'(t) dt, k'(t) = -dK/du_i.
    const std::vector<double> bp = graded_breakpoints(a, xi, c, 0.3, 0.5 * dist);
    const bool complex_order = al.imag() != 0.0;
    CQuaternion integral{};
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
      const double lo = bp[p];
      const double hi = bp[p + 1];
      const double h = hi - lo;
      if (p + 2 == bp.size()) {
        const Rule1D& ref = rules.jacobi[i];
        const double scale = std::pow(h, 1.0 - al.real());
        for (std::size_t n = 0; n < ref.size(); ++n) {
          const double t = lo + h * ref.nodes[n];
          u[i] = y[i] - t;
          Complex w(ref.weights[n] * scale);
          if (complex_order) w *= std::exp(Complex(0.0, -al.imag()) * std::log(xi - t));
          integral -= w * cauchy_kernel_partial(psi, u, static_cast<int>(i));
        }
      } else {
        const Rule1D& ref = rules.legendre;
        for (std::size_t n = 0; n < ref.size(); ++n) {
          const double t = lo + h * ref.nodes[n];
          u[i] = y[i] - t;
          const Complex w = ref.weights[n] * h * std::exp(-al * std::log(xi - t));
          integral -= w * cauchy_kernel_partial(psi, u, static_cast<int>(i));
        }
      }
    }
    sum += rgamma(1.0 - al) * integral;
    total += sum;
  }
  return total;
}

std::optional<CQuaternion> frac_kernel_if_clear(const StructuralSet& psi, const Box4& box, const Point4& y,
                                                const Point4& x, const AlphaVec& alpha, double clearance,
                                                const QuadratureSpec& spec) {
  require_first_order(alpha, "frac_kernel");
  require_above_base(box, x, "frac_kernel");
  return frac_kernel_eval(psi, box, y, x, FracKernelRules::make(alpha, frac_kernel_points(spec)), clearance);
}

CQuaternion frac_kernel(const StructuralSet& psi, const Box4& box, const Point4& y, const Point4& x,
                        const AlphaVec& alpha, const QuadratureSpec& spec) {
  const auto v = frac_kernel_if_clear(psi, box, y, x, alpha, spec.exclusion_for(box), spec);
  if (!v)
    throw Error(ErrorKind::SegmentHitsSingularity,
                "frac_kernel: y is within the exclusion radius of a derivative segment");
  return *v;
}

// ------------------------------------------------------------------ correction term

std::string to_string(GammaConvention c) {
  return c == GammaConvention::gamma_alpha ? "gamma_alpha" : "gamma_one_minus_alpha";
}

CQuaternion correction_N(const QField& F, const Box4& box, const Point4& q, const Point4& x,
                         const AlphaVec& alpha, GammaConvention convention, const QuadratureSpec& spec) {
  require_above_base(box, x, "correction_N");
  std::array<CQuaternion, 4> terms{};
  for (int j = 0; j < 4; ++j)
    terms[static_cast<std::size_t>(j)] = script_I_term(F, box, q, j, alpha[static_cast<std::size_t>(j)], x[j], 0, spec);
  CQuaternion s{};
  for (std::size_t i = 0; i < 4; ++i) {
    const Complex al = alpha[i];
    const Complex g = convention == GammaConvention::gamma_alpha ? rgamma(al) : rgamma(1.0 - al);
    const Complex factor = g * std::exp(-al * std::log(x[i] - box.a[i]));
    CQuaternion others{};
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) others += terms[j];
    s += others * factor;
  }
  return s;
}

CQuaternion sum_frac_deriv_of_script_I(const QField& F, const Box4& box, const Point4& q, const Point4& x,
                                       const AlphaVec& alpha, const QuadratureSpec& spec) {
  require_first_order(alpha, "sum_frac_deriv_of_script_I");
  require_above_base(box, x, "sum_frac_deriv_of_script_I");
  std::array<CQuaternion, 4> at_x{};
  for (int j = 0; j < 4; ++j)
    at_x[static_cast<std::size_t>(j)] = script_I_term(F, box, q, j, alpha[static_cast<std::size_t>(j)], x[j], 0, spec);
  CQuaternion s{};
  for (int i = 0; i < 4; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Field1D own = script_I_term_1d(F, box, q, i, alpha[ui], 1, spec);
    s += rl_derivative_n(own, box.a[ui], alpha[ui], x[i], 1, spec);
    CQuaternion others{};
    for (std::size_t j = 0; j < 4; ++j)
      if (j != ui) others += at_x[j];
    s += rl_derivative_n(constant_1d(others), box.a[ui], alpha[ui], x[i], 1, spec);
  }
  return s;
}

double DerivativeDecomposition::residual(GammaConvention c) const {
  const CQuaternion n = c == GammaConvention::gamma_alpha ? n_gamma_alpha : n_one_minus;
  return max_abs(direct - slices - n);
}

GammaConvention DerivativeDecomposition::winner() const {
  return residual(GammaConvention::gamma_one_minus_alpha) <= residual(GammaConvention::gamma_alpha)
             ? GammaConvention::gamma_one_minus_alpha
             : GammaConvention::gamma_alpha;
}

DerivativeDecomposition decompose_sum_frac_deriv(const QField& F, const Box4& box, const Point4& q, const Point4& x,
                                                 const AlphaVec& alpha, const QuadratureSpec& spec) {
  DerivativeDecomposition d;
  d.direct = sum_frac_deriv_of_script_I(F, box, q, x, alpha, spec);
  for (int i = 0; i < 4; ++i) d.slices += F(on_axis(q, i, x[i]));
  d.n_gamma_alpha = correction_N(F, box, q, x, alpha, GammaConvention::gamma_alpha, spec);
  d.n_one_minus = correction_N(F, box, q, x, alpha, GammaConvention::gamma_one_minus_alpha, spec);
  return d;
}

}  // namespace quatfrac
