#pragma once

// Left-endpoint Riemann-Liouville integrals and derivatives of
// quaternion-valued functions of one variable, and their per-axis versions
// on 4-D fields.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "quatfrac/field.hpp"
#include "quatfrac/quadrature.hpp"
#include "quatfrac/quaternion.hpp"

namespace quatfrac {

/// Complex order vector with a common n = floor(Re alpha_l) + 1.
struct AlphaVec {
  std::array<Complex, 4> a{};
  int n = 1;

  /// Throws InvalidOrder unless n-1 < Re a_l < n for one n shared by all l.
  static AlphaVec make(const std::array<Complex, 4>& a);
  static AlphaVec uniform(Complex v) { return make({v, v, v, v}); }
  static AlphaVec real(double a0, double a1, double a2, double a3) { return make({a0, a1, a2, a3}); }

  const Complex& operator[](std::size_t l) const { return a[l]; }
  /// (m 1 - alpha) componentwise; validated as a new order vector.
  [[nodiscard]] AlphaVec complement(int m) const;
};

/// A function of one real variable with optional analytic derivatives
/// (derivatives[m-1] is the m-th). `singular_exponent` nu declares
/// f(t) = (t - a)^nu g(t) with g smooth; quadrature then uses the matching
/// Jacobi weight and f^(m) is taken to behave like (t - a)^(nu - m).
struct Field1D {
  std::function<CQuaternion(double)> evaluate;
  std::vector<std::function<CQuaternion(double)>> derivatives;
  double singular_exponent = 0.0;

  CQuaternion operator()(double t) const { return evaluate(t); }
};

/// (1/Gamma(alpha)) int_a^x f(t) (x - t)^(alpha - 1) dt.
/// Throws DomainError if x <= a, InvalidOrder if Re alpha <= 0.
CQuaternion rl_integral(const Field1D& f, double a, Complex alpha, double x, const QuadratureSpec& spec = {});

/// n = 1 derivative d/dx I^(1-alpha) f in the stabilized form
/// f(a)(x-a)^(-alpha)/Gamma(1-alpha) + I^(1-alpha) f'. Uses a central
/// difference for f' when no analytic derivative is supplied.
CQuaternion rl_derivative(const Field1D& f, double a, Complex alpha, double x, const QuadratureSpec& spec = {});

/// n-1 < Re alpha < n:
/// sum_{m<n} f^(m)(a) (x-a)^(m-alpha)/Gamma(m+1-alpha) + I^(n-alpha) f^(n).
/// Throws MissingDerivative when fewer than n derivatives are supplied.
CQuaternion rl_derivative_n(const Field1D& f, double a, Complex alpha, double x, int n,
                            const QuadratureSpec& spec = {});

/// The axis-j slice t -> F(q with coordinate j replaced by t), with partials
/// from the field (analytic or differenced) up to `derivative_orders`.
Field1D axis_slice(const QField& F, const Point4& q, int j, int derivative_orders, double fd_step);

/// (I^{alpha_j}_{a_j+} F)(q_0, ..., x_j, ..., q_3).
CQuaternion partial_rl_integral(const QField& F, const Box4& box, int j, Complex alpha_j, const Point4& q,
                                double x_j, const QuadratureSpec& spec = {});

/// (D^{alpha_j}_{a_j+} F)(q_0, ..., x_j, ..., q_3), any n = floor(Re alpha_j) + 1.
CQuaternion partial_rl_derivative(const QField& F, const Box4& box, int j, Complex alpha_j, const Point4& q,
                                  double x_j, const QuadratureSpec& spec = {});

/// (x - a)^p / Gamma(p + 1) for complex p; zero when p + 1 is a pole.
Complex power_over_gamma(double x_minus_a, Complex p);

}  // namespace quatfrac
