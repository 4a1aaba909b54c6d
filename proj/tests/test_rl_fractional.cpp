#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "quatfrac/error.hpp"
#include "quatfrac/gamma.hpp"
#include "quatfrac/rl_fractional.hpp"

using namespace quatfrac;

namespace {

// Scalar polynomial sum d_m t^m times a fixed quaternion, with analytic derivatives.
struct ScalarPoly {
  std::vector<double> d;
  Quaternion dir = basis::one;

  double eval(double t, int order = 0) const {
    double s = 0.0;
    for (std::size_t m = order; m < d.size(); ++m) {
      double c = d[m];
      for (int r = 0; r < order; ++r) c *= static_cast<double>(m - r);
      s += c * std::pow(t, static_cast<double>(m - order));
    }
    return s;
  }
  Field1D field(int derivs = 2) const {
    Field1D f;
    f.evaluate = [*this](double t) { return CQuaternion(dir * eval(t)); };
    for (int k = 1; k <= derivs; ++k)
      f.derivatives.push_back([*this, k](double t) { return CQuaternion(dir * eval(t, k)); });
    return f;
  }
  // Power-rule oracle in the shifted basis.
  double integral(double a, double alpha, double x) const {
    const auto c = oracle::shift_polynomial(d, a);
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * oracle::rl_integral_power(m, alpha, x - a);
    return s;
  }
  double derivative(double a, double alpha, double x) const {
    const auto c = oracle::shift_polynomial(d, a);
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * oracle::rl_derivative_power(m, alpha, x - a);
    return s;
  }
};

ScalarPoly random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarPoly p;
  for (int m = 0; m <= degree; ++m) p.d.push_back(u(rng));
  p.dir = Quaternion{u(rng), u(rng), u(rng), u(rng)};
  return p;
}

Field1D constant_one() {
  Field1D f;
  f.evaluate = [](double) { return CQuaternion(1.0); };
  f.derivatives = {[](double) { return CQuaternion{}; }, [](double) { return CQuaternion{}; }};
  return f;
}

}  // namespace

TEST_CASE("RL integral of constants and powers") {
  const Field1D one = constant_one();
  CHECK(std::abs(rl_integral(one, 0.0, 0.5, 1.0)[0].real() - 1.1283791670955126) < 1e-13);
  for (double alpha : {0.3, 0.5, 0.7, 1.4, 2.5}) {
    for (double x : {0.2, 0.9, 1.7}) {
      const double exact = std::pow(x + 0.3, alpha) / std::tgamma(alpha + 1.0);
      CHECK(std::abs(rl_integral(one, -0.3, alpha, x)[0].real() - exact) < 1e-12 * std::max(1.0, exact));
    }
  }
  Field1D lin;
  lin.evaluate = [](double t) { return CQuaternion(t - 0.25); };
  const double exact = oracle::rl_integral_power(1.0, 0.4, 0.75);
  CHECK(std::abs(rl_integral(lin, 0.25, 0.4, 1.0)[0].real() - exact) < 1e-13);
}

TEST_CASE("RL integral semigroup on polynomials") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const ScalarPoly p = random_poly(rng, 3);
    const Field1D f = p.field();
    Field1D half;
    half.evaluate = [&](double s) { return s > 0.0 ? rl_integral(f, 0.0, 0.5, s) : CQuaternion{}; };
    half.singular_exponent = 0.5;  // I^0.5 of a polynomial is t^0.5 times a polynomial
    const CQuaternion twice = rl_integral(half, 0.0, 0.5, 0.8);
    const CQuaternion once = rl_integral(f, 0.0, 1.0, 0.8);
    CHECK(max_abs(twice - once) < 1e-10);
    CHECK(std::abs(once[0].real() - p.dir[0] * p.integral(0.0, 1.0, 0.8)) < 1e-12);
  }
}

TEST_CASE("D^alpha of constants") {
  const Field1D one = constant_one();
  CHECK(std::abs(rl_derivative(one, 0.0, 0.5, 1.0)[0].real() - 0.5641895835477563) < 1e-13);
  for (double alpha : {0.3, 0.5, 0.7})
    for (double x : {0.1, 0.5, 1.0, 2.0})
      CHECK(std::abs(rl_derivative(one, 0.0, alpha, x)[0].real() - oracle::rl_derivative_power(0, alpha, x)) <
            1e-12);
  // n = 2
  const CQuaternion d2 = rl_derivative_n(one, 0.0, 1.5, 0.6, 2);
  CHECK(std::abs(d2[0].real() - std::pow(0.6, -1.5) / std::tgamma(-0.5)) < 1e-12);
}

TEST_CASE("D^alpha (t-a)^alpha is the constant Gamma(alpha+1)") {
  for (double alpha : {0.3, 0.5, 0.7}) {
    Field1D f;
    f.evaluate = [alpha](double t) { return CQuaternion(std::pow(t - 0.2, alpha)); };
    f.derivatives = {[alpha](double t) { return CQuaternion(alpha * std::pow(t - 0.2, alpha - 1.0)); }};
    f.singular_exponent = alpha;
    for (double x : {0.4, 0.9})
      CHECK(std::abs(rl_derivative(f, 0.2, alpha, x)[0].real() - std::tgamma(alpha + 1.0)) < 1e-12);
  }
}

TEST_CASE("n = 2 power rule") {
  Field1D f;
  f.evaluate = [](double t) { return CQuaternion(t * t); };
  f.derivatives = {[](double t) { return CQuaternion(2 * t); }, [](double) { return CQuaternion(2.0); }};
  const double exact = 2.0 / std::tgamma(1.5) * std::sqrt(0.7);
  CHECK(std::abs(rl_derivative_n(f, 0.0, 1.5, 0.7, 2)[0].real() - exact) < 1e-12);
  CHECK_THROWS_AS(rl_derivative_n(constant_one(), 0.0, 1.5, 0.7, 1), Error);
  Field1D nod = f;
  nod.derivatives.resize(1);
  try {
    (void)rl_derivative_n(nod, 0.0, 1.5, 0.7, 2);
    FAIL("expected MissingDerivative");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingDerivative);
  }
  // n = 1 through the general entry point equals rl_derivative.
  CHECK(max_abs(rl_derivative_n(f, 0.0, 0.4, 0.7, 1) - rl_derivative(f, 0.0, 0.4, 0.7)) == 0.0);
}

TEST_CASE("fundamental theorem D^alpha I^alpha f = f on random polynomials") {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int t = 0; t < 8; ++t) {
    const ScalarPoly p = random_poly(rng, 3);
    const Field1D f = p.field();
    const double a = -0.2;
    for (double alpha : {0.3, 0.5, 0.7}) {
      Field1D g;
      g.evaluate = [&](double s) { return rl_integral(f, a, alpha, s); };
      g.derivatives = {[&](double s) {
        // d/ds I^alpha f = D^{1-alpha} f
        return rl_derivative(f, a, 1.0 - alpha, s);
      }};
      g.singular_exponent = alpha;
      for (double x : {0.05, 0.4, 0.8}) {
        const CQuaternion back = rl_derivative(g, a, alpha, x);
        worst = std::max(worst, max_abs(back - f(x)));
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("stabilized derivative vs differenced I^(1-alpha)") {
  std::mt19937_64 rng(23);
  const ScalarPoly p = random_poly(rng, 3);
  const Field1D f = p.field();
  for (double alpha : {0.3, 0.6}) {
    for (double x : {0.3, 0.9}) {
      const double h = 1e-5;
      const CQuaternion fd =
          (rl_integral(f, 0.0, 1.0 - alpha, x + h) - rl_integral(f, 0.0, 1.0 - alpha, x - h)) / Complex(2 * h);
      CHECK(max_abs(fd - rl_derivative(f, 0.0, alpha, x)) < 1e-6);
      CHECK(std::abs(rl_derivative(f, 0.0, alpha, x)[0].real() - p.dir[0] * p.derivative(0.0, alpha, x)) < 1e-12);
    }
  }
}

TEST_CASE("difference fallback for the derivative") {
  std::mt19937_64 rng(29);
  const ScalarPoly p = random_poly(rng, 3);
  Field1D f = p.field(0);
  const double exact = p.derivative(0.0, 0.5, 0.6) * p.dir[0];
  CHECK(std::abs(rl_derivative(f, 0.0, 0.5, 0.6)[0].real() - exact) < 1e-7);
}

TEST_CASE("linearity and errors") {
  std::mt19937_64 rng(31);
  const ScalarPoly p = random_poly(rng, 2), r = random_poly(rng, 3);
  const Field1D f = p.field(), g = r.field();
  Field1D sum;
  sum.evaluate = [&](double t) { return f(t) * Complex(2.0) + g(t); };
  sum.derivatives = {[&](double t) { return f.derivatives[0](t) * Complex(2.0) + g.derivatives[0](t); }};
  for (Complex alpha : {Complex(0.4), Complex(0.4, 0.3)}) {
    CHECK(max_abs(rl_integral(sum, 0.0, alpha, 0.7) -
                  (rl_integral(f, 0.0, alpha, 0.7) * Complex(2.0) + rl_integral(g, 0.0, alpha, 0.7))) < 1e-12);
    CHECK(max_abs(rl_derivative(sum, 0.0, alpha, 0.7) -
                  (rl_derivative(f, 0.0, alpha, 0.7) * Complex(2.0) + rl_derivative(g, 0.0, alpha, 0.7))) < 1e-12);
    CHECK(is_finite(rl_derivative(sum, 0.0, alpha, 0.7)));
  }
  // Complex order on a constant against the closed form with complex Gamma.
  const CQuaternion c = rl_integral(constant_one(), 0.0, Complex(0.4, 0.3), 0.7);
  const Complex z(0.4, 0.3);
  CHECK(std::abs(c[0] - std::exp(z * std::log(0.7)) / (z * quatfrac::gamma(z))) < 1e-12);
  CHECK_THROWS_AS(rl_integral(f, 0.5, 0.5, 0.5), Error);
  CHECK_THROWS_AS(rl_integral(f, 0.0, -0.5, 0.5), Error);
  CHECK_THROWS_AS(rl_derivative(f, 0.0, 1.2, 0.5), Error);
  CHECK_THROWS_AS(AlphaVec::make({0.3, 0.5, 1.2, 0.4}), Error);
  const AlphaVec al = AlphaVec::real(0.3, 0.5, 0.7, 0.2);
  CHECK(al.n == 1);
  CHECK(al.complement(1)[0] == Complex(0.7));
  CHECK(AlphaVec::uniform(1.5).n == 2);
}

TEST_CASE("per-axis operators on fields") {
  const Box4 box = Box4::make({0.1, 0, 0, 0.2}, {1, 1, 1.5, 1});
  const StructuralSet psi = StructuralSet::standard();
  const QField one = constant_field(CQuaternion(1.0), box);
  const Point4 q{0.4, 0.3, 0.8, 0.5};
  for (int j = 0; j < 4; ++j) {
    const double x = 0.9;
    CHECK(std::abs(partial_rl_integral(one, box, j, 0.3, q, x)[0].real() -
                   std::pow(x - box.a[j], 0.3) / std::tgamma(1.3)) < 1e-13);
    CHECK(std::abs(partial_rl_derivative(one, box, j, 0.3, q, x)[0].real() -
                   std::pow(x - box.a[j], -0.3) / std::tgamma(0.7)) < 1e-13);
  }
  // Identity field: slice along j is q_psi + (t - q_j) psi_j, affine in t.
  const QField id = identity_field(psi, box);
  for (int j = 0; j < 4; ++j) {
    const double x = 0.75, a = box.a[j], alpha = 0.6;
    Point4 qa = q;
    qa[j] = a;
    const CQuaternion base = id(qa);
    const CQuaternion exact = base * Complex(oracle::rl_integral_power(0, alpha, x - a)) +
                              CQuaternion(psi[j]) * Complex(oracle::rl_integral_power(1, alpha, x - a));
    CHECK(max_abs(partial_rl_integral(id, box, j, alpha, q, x) - exact) < 1e-13);
  }
  // D(cF) = c D(F) for a quaternion constant c.
  const QField p = random_polynomial(7, 3).field("p", box);
  const Quaternion c{0.3, -1.0, 0.5, 2.0};
  const QField cp = combine({{CQuaternion(c), p}}, "cp");
  for (int j = 0; j < 4; ++j)
    CHECK(max_abs(partial_rl_derivative(cp, box, j, 0.45, q, 0.95) - c * partial_rl_derivative(p, box, j, 0.45, q, 0.95)) <
          1e-12);
  CHECK_THROWS_AS(partial_rl_integral(one, box, 0, 0.3, q, 0.05), Error);
}
