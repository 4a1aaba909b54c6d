#include <cmath>
#include <random>

#include "doctest.h"
#include "quatfrac/quadrature.hpp"

using namespace quatfrac;

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 24, 60}) {
    const Rule1D r = gauss_legendre(n, -0.5, 2.0);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = (std::pow(2.0, d + 1) - std::pow(-0.5, d + 1)) / (d + 1);
      const double got = r.apply([&](double t) { return std::pow(t, d); });
      CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("Gauss-Jacobi moments against the Beta function") {
  // int_lo^hi (hi-t)^mu (t-lo)^d dt = L^{mu+d+1} B(mu+1, d+1).
  for (double mu : {-0.9, -0.5, -0.25, 0.0, 0.3, 1.7}) {
    for (int n : {3, 12, 30}) {
      const double lo = 0.2, hi = 1.45, L = hi - lo;
      const Rule1D r = gauss_jacobi(n, mu, lo, hi);
      for (int d = 0; d <= 2 * n - 1; d += 3) {
        const double beta = std::exp(std::lgamma(mu + 1) + std::lgamma(d + 1.0) - std::lgamma(mu + d + 2));
        const double exact = std::pow(L, mu + d + 1) * beta;
        const double got = r.apply([&](double t) { return std::pow(t - lo, d); });
        CHECK(std::abs(got - exact) <= 1e-12 * exact);
      }
      const Rule1D s = gauss_jacobi_lower(n, mu, lo, hi);
      const double got = s.apply([&](double t) { return hi - t; });
      const double exact = std::pow(L, mu + 2) * std::exp(std::lgamma(mu + 1) - std::lgamma(mu + 3));
      CHECK(std::abs(got - exact) <= 1e-12 * exact);
    }
  }
  CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0, 1), Error);
  CHECK_THROWS_AS(gauss_jacobi(4, 0.5, 1, 1), Error);
}

TEST_CASE("endpoint singular rule integrates t^nu p(t) unweighted") {
  const Rule1D r = endpoint_singular_rule(10, -0.6, 0.0, 2.0);
  const double got = r.apply([](double t) { return std::pow(t, -0.6) * (1 + t * t); });
  const double exact = std::pow(2.0, 0.4) / 0.4 + std::pow(2.0, 2.4) / 2.4;
  CHECK(std::abs(got - exact) < 1e-12 * exact);
}

TEST_CASE("graded breakpoints") {
  const auto bp = graded_breakpoints(0.0, 1.0, 0.3, 0.3, 1e-4);
  CHECK(bp.front() == 0.0);
  CHECK(bp.back() == 1.0);
  for (std::size_t i = 1; i < bp.size(); ++i) CHECK(bp[i] > bp[i - 1]);
  CHECK(std::count(bp.begin(), bp.end(), 0.3) == 1);
  // Symmetric about the centre inside the shorter half.
  for (double x : bp)
    if (x < 0.3) CHECK(std::find_if(bp.begin(), bp.end(), [&](double y) { return std::abs(y - (0.6 - x)) < 1e-14; }) != bp.end());
  const Rule1D r = axis_rule(0.0, 1.0, AxisPlan{0.3, std::nullopt}, 6, 0.3, 1e-7);
  CHECK(std::abs(r.apply([](double t) { return std::sqrt(std::abs(t - 0.3)); }) -
                 (2.0 / 3.0) * (std::pow(0.3, 1.5) + std::pow(0.7, 1.5))) < 1e-9);
}

TEST_CASE("box integrals and compensated tensor sums") {
  const Box4 box = Box4::make({0, -1, 0.5, 0}, {1, 1, 2, 0.25});
  QuadratureSpec spec;
  spec.order = 6;
  const CQuaternion got = integrate_box4(
      [](const Point4& y) { return CQuaternion(Complex(y[0] * y[0] * y[1] * y[1] * y[2], y[3])); }, box, spec);
  // int y0^2 * int y1^2 * int y2 * 1  and  |box| * mean(y3).
  const double exact_re = (1.0 / 3) * (2.0 / 3) * ((4.0 - 0.25) / 2) * 0.25;
  const double exact_im = 1.0 * 2.0 * 1.5 * (0.25 * 0.25 / 2);
  CHECK(std::abs(got[0].real() - exact_re) < 1e-14);
  CHECK(std::abs(got[0].imag() - exact_im) < 1e-14);
  CHECK(std::abs(box.measure() - 0.75) < 1e-15);

  spec.threads = 3;
  const CQuaternion threaded = integrate_box4(
      [](const Point4& y) { return CQuaternion(Complex(std::sin(y[0] + y[1]) * y[2], y[3])); }, box, spec);
  spec.threads = 1;
  const CQuaternion serial = integrate_box4(
      [](const Point4& y) { return CQuaternion(Complex(std::sin(y[0] + y[1]) * y[2], y[3])); }, box, spec);
  CHECK(threaded == serial);

  CHECK_THROWS_AS(integrate_box4([](const Point4&) { return CQuaternion(Complex(NAN)); }, box, spec), Error);
  CHECK_THROWS_AS(Box4::make({0, 0, 0, 0}, {1, 1, 0, 1}), Error);
}

TEST_CASE("boundary sum of a constant vanishes") {
  const Box4 box = Box4::make({0, 0, 0, 0}, {1, 2, 0.5, 1});
  QuadratureSpec spec;
  spec.order = 4;
  const StructuralSet psi = StructuralSet::standard();
  CHECK(max_abs(integrate_boundary([](const Point4&) { return CQuaternion(basis::j); }, box, psi, spec,
                                   Side::left)) < 1e-15);
  // sigma applied to x_0 gives psi_0 * |J| (divergence theorem on one axis).
  const CQuaternion flux =
      integrate_boundary([](const Point4& y) { return CQuaternion(y[0]); }, box, psi, spec, Side::left);
  CHECK(max_abs(flux - CQuaternion(psi[0] * box.measure())) < 1e-14);
}

TEST_CASE("ball exclusion") {
  const Box4 box = Box4::unit();
  QuadratureSpec spec;
  const Point4 c{0.4, 0.5, 0.55, 0.45};
  const double eps = 0.05;
  const ExclusionResult r =
      integrate_excluding_ball([](const Point4&) { return CQuaternion(1.0); }, box, c, eps, spec);
  // |box| - |B(eps)| with |B| = pi^2/2 eps^4; the mesh resolves the sphere only approximately.
  const double exact = 1.0 - M_PI * M_PI / 2 * std::pow(eps, 4);
  CHECK(std::abs(r.value[0].real() - exact) < 2e-6);
  CHECK(r.epsilon == eps);
}

TEST_CASE("ball exclusion at the midpoint and outside the box") {
  const Box4 box = Box4::unit();
  QuadratureSpec spec;
  const auto one = [](const Point4&) { return CQuaternion(1.0); };
  const ExclusionResult mid = integrate_excluding_ball(one, box, {0.5, 0.5, 0.5, 0.5}, 0.1, spec);
  CHECK(std::abs(mid.value[0].real() - (1.0 - M_PI * M_PI / 2 * 1e-4)) < 1e-3);
  const auto poly = [](const Point4& y) { return CQuaternion(y[0] * y[1] + y[2] * y[2] * y[3], 0.0, y[0], 1.0); };
  const ExclusionResult out = integrate_excluding_ball(poly, box, {1.5, 0.5, 0.5, 0.5}, 0.1, spec);
  CHECK(max_abs(out.value - integrate_box4(poly, box, spec)) == 0.0);
}

TEST_CASE("ball exclusion of an integrable singularity") {
  const Box4 box = Box4::unit();
  QuadratureSpec spec;
  const Point4 c{0.45, 0.5, 0.55, 0.5};
  const auto f = [&](const Point4& y) { return CQuaternion(std::pow(distance(y, c), -3.0)); };
  // The shell eps2 < r < eps1 holds 2 pi^2 (eps1 - eps2) of |y - c|^-3. Dropping nodes
  // resolves the sphere to a few percent of the shell.
  double prev = 0.0;
  for (double eps : {0.04, 0.02, 0.01}) {
    const double v = integrate_excluding_ball(f, box, c, eps, spec).value[0].real();
    CHECK(std::isfinite(v));
    if (prev != 0.0) CHECK(std::abs((v - prev) - 2 * M_PI * M_PI * eps) < 0.1 * 2 * M_PI * M_PI * eps);
    prev = v;
  }
}
