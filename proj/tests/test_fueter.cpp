#include <cmath>
#include <random>

#include "doctest.h"
#include "quatfrac/error.hpp"
#include "quatfrac/fueter.hpp"

using namespace quatfrac;

namespace {

StructuralSet rotated_set(std::uint64_t seed, bool flip) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Quaternion v{u(rng), u(rng), u(rng), u(rng)};
  v = v / norm(v);
  Quaternion w{u(rng), u(rng), u(rng), u(rng)};
  w = w / norm(w);
  // x -> v x w is a rotation of R^4.
  Quaternion p3 = v * basis::k * w;
  if (flip) p3 = -p3;
  return StructuralSet::make(v * basis::one * w, v * basis::i * w, v * basis::j * w, p3);
}

QField zero_field(const Box4& box) {
  QField z;
  z.domain = box;
  return z;
}

}  // namespace

TEST_CASE("psi-Fueter operators on the special fields") {
  const Box4 box = Box4::unit();
  const StructuralSet psi = StructuralSet::standard();
  const Point4 x{0.2, 0.4, 0.6, 0.8};
  CHECK(max_abs(psi_fueter_left(constant_field(CQuaternion(1.0), box), psi, x)) == 0.0);
  CHECK(max_abs(psi_fueter_left(identity_field(psi, box), psi, x) - CQuaternion(-2.0)) < 1e-15);
  CHECK(max_abs(psi_fueter_right(identity_field(psi, box), psi, x) - CQuaternion(-2.0)) < 1e-15);
  CHECK(max_abs(psi_fueter_left(regular_field(psi, box), psi, x)) < 1e-15);
  // The regular field for a general structural set is left-regular too.
  const StructuralSet rot = rotated_set(3, true);
  CHECK(max_abs(psi_fueter_left(regular_field(rot, box), rot, x)) < 1e-14);
  CHECK_THROWS_AS(psi_fueter_left(identity_field(psi, box), psi, {1.5, 0.5, 0.5, 0.5}), Error);
}

TEST_CASE("analytic and differenced partials agree") {
  const Box4 box = Box4::unit();
  const StructuralSet psi = rotated_set(9, false);
  const QField p = random_polynomial(41, 3).field("p", box);
  QField numeric = p;
  numeric.deriv = nullptr;
  for (const Point4& x : {Point4{0.3, 0.3, 0.3, 0.3}, Point4{0.7, 0.1, 0.5, 0.9}}) {
    CHECK(max_abs(psi_fueter_left(p, psi, x) - psi_fueter_left(numeric, psi, x)) < 1e-5);
    CHECK(max_abs(psi_fueter_right(p, psi, x) - psi_fueter_right(numeric, psi, x)) < 1e-5);
    for (int k = 0; k < 4; ++k) CHECK(max_abs(p.partial(x, k, 1e-5) - numeric.partial(x, k, 1e-5)) < 1e-6);
  }
}

TEST_CASE("Cauchy kernel") {
  const StructuralSet psi = StructuralSet::standard();
  const double c = 1.0 / (2.0 * M_PI * M_PI);
  CHECK(max_abs(cauchy_kernel_at(psi, {1, 0, 0, 0}) - Quaternion(c)) < 1e-16);
  CHECK(max_abs(cauchy_kernel_at(psi, {0, 1, 0, 0}) - basis::i * -c) < 1e-16);
  CHECK_THROWS_AS(cauchy_kernel(psi, {0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}), Error);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const Point4 v{u(rng), u(rng), u(rng), u(rng)};
    const double lam = 0.3 + std::abs(u(rng)) * 3;
    const Point4 lv{lam * v[0], lam * v[1], lam * v[2], lam * v[3]};
    CHECK(max_abs(cauchy_kernel_at(psi, lv) - cauchy_kernel_at(psi, v) * std::pow(lam, -3.0)) <
          1e-12 * max_abs(cauchy_kernel_at(psi, lv)));
  }
}

TEST_CASE("Cauchy kernel is left and right regular and its partials are exact") {
  for (const StructuralSet& psi : {StructuralSet::standard(), rotated_set(5, false), rotated_set(6, true)}) {
    const Point4 u0{0.4, -0.3, 0.5, 0.2};
    const double h = 1e-4;
    Quaternion left{}, right{};
    for (int k = 0; k < 4; ++k) {
      Point4 up = u0, um = u0;
      up[k] += h;
      um[k] -= h;
      const Quaternion dk = (cauchy_kernel_at(psi, up) - cauchy_kernel_at(psi, um)) / (2 * h);
      CHECK(max_abs(dk - cauchy_kernel_partial(psi, u0, k)) < 1e-6);
      left += psi[k] * dk;
      right += dk * psi[k];
    }
    CHECK(max_abs(left) < 1e-4);
    CHECK(max_abs(right) < 1e-4);
  }
}

TEST_CASE("classical Stokes formula") {
  const Box4 box = Box4::make({0, -0.5, 0.2, 0}, {1, 0.5, 1, 0.7});
  QuadratureSpec spec;
  spec.order = 6;
  spec.refine_levels = 1;
  for (const StructuralSet& psi : {StructuralSet::standard(), rotated_set(7, false), rotated_set(8, true)}) {
    const QField one = constant_field(CQuaternion(1.0), box);
    CHECK(verify_stokes_classical(one, one, box, psi, spec).value < 1e-12);
    const QField f = random_polynomial(101, 2, true).field("f", box);
    const QField g = random_polynomial(202, 2).field("g", box);
    CHECK(verify_stokes_classical(f, g, box, psi, spec).value < 1e-10);
    const Residual reg = verify_stokes_classical(regular_field(psi, box), one, box, psi, spec);
    CHECK(reg.value < 1e-12);
    CHECK(max_abs(reg.lhs) < 1e-12);
    // Constant fields have zero boundary integral for any structural set.
    CHECK(max_abs(integrate_boundary([](const Point4&) { return CQuaternion(basis::k); }, box, psi, spec,
                                     Side::right)) < 1e-12);
  }
}

TEST_CASE("Teodorescu transform inverts the psi-Fueter operator") {
  const Box4 box = Box4::unit();
  const StructuralSet psi = StructuralSet::standard();
  QuadratureSpec spec;
  spec.panel_order = 3;
  const Point4 x{0.3, 0.4, 0.6, 0.55};
  CHECK(max_abs(teodorescu(constant_field(CQuaternion{}, box), box, psi, x, spec)) == 0.0);
  const QField p = random_polynomial(5, 3).field("p", box);
  const Residual r = verify_teodorescu(p, box, psi, x, spec);
  CHECK(r.trace.size() == 3);
  CHECK(r.strictly_decreasing());
  CHECK(r.value < 1e-3);
}

TEST_CASE("orientation of the Teodorescu kernel") {
  // Differencing int K(y-x) F(y) dy in x gives -F: the kernel taken as K(y - x)
  // is a left inverse only up to sign, T uses K(x - y).
  const Box4 box = Box4::unit();
  const StructuralSet psi = StructuralSet::standard();
  QuadratureSpec spec;
  spec.panel_order = 4;
  spec.exclusion_radius = 1e-3;
  const QField one = constant_field(CQuaternion(1.0), box);
  const Point4 x{0.45, 0.5, 0.55, 0.5};
  const double h = 0.02;
  CQuaternion d{};
  for (int k = 0; k < 4; ++k) {
    Point4 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    d += psi[k] * ((teodorescu_kernel_yx(one, box, psi, xp, spec) - teodorescu_kernel_yx(one, box, psi, xm, spec)) /
                   Complex(2 * h));
  }
  CHECK(std::abs(d[0].real() + 1.0) < 0.1);
  CHECK(max_abs(d - CQuaternion(-1.0)) < 0.1);
}

TEST_CASE("classical Borel-Pompeiu formula") {
  const Box4 box = Box4::unit();
  const StructuralSet psi = StructuralSet::standard();
  const QuadratureSpec spec;
  const QField one = constant_field(CQuaternion(1.0), box);
  const QField zero = zero_field(box);
  const Residual inside = verify_borel_pompeiu_classical(one, zero, box, psi, {0.3, 0.4, 0.6, 0.55}, spec);
  CHECK(inside.value < 5e-3);
  CHECK(inside.strictly_decreasing());
  CHECK(std::abs(inside.lhs[0].real() - 1.0) < 5e-3);
  const Residual outside = verify_borel_pompeiu_classical(one, zero, box, psi, {1.3, 0.5, 0.5, 0.5}, spec);
  CHECK(outside.value < 5e-3);
  CHECK(outside.strictly_decreasing());
  const Residual reg =
      verify_borel_pompeiu_classical(regular_field(psi, box), zero, box, psi, {0.3, 0.4, 0.6, 0.55}, spec);
  CHECK(reg.value < 5e-3);
  // g only: the right-handed half of the formula.
  const Residual right = verify_borel_pompeiu_classical(zero, one, box, psi, {0.6, 0.35, 0.45, 0.7}, spec);
  CHECK(right.value < 5e-3);
  CHECK_THROWS_AS(verify_borel_pompeiu_classical(one, zero, box, psi, {0.005, 0.5, 0.5, 0.5}, spec), Error);
}
