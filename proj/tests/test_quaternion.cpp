#include <cmath>
#include <random>

#include "doctest.h"
#include "quatfrac/error.hpp"
#include "quatfrac/gamma.hpp"
#include "quatfrac/quaternion.hpp"

using namespace quatfrac;

namespace {

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(rng), u(rng), u(rng), u(rng)};
}

// Rotated basis: psi_k = u e_k for a unit quaternion u (left multiplication is an isometry).
StructuralSet rotated(const Quaternion& u, bool flip) {
  const double n = norm(u);
  const Quaternion v = u / n;
  Quaternion p3 = v * basis::k;
  if (flip) p3 = -p3;
  return StructuralSet::make(v * basis::one, v * basis::i, v * basis::j, p3);
}

}  // namespace

TEST_CASE("Hamilton table") {
  using namespace basis;
  CHECK(i * i == -one);
  CHECK(j * j == -one);
  CHECK(k * k == -one);
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * j == -i);
  CHECK(k * i == j);
  CHECK(i * k == -j);
}

TEST_CASE("product is associative and conjugation reverses order") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Quaternion p = random_quaternion(rng), q = random_quaternion(rng), r = random_quaternion(rng);
    CHECK(max_abs((p * q) * r - p * (q * r)) < 1e-12);
    CHECK(max_abs(conj(p * q) - conj(q) * conj(p)) < 1e-12);
    CHECK(std::abs(norm(p * q) - norm(p) * norm(q)) < 1e-12);
  }
}

TEST_CASE("complex quaternions: imaginary unit is central") {
  const CQuaternion a{Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(0.5, 0.5)};
  const CQuaternion b{Complex(-1, 0), Complex(2, 1), Complex(0, 1), Complex(1, -2)};
  const Complex iu(0, 1);
  CHECK(max_abs((iu * a) * b - a * (iu * b)) < 1e-14);
  CHECK(max_abs(CQuaternion(basis::i) * a - basis::i * a) == 0.0);
}

TEST_CASE("structural sets") {
  const StructuralSet std_set = StructuralSet::standard();
  CHECK(std_set.sgn() == 1);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Quaternion u = random_quaternion(rng);
    for (bool flip : {false, true}) {
      const StructuralSet psi = rotated(u, flip);
      CHECK(psi.sgn() == (flip ? -1 : 1));
      const Quaternion q = random_quaternion(rng);
      const auto c = coords(q, psi);
      CHECK(max_abs(from_coords(c, psi) - q) < 1e-12);
      const Quaternion x = random_quaternion(rng);
      CHECK(std::abs(psi_scalar_product(q, x, psi) - scalar_product(q, x)) < 1e-12);
    }
  }
  CHECK(StructuralSet::make(basis::one, basis::j, basis::i, basis::k).sgn() == -1);
}

TEST_CASE("non-orthonormal quadruples are rejected") {
  using namespace basis;
  try {
    (void)StructuralSet::make(one, i, j, i);
    FAIL("expected NotOrthonormal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotOrthonormal);
  }
  CHECK_THROWS_AS((void)StructuralSet::make(one * 1.001, i, j, k), Error);
  CHECK_NOTHROW((void)StructuralSet::make(one * (1.0 + 1e-12), i, j, k));
}

TEST_CASE("Lanczos gamma") {
  CHECK(std::abs(gamma(Complex(1.0)) - 1.0) < 1e-14);
  CHECK(std::abs(gamma(Complex(5.0)) - 24.0) < 1e-12);
  CHECK(std::abs(gamma(Complex(0.5)) - std::sqrt(M_PI)) < 1e-14);
  CHECK(std::abs(gamma(Complex(-0.5)) + 2.0 * std::sqrt(M_PI)) < 1e-13);
  for (double x : {0.1, 0.37, 1.7, 3.3, 7.25, -1.3, -2.6})
    CHECK(std::abs(gamma(Complex(x)).real() - std::tgamma(x)) < 1e-13 * std::abs(std::tgamma(x)));
  // Recurrence z Gamma(z) = Gamma(z+1) off the real axis.
  for (Complex z : {Complex(0.3, 0.7), Complex(-1.2, 0.4), Complex(2.5, -3.0)})
    CHECK(std::abs(z * gamma(z) - gamma(z + 1.0)) < 1e-12 * std::abs(gamma(z + 1.0)));
  // |Gamma(1/2 + i y)|^2 = pi / cosh(pi y).
  CHECK(std::abs(std::norm(gamma(Complex(0.5, 1.3))) - M_PI / std::cosh(M_PI * 1.3)) < 1e-13);
  CHECK_THROWS_AS(gamma(Complex(0.0)), Error);
  CHECK_THROWS_AS(gamma(Complex(-3.0)), Error);
  CHECK(rgamma(Complex(-2.0)) == Complex(0.0));
}
