#include "quatfrac/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "quatfrac/error.hpp"

namespace quatfrac {

namespace {

constexpr int kLanczosG = 7;
constexpr std::array<double, 9> kLanczosCoeff{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(std::complex<double> z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

std::complex<double> lanczos(std::complex<double> z) {
  using std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * lanczos(1.0 - z));
  z -= 1.0;
  std::complex<double> x = kLanczosCoeff[0];
  for (int i = 1; i < kLanczosG + 2; ++i) x += kLanczosCoeff[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + (kLanczosG + 0.5);
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

std::complex<double> gamma(std::complex<double> z) {
  if (is_nonpositive_integer(z)) throw Error(ErrorKind::DomainError, "Gamma pole");
  return lanczos(z);
}

std::complex<double> rgamma(std::complex<double> z) {
  if (is_nonpositive_integer(z)) return 0.0;
  return 1.0 / gamma(z);
}

}  // namespace quatfrac
