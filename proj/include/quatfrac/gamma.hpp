#pragma once

#include <complex>

namespace quatfrac {

/// Complex Gamma function, Lanczos approximation (g = 7, nine terms) with the
/// reflection formula for Re z < 1/2. Throws DomainError at the poles.
std::complex<double> gamma(std::complex<double> z);

/// 1/Gamma(z); entire, so it returns 0 at the poles instead of throwing.
std::complex<double> rgamma(std::complex<double> z);

}  // namespace quatfrac
