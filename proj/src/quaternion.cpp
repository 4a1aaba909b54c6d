#include "quatfrac/quaternion.hpp"

#include <sstream>

#include "quatfrac/error.hpp"

namespace quatfrac {

namespace {

constexpr double kOrthonormalTol = 1e-10;

double det4(const std::array<Quaternion, 4>& rows) {
  // Laplace expansion along the first row of the coordinate matrix.
  auto det3 = [&](int skip) {
    int cols[3];
    int n = 0;
    for (int c = 0; c < 4; ++c)
      if (c != skip) cols[n++] = c;
    const auto& r1 = rows[1].c;
    const auto& r2 = rows[2].c;
    const auto& r3 = rows[3].c;
    return r1[cols[0]] * (r2[cols[1]] * r3[cols[2]] - r2[cols[2]] * r3[cols[1]]) -
           r1[cols[1]] * (r2[cols[0]] * r3[cols[2]] - r2[cols[2]] * r3[cols[0]]) +
           r1[cols[2]] * (r2[cols[0]] * r3[cols[1]] - r2[cols[1]] * r3[cols[0]]);
  };
  double d = 0.0;
  for (int c = 0; c < 4; ++c) d += ((c % 2 == 0) ? 1.0 : -1.0) * rows[0].c[c] * det3(c);
  return d;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotOrthonormal: return "NotOrthonormal";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::MissingDerivative: return "MissingDerivative";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::OnBoundary: return "OnBoundary";
    case ErrorKind::SegmentHitsSingularity: return "SegmentHitsSingularity";
    case ErrorKind::NestingViolation: return "NestingViolation";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

StructuralSet StructuralSet::make(const Quaternion& v0, const Quaternion& v1, const Quaternion& v2,
                                  const Quaternion& v3) {
  const std::array<Quaternion, 4> psi{v0, v1, v2, v3};
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t s = 0; s < 4; ++s) {
      const double expected = (k == s) ? 1.0 : 0.0;
      const double got = scalar_product(psi[k], psi[s]);
      if (std::abs(got - expected) > kOrthonormalTol) {
        std::ostringstream msg;
        msg << "<psi_" << k << ", psi_" << s << "> = " << got;
        throw Error(ErrorKind::NotOrthonormal, msg.str());
      }
    }
  }
  return StructuralSet(psi, det4(psi) > 0.0 ? 1 : -1);
}

StructuralSet StructuralSet::standard() {
  return StructuralSet({basis::one, basis::i, basis::j, basis::k}, 1);
}

StructuralSet StructuralSet::conjugated() const {
  return make(conj(psi_[0]), conj(psi_[1]), conj(psi_[2]), conj(psi_[3]));
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.c[0] << ", " << q.c[1] << ", " << q.c[2] << ", " << q.c[3] << ')';
}

std::ostream& operator<<(std::ostream& os, const CQuaternion& q) {
  return os << '(' << q.c[0] << ", " << q.c[1] << ", " << q.c[2] << ", " << q.c[3] << ')';
}

}  // namespace quatfrac
