#include "quatfrac/field.hpp"

#include <cmath>
#include <random>

#include "quatfrac/error.hpp"

namespace quatfrac {

CQuaternion QField::partial(const Point4& x, std::span<const int> axes, double fd_step) const {
  for (int ax : axes)
    if (ax < 0 || ax > 3) throw Error(ErrorKind::DomainError, "field partial: axis out of range");
  if (axes.empty()) return value(x);
  if (deriv) return deriv(x, axes);
  // Peel the last axis off and difference the lower-order partial.
  const int k = axes.back();
  const auto rest = axes.first(axes.size() - 1);
  const double m = static_cast<double>(axes.size());
  const double h = domain.length(k) * std::pow(fd_step, 1.0 / m);
  Point4 xp = x, xm = x;
  xp[k] += h;
  xm[k] -= h;
  return (partial(xp, rest, fd_step) - partial(xm, rest, fd_step)) / Complex(2.0 * h);
}

QField combine(const std::vector<std::pair<CQuaternion, QField>>& terms, std::string id) {
  if (terms.empty()) throw Error(ErrorKind::DomainError, "combine: no terms");
  QField out;
  out.id = std::move(id);
  out.domain = terms.front().second.domain;
  out.value = [terms](const Point4& x) {
    CQuaternion s{};
    for (const auto& [c, f] : terms) s += c * f(x);
    return s;
  };
  bool all = true;
  for (const auto& t : terms) all = all && t.second.has_derivatives();
  if (all)
    out.deriv = [terms](const Point4& x, std::span<const int> axes) {
      CQuaternion s{};
      for (const auto& [c, f] : terms) s += c * f.deriv(x, axes);
      return s;
    };
  return out;
}

namespace {

// pw[k][e] = x_k^e for e <= max exponent (at most 8 kept on the stack).
constexpr int kMaxTabulated = 8;

}  // namespace

CQuaternion QPolynomial::operator()(const Point4& x) const {
  static constexpr std::array<int, 0> none{};
  return derivative(x, none);
}

CQuaternion QPolynomial::derivative(const Point4& x, std::span<const int> axes) const {
  std::array<int, 4> order{};
  for (int ax : axes) ++order[ax];
  double pw[4][kMaxTabulated + 1];
  for (std::size_t k = 0; k < 4; ++k) {
    pw[k][0] = 1.0;
    for (int e = 1; e <= kMaxTabulated; ++e) pw[k][e] = pw[k][e - 1] * x[k];
  }
  CQuaternion s{};
  for (const Term& t : terms_) {
    double m = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const int e = t.exponents[k];
      if (order[k] > e) {
        m = 0.0;
        break;
      }
      for (int r = 0; r < order[k]; ++r) m *= e - r;
      const int p = e - order[k];
      m *= p <= kMaxTabulated ? pw[k][p] : std::pow(x[k], p);
    }
    if (m != 0.0)
      for (std::size_t c = 0; c < 4; ++c) s.c[c] += t.coeff.c[c] * m;
  }
  return s;
}

int QPolynomial::degree() const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.exponents[0] + t.exponents[1] + t.exponents[2] + t.exponents[3]);
  return d;
}

QField QPolynomial::field(std::string id, const Box4& domain) const {
  QField f;
  f.id = std::move(id);
  f.domain = domain;
  auto self = std::make_shared<QPolynomial>(*this);
  f.value = [self](const Point4& x) { return (*self)(x); };
  f.deriv = [self](const Point4& x, std::span<const int> axes) { return self->derivative(x, axes); };
  return f;
}

QPolynomial random_polynomial(std::uint64_t seed, int degree, bool complex_coefficients) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<QPolynomial::Term> terms;
  for (int e0 = 0; e0 <= degree; ++e0)
    for (int e1 = 0; e0 + e1 <= degree; ++e1)
      for (int e2 = 0; e0 + e1 + e2 <= degree; ++e2)
        for (int e3 = 0; e0 + e1 + e2 + e3 <= degree; ++e3) {
          QPolynomial::Term t;
          t.exponents = {e0, e1, e2, e3};
          for (auto& c : t.coeff.c) c = Complex(u(rng), complex_coefficients ? u(rng) : 0.0);
          terms.push_back(t);
        }
  return QPolynomial(std::move(terms));
}

QField constant_field(const CQuaternion& c, const Box4& domain, std::string id) {
  return QPolynomial({{{0, 0, 0, 0}, c}}).field(std::move(id), domain);
}

QField identity_field(const StructuralSet& psi, const Box4& domain) {
  std::vector<QPolynomial::Term> terms;
  for (int k = 0; k < 4; ++k) {
    QPolynomial::Term t;
    t.exponents[k] = 1;
    t.coeff = psi[k];
    terms.push_back(t);
  }
  return QPolynomial(terms).field("identity", domain);
}

QField regular_field(const StructuralSet& psi, const Box4& domain) {
  const Quaternion c0 = -(conj(psi[0]) * psi[1]);
  return QPolynomial({{{0, 1, 0, 0}, CQuaternion(1.0)}, {{1, 0, 0, 0}, CQuaternion(c0)}})
      .field("regular", domain);
}

QField vanishing_square_field(const Box4& domain) {
  // Expand prod (x_k - a_k)^2 into monomials.
  std::vector<QPolynomial::Term> terms;
  const auto& a = domain.a;
  for (int e0 = 0; e0 <= 2; ++e0)
    for (int e1 = 0; e1 <= 2; ++e1)
      for (int e2 = 0; e2 <= 2; ++e2)
        for (int e3 = 0; e3 <= 2; ++e3) {
          const std::array<int, 4> e{e0, e1, e2, e3};
          double c = 1.0;
          for (std::size_t k = 0; k < 4; ++k) {
            // (x - a)^2 = x^2 - 2 a x + a^2
            const double coef[3] = {a[k] * a[k], -2.0 * a[k], 1.0};
            c *= coef[e[k]];
          }
          if (c != 0.0) terms.push_back({e, CQuaternion(c)});
        }
  return QPolynomial(terms).field("vanishing_square", domain);
}

std::vector<QField> polynomial_corpus(const StructuralSet& psi, const Box4& domain, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<QField> corpus;
  corpus.push_back(constant_field(CQuaternion(1.0), domain, "one"));
  const Quaternion c{u(rng), u(rng), u(rng), u(rng)};
  corpus.push_back(constant_field(CQuaternion(c), domain, "const"));
  corpus.push_back(identity_field(psi, domain));
  corpus.push_back(regular_field(psi, domain));
  for (int i = 0; i < 8; ++i) {
    const std::uint64_t s = rng();
    const int degree = 1 + i % 3;
    corpus.push_back(random_polynomial(s, degree).field("poly" + std::to_string(i) + "_deg" + std::to_string(degree), domain));
  }
  return corpus;
}

}  // namespace quatfrac
