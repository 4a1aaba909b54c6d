// Fractional Stokes and Borel-Pompeiu checks. script_I[f](q, y, alpha) is a
// sum of one-variable terms, so every integral goes through the separable
// machinery: factored 1-D rules for Stokes, shared kernel marginals for
// Borel-Pompeiu.

#include <algorithm>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>

#include "quatfrac/error.hpp"
#include "quatfrac/frac_fueter.hpp"
#include "quatfrac/separable.hpp"

namespace quatfrac {

namespace {

bool is_zero_field(const QField& f) { return !f.value; }

SeparableField value_terms(const QField& F, const Box4& box, const Point4& q, const AlphaVec& alpha,
                           const QuadratureSpec& spec) {
  SeparableField s;
  for (int j = 0; j < 4; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double a = box.a[uj];
    const Complex g = alpha[uj];
    s[uj].fn = [=, &F](double t) {
      if (t <= a) return CQuaternion{};
      return script_I_term(F, box, q, j, g, t, 0, spec);
    };
    s[uj].nu = g.real();
  }
  return s;
}

// psi_j d_j (side left) or d_j psi_j (side right) of the j-th term.
SeparableField slope_terms(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                           const AlphaVec& alpha, Side side, const QuadratureSpec& spec) {
  SeparableField s;
  for (int j = 0; j < 4; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Complex g = alpha[uj];
    const Quaternion pj = psi[uj];
    s[uj].fn = [=, &F](double t) {
      const CQuaternion d = script_I_term(F, box, q, j, g, t, 1, spec);
      return side == Side::left ? pj * d : d * pj;
    };
    s[uj].nu = g.real() - 1.0;
  }
  return s;
}

// Small cache of kernel marginals so that a corpus sweep at one point pays
// for the kernel once. Keys hold every input that changes the marginals.
using Key = std::vector<double>;

std::shared_ptr<const KernelMarginals> cached(const Key& key, const std::function<KernelMarginals()>& build) {
  static std::mutex mu;
  static std::deque<std::pair<Key, std::shared_ptr<const KernelMarginals>>> store;
  {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [k, v] : store)
      if (k == key) return v;
  }
  auto value = std::make_shared<const KernelMarginals>(build());
  std::lock_guard<std::mutex> lock(mu);
  store.emplace_back(key, value);
  if (store.size() > 64) store.pop_front();
  return value;
}

Key marginal_key(int kind, const Box4& box, const StructuralSet& psi, const Point4& x, double eps,
                 const QuadratureSpec& s, const AlphaVec& alpha) {
  Key k{static_cast<double>(kind), eps, static_cast<double>(s.order), static_cast<double>(s.panel_order),
        s.grading_ratio};
  for (std::size_t i = 0; i < 4; ++i) {
    k.insert(k.end(), {box.a[i], box.b[i], x[i], alpha[i].real(), alpha[i].imag()});
    k.insert(k.end(), psi[i].c.begin(), psi[i].c.end());
  }
  return k;
}

std::array<double, 4> exponents(const AlphaVec& alpha, double shift) {
  std::array<double, 4> e{};
  for (std::size_t i = 0; i < 4; ++i) e[i] = alpha[i].real() + shift;
  return e;
}

std::shared_ptr<const KernelMarginals> cauchy_marginals(const Box4& box, const StructuralSet& psi, const Point4& x,
                                                        const AlphaVec& alpha, const QuadratureSpec& s) {
  const double eps = s.exclusion_for(box);
  return cached(marginal_key(0, box, psi, x, eps, s, alpha), [&] {
    const KernelFn k = [&psi, x](const Point4& y) -> std::optional<CQuaternion> {
      return CQuaternion(cauchy_kernel(psi, y, x));
    };
    return kernel_marginals(box, psi, x, eps, s, exponents(alpha, 0.0), exponents(alpha, -1.0), k,
                            box.in_closure(x));
  });
}

std::shared_ptr<const KernelMarginals> frac_marginals(const Box4& box, const StructuralSet& psi, const Point4& x,
                                                      const AlphaVec& alpha, const QuadratureSpec& s) {
  const double eps = s.exclusion_for(box);
  return cached(marginal_key(1, box, psi, x, eps, s, alpha), [&] {
    const FracKernelRules rules = FracKernelRules::make(alpha, frac_kernel_points(s));
    const KernelFn k = [&psi, &box, &rules, x, eps](const Point4& y) {
      return frac_kernel_eval(psi, box, y, x, rules, eps);
    };
    return kernel_marginals(box, psi, x, eps, s, exponents(alpha, 0.0), exponents(alpha, -1.0), k, false);
  });
}

// Boundary minus volume term for the given marginals.
CQuaternion assemble(const KernelMarginals& mf, const KernelMarginals* mg, const QField& f, const QField& g,
                     const Box4& box, const StructuralSet& psi, const Point4& q, const AlphaVec& alpha,
                     const AlphaVec& beta, const QuadratureSpec& s) {
  CQuaternion lhs{};
  if (!is_zero_field(f))
    lhs += marginal_boundary(mf, value_terms(f, box, q, alpha, s), Side::left) -
           marginal_volume(mf, slope_terms(f, box, psi, q, alpha, Side::left, s), Side::left);
  if (!is_zero_field(g) && mg)
    lhs += marginal_boundary(*mg, value_terms(g, box, q, beta, s), Side::right) -
           marginal_volume(*mg, slope_terms(g, box, psi, q, beta, Side::right, s), Side::right);
  return lhs;
}

void require_segments_clear(const Box4& box, const Point4& x) {
  for (std::size_t i = 0; i < 4; ++i) {
    bool outside = false;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != i && (x[k] < box.a[k] || x[k] > box.b[k])) outside = true;
    if (!outside)
      throw Error(ErrorKind::DomainError,
                  "fractional Borel-Pompeiu: for an exterior point every derivative segment must avoid the "
                  "closed box (two coordinates beyond b)");
  }
}

}  // namespace

Residual verify_frac_stokes(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                            const Point4& q, const AlphaVec& alpha, const AlphaVec& beta,
                            const QuadratureSpec& spec) {
  Residual res;
  res.spec = spec;
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(box, level);
    CQuaternion lhs{}, rhs{};
    if (!is_zero_field(f) && !is_zero_field(g)) {
      const SeparableField If = value_terms(f, box, q, alpha, s);
      const SeparableField Ig = value_terms(g, box, q, beta, s);
      for (const Face& face : faces(psi)) {
        const double at = face.high ? box.b[face.axis] : box.a[face.axis];
        lhs += separable_product_integral(Ig, face.sigma, If, box, static_cast<int>(face.axis), at, s.order);
      }
      rhs = separable_product_integral(Ig, basis::one, slope_terms(f, box, psi, q, alpha, Side::left, s), box, -1,
                                       0.0, s.order) +
            separable_product_integral(slope_terms(g, box, psi, q, beta, Side::right, s), basis::one, If, box, -1,
                                       0.0, s.order);
    }
    res.record({level, 0.0, s.order, max_abs(lhs - rhs), 0.0}, lhs, rhs);
  }
  return res;
}

SeparableBP borel_pompeiu_of_script_I(const QField& f, const QField& g, const Box4& box, const StructuralSet& psi,
                                      const Point4& q, const Point4& x, const AlphaVec& alpha,
                                      const AlphaVec& beta, const QuadratureSpec& level_spec) {
  const auto mf = cauchy_marginals(box, psi, x, alpha, level_spec);
  std::shared_ptr<const KernelMarginals> mg;
  if (!is_zero_field(g)) mg = cauchy_marginals(box, psi, x, beta, level_spec);
  SeparableBP out;
  out.lhs = assemble(*mf, mg.get(), f, g, box, psi, q, alpha, beta, level_spec);
  out.skipped_fraction = mf->skipped_fraction();
  return out;
}

double FracBorelPompeiu::worst() const {
  if (mode == FracBPMode::direct) return direct.value;
  return std::max(classical.value, identity.value);
}

FracBorelPompeiu verify_frac_borel_pompeiu(const QField& f, const QField& g, const Box4& box,
                                           const StructuralSet& psi, const Point4& q, const Point4& x,
                                           const AlphaVec& alpha, const AlphaVec& beta, const QuadratureSpec& spec,
                                           FracBPMode mode) {
  if (alpha.n != 1 || beta.n != 1)
    throw Error(ErrorKind::InvalidOrder, "fractional Borel-Pompeiu: needs 0 < Re alpha, Re beta < 1");
  if (box.distance_to_boundary(x) < spec.exclusion_for(box))
    throw Error(ErrorKind::OnBoundary, "fractional Borel-Pompeiu: point within the exclusion radius of the boundary");
  for (std::size_t k = 0; k < 4; ++k)
    if (!(x[k] > box.a[k])) throw Error(ErrorKind::DomainError, "fractional Borel-Pompeiu: every x_k must exceed a_k");
  const bool inside = box.contains(x);
  if (!inside) require_segments_clear(box, x);

  const bool has_f = !is_zero_field(f);
  const bool has_g = !is_zero_field(g);
  FracBorelPompeiu out;
  out.mode = mode;
  for (auto* r : {&out.classical, &out.identity, &out.direct}) r->spec = spec;

  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(box, level);
    const double eps = s.exclusion_radius;
    if (mode == FracBPMode::decomposed) {
      const SeparableBP bp = borel_pompeiu_of_script_I(f, g, box, psi, q, x, alpha, beta, s);
      CQuaternion target{};
      if (inside) {
        if (has_f) target += script_I(f, box, q, x, alpha, s);
        if (has_g) target += script_I(g, box, q, x, beta, s);
      }
      out.classical.record({level, eps, s.order, max_abs(bp.lhs - target), bp.skipped_fraction}, bp.lhs, target);

      if (inside) {
        CQuaternion lhs{}, rhs{};
        for (const auto& [F, al, present] : {std::tuple{&f, &alpha, has_f}, std::tuple{&g, &beta, has_g}}) {
          if (!present) continue;
          const DerivativeDecomposition d = decompose_sum_frac_deriv(*F, box, q, x, *al, s);
          lhs += d.direct;
          rhs += d.slices + d.n_one_minus;
        }
        out.identity.record({level, eps, s.order, max_abs(lhs - rhs), 0.0}, lhs, rhs);
      } else {
        // Sigma_i D^{alpha_i} only sees the formula along the segments from x
        // toward a, all exterior: the classical expression must vanish there.
        double worst = 0.0;
        CQuaternion worst_lhs{};
        for (std::size_t i = 0; i < 4; ++i) {
          for (double t : {box.a[i], 0.5 * (box.a[i] + x[i])}) {
            Point4 p = x;
            p[i] = t;
            const SeparableBP e = borel_pompeiu_of_script_I(f, g, box, psi, q, p, alpha, beta, s);
            if (max_abs(e.lhs) >= worst) {
              worst = max_abs(e.lhs);
              worst_lhs = e.lhs;
            }
          }
        }
        out.identity.record({level, eps, s.order, worst, 0.0}, worst_lhs, CQuaternion{});
      }
    } else {
      const auto mf = frac_marginals(box, psi, x, alpha, s);
      std::shared_ptr<const KernelMarginals> mg;
      if (has_g) mg = frac_marginals(box, psi, x, beta, s);
      const CQuaternion lhs = assemble(*mf, mg.get(), f, g, box, psi, q, alpha, beta, s);
      CQuaternion target{};
      if (inside) {
        for (int i = 0; i < 4; ++i) {
          Point4 p = q;
          p[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
          if (has_f) target += f(p);
          if (has_g) target += g(p);
        }
        if (has_f) target += correction_N(f, box, q, x, alpha, GammaConvention::gamma_one_minus_alpha, s);
        if (has_g) target += correction_N(g, box, q, x, beta, GammaConvention::gamma_one_minus_alpha, s);
      }
      double skipped = mf->skipped_fraction();
      if (mg) skipped = std::max(skipped, mg->skipped_fraction());
      out.direct.record({level, eps, s.order, max_abs(lhs - target), skipped}, lhs, target);
    }
  }
  return out;
}

}  // namespace quatfrac
