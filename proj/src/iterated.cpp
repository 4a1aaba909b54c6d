#include "quatfrac/iterated.hpp"

#include <cmath>
#include <string>

#include "quatfrac/error.hpp"

namespace quatfrac {

namespace {

bool is_zero_field(const QField& f) { return !f.value; }

Point4 on_axis(Point4 p, std::size_t j, double t) {
  p[j] = t;
  return p;
}

// <A, psi> = sum A_k psi_k, bilinear.
Complex component(const CQuaternion& A, const Quaternion& p) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) s += A.c[k] * p.c[k];
  return s;
}

QField fueter_step(const QField& G, const StructuralSet& psi, Side side) {
  if (!G.has_derivatives())
    throw Error(ErrorKind::MissingDerivative, "iterated Fueter operator: field '" + G.id + "' has no analytic partials");
  QField out;
  out.id = (side == Side::left ? "psiD[" : "psiDr[") + G.id + "]";
  out.domain = G.domain;
  out.value = [G, psi, side](const Point4& x) {
    CQuaternion s{};
    for (int k = 0; k < 4; ++k) {
      const int ax[1] = {k};
      const CQuaternion d = G.deriv(x, ax);
      s += side == Side::left ? psi[static_cast<std::size_t>(k)] * d : d * psi[static_cast<std::size_t>(k)];
    }
    return s;
  };
  out.deriv = [G, psi, side](const Point4& x, std::span<const int> axes) {
    std::vector<int> ax(axes.begin(), axes.end());
    ax.push_back(0);
    CQuaternion s{};
    for (int k = 0; k < 4; ++k) {
      ax.back() = k;
      const CQuaternion d = G.deriv(x, ax);
      s += side == Side::left ? psi[static_cast<std::size_t>(k)] * d : d * psi[static_cast<std::size_t>(k)];
    }
    return s;
  };
  return out;
}

struct Node {
  Point4 y{};
  double w = 0.0;
};

std::vector<Node> box_nodes(const Box4& box, int order) {
  const TensorRule r = legendre_tensor(box, order);
  std::vector<Node> out;
  out.reserve(r[0].size() * r[1].size() * r[2].size() * r[3].size());
  for (std::size_t i0 = 0; i0 < r[0].size(); ++i0)
    for (std::size_t i1 = 0; i1 < r[1].size(); ++i1)
      for (std::size_t i2 = 0; i2 < r[2].size(); ++i2)
        for (std::size_t i3 = 0; i3 < r[3].size(); ++i3)
          out.push_back({{r[0].nodes[i0], r[1].nodes[i1], r[2].nodes[i2], r[3].nodes[i3]},
                         r[0].weights[i0] * r[1].weights[i1] * r[2].weights[i2] * r[3].weights[i3]});
  return out;
}

struct FaceNode {
  Point4 y{};
  double w = 0.0;
  std::size_t face = 0;
};

std::vector<FaceNode> face_nodes(const Box4& box, const StructuralSet& psi, int order) {
  const TensorRule base = legendre_tensor(box, order);
  const auto fs = faces(psi);
  std::vector<FaceNode> out;
  for (std::size_t f = 0; f < 8; ++f) {
    TensorRule r = base;
    r[fs[f].axis] = Rule1D{{fs[f].high ? box.b[fs[f].axis] : box.a[fs[f].axis]}, {1.0}};
    for (std::size_t i0 = 0; i0 < r[0].size(); ++i0)
      for (std::size_t i1 = 0; i1 < r[1].size(); ++i1)
        for (std::size_t i2 = 0; i2 < r[2].size(); ++i2)
          for (std::size_t i3 = 0; i3 < r[3].size(); ++i3)
            out.push_back({{r[0].nodes[i0], r[1].nodes[i1], r[2].nodes[i2], r[3].nodes[i3]},
                           r[0].weights[i0] * r[1].weights[i1] * r[2].weights[i2] * r[3].weights[i3], f});
  }
  return out;
}

// int_J K(y - z) dy. K(u) = -(1/4pi^2) sum_k conj(psi_k) d_k |u|^-2, so the
// volume integral is a sum of face integrals of |y - z|^-2.
CQuaternion cauchy_volume(const std::vector<FaceNode>& fn, const std::array<Face, 8>& fs, const StructuralSet& psi,
                          const Point4& z) {
  std::array<double, 8> acc{};
  for (const FaceNode& n : fn) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) r2 += (n.y[k] - z[k]) * (n.y[k] - z[k]);
    acc[n.face] += n.w / r2;
  }
  CQuaternion s{};
  for (std::size_t f = 0; f < 8; ++f) {
    const double sign = fs[f].high ? 1.0 : -1.0;
    s += CQuaternion(conj(psi[fs[f].axis])) * Complex(sign * acc[f]);
  }
  return s * Complex(-1.0 / (4.0 * M_PI * M_PI));
}

// Sum of K(y_i - z) v_i over stored nodes. K(u) = sum_k conj(psi_k) u_k / (2 pi^2 |u|^4),
// so the quaternion products are taken once per axis after the scalar sums.
struct KernelSum {
  std::vector<Point4> y;
  std::vector<std::array<double, 8>> v;  // real and imaginary parts of v_i
  std::vector<double> w;                 // plain weights, for the subtracted value

  void add(const Point4& p, const CQuaternion& value, double weight) {
    y.push_back(p);
    std::array<double, 8> a{};
    for (std::size_t c = 0; c < 4; ++c) {
      a[2 * c] = value.c[c].real();
      a[2 * c + 1] = value.c[c].imag();
    }
    v.push_back(a);
    w.push_back(weight);
  }

  // sum_i K(y_i - z) (v_i - w_i sub); nodes closer than 1e-12 to z are left out.
  [[nodiscard]] CQuaternion apply(const StructuralSet& psi, const Point4& z, const CQuaternion* sub) const {
    std::array<std::array<double, 8>, 4> acc{};
    std::array<double, 4> wsum{};
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double u0 = y[i][0] - z[0], u1 = y[i][1] - z[1], u2 = y[i][2] - z[2], u3 = y[i][3] - z[3];
      const double r2 = u0 * u0 + u1 * u1 + u2 * u2 + u3 * u3;
      if (r2 < 1e-24) continue;
      const double inv = 1.0 / (r2 * r2);
      const double s[4] = {u0 * inv, u1 * inv, u2 * inv, u3 * inv};
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t c = 0; c < 8; ++c) acc[k][c] += s[k] * v[i][c];
        wsum[k] += s[k] * w[i];
      }
    }
    CQuaternion out{};
    for (std::size_t k = 0; k < 4; ++k) {
      CQuaternion a{};
      for (std::size_t c = 0; c < 4; ++c) a.c[c] = Complex(acc[k][2 * c], acc[k][2 * c + 1]);
      if (sub) a -= *sub * Complex(wsum[k]);
      out += conj(psi[k]) * a;
    }
    return out * Complex(1.0 / (2.0 * M_PI * M_PI));
  }
};

// Inner Borel-Pompeiu pieces on J1 for h = psiD F and its derivative g = psiD h:
// boundary(z) = int_{dJ1} K(y - z) sigma h, volume(z) = int_{J1} K(y - z) g with
// g(z) subtracted under the integral and added back through cauchy_volume.
struct Inner {
  KernelSum bnd;
  KernelSum vol;
  std::vector<FaceNode> s_nodes;
  std::array<Face, 8> fs{};
  const StructuralSet* psi = nullptr;

  [[nodiscard]] CQuaternion boundary(const Point4& z) const { return bnd.apply(*psi, z, nullptr); }
  [[nodiscard]] CQuaternion volume(const Point4& z, const CQuaternion& gz) const {
    return vol.apply(*psi, z, &gz) + cauchy_volume(s_nodes, fs, *psi, z) * gz;
  }
};

ChainTerms single_box_terms(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& x,
                            const QuadratureSpec& s) {
  QField zero;
  zero.domain = box;
  const BorelPompeiuTerms t = borel_pompeiu_terms(F, zero, box, psi, x, s);
  ChainTerms out;
  out.boundary = t.boundary;
  out.mixed_volume = -t.volume;
  out.recursive = t.boundary - t.volume;
  return out;
}

void require_depth(const NestedBoxes& nested, std::size_t lo, std::size_t hi, const char* what) {
  if (nested.depth() < lo || nested.depth() > hi)
    throw Error(ErrorKind::ConfigError, std::string(what) + ": unsupported number of nested boxes (" +
                                            std::to_string(nested.depth()) + ")");
}

}  // namespace

NestedBoxes NestedBoxes::make(std::vector<Box4> boxes) {
  if (boxes.empty()) throw Error(ErrorKind::ConfigError, "NestedBoxes: no boxes");
  for (std::size_t k = 0; k + 1 < boxes.size(); ++k)
    if (!boxes[k].strictly_contains(boxes[k + 1]))
      throw Error(ErrorKind::NestingViolation,
                  "NestedBoxes: box " + std::to_string(k + 2) + " is not strictly inside box " + std::to_string(k + 1));
  NestedBoxes n;
  n.boxes = std::move(boxes);
  return n;
}

QField fueter_power_field(const QField& F, const StructuralSet& psi, int n, Side side) {
  if (n < 0) throw Error(ErrorKind::InvalidOrder, "fueter_power_field: negative power");
  QField out = F;
  for (int k = 0; k < n; ++k) out = fueter_step(out, psi, side);
  return out;
}

CQuaternion iterated_fueter(const QField& F, const StructuralSet& psi, int n, const Point4& x, Side side) {
  if (!F.domain.in_closure(x)) throw Error(ErrorKind::OutsideDomain, "iterated_fueter: x outside the field's box");
  return fueter_power_field(F, psi, n, side).value(x);
}

CQuaternion iterated_frac_fueter(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                                 const Point4& x, const AlphaVec& alpha, Side side, const QuadratureSpec& spec) {
  for (std::size_t k = 0; k < 4; ++k)
    if (!(x[k] > box.a[k])) throw Error(ErrorKind::DomainError, "iterated_frac_fueter: every x_k must exceed a_k");
  const QField G = script_I_field(F, box, q, alpha.complement(alpha.n), spec);
  return fueter_power_field(G, psi, alpha.n, side).value(x);
}

LaplaceFactorization laplace_factorization(const QField& F, const Box4& box, const StructuralSet& psi,
                                           const Point4& q, const Point4& x, const AlphaVec& alpha,
                                           const QuadratureSpec& spec) {
  if (alpha.n != 1) throw Error(ErrorKind::InvalidOrder, "laplace_factorization: needs 0 < Re alpha < 1");
  for (std::size_t k = 0; k < 4; ++k)
    if (!(x[k] > box.a[k])) throw Error(ErrorKind::DomainError, "laplace_factorization: every x_k must exceed a_k");
  const StructuralSet bar = psi.conjugated();
  const QField D = fueter_power_field(script_I_field(F, box, q, alpha.complement(1), spec), psi, 1);
  LaplaceFactorization out;
  out.lhs = fueter_power_field(D, bar, 1).value(x);
  for (std::size_t k = 0; k < 4; ++k)
    out.rhs += partial_rl_derivative(F, box, static_cast<int>(k), alpha[k] + 1.0, q, x[k], spec);
  return out;
}

InversionCheck inversion_check_T(const QField& F, const Box4& box, const StructuralSet& psi, const Point4& q,
                                 const Point4& x, const AlphaVec& alpha, const QuadratureSpec& spec) {
  if (alpha.n != 1 && alpha.n != 2)
    throw Error(ErrorKind::InvalidOrder, "inversion_check_T: implemented for n = 1 and n = 2");
  InversionCheck out;
  for (Residual* r : {&out.corrected, &out.printed, &out.slices}) r->spec = spec;
  std::array<Point4, 4> p{};
  for (std::size_t j = 0; j < 4; ++j) p[j] = on_axis(q, j, x[j]);

  if (is_zero_field(F)) {
    for (int level = 0; level < spec.refine_levels; ++level)
      for (Residual* r : {&out.corrected, &out.printed, &out.slices})
        r->record({level, 0.0, spec.order, 0.0, 0.0}, {}, {});
    return out;
  }

  if (alpha.n == 1) {
    // T^0 = id: frak-I of F itself.
    const RoundTrip rt = roundtrip_frakI(F, box, psi, q, x, alpha, spec);
    CQuaternion corrected{}, printed{};
    for (std::size_t j = 0; j < 4; ++j) {
      const CQuaternion v = F(p[j]);
      corrected += (v + psi[j] * conj(v) * psi[j]) * Complex(0.5);
      printed += (v + conj(v) * psi[j]) * Complex(0.5);
    }
    for (int level = 0; level < spec.refine_levels; ++level) {
      out.corrected.record({level, 0.0, spec.order, max_abs(rt.matched - corrected), 0.0}, rt.matched, corrected);
      out.printed.record({level, 0.0, spec.order, max_abs(rt.matched - printed), 0.0}, rt.matched, printed);
      out.slices.record({level, 0.0, spec.order, max_abs(rt.matched - corrected), 0.0}, rt.matched, corrected);
    }
    return out;
  }

  // n = 2, G = T[F]. d_k G(p) = T[d_k F](p) + int_{y_k = a_k} K(p - y) F - int_{y_k = b_k} K(p - y) F.
  for (std::size_t j = 0; j < 4; ++j)
    if (!box.contains(p[j])) throw Error(ErrorKind::OutsideDomain, "inversion_check_T: slice point outside the box");
  const auto fs = faces(psi);
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(box, level);
    const std::vector<FaceNode> fn = face_nodes(box, psi, s.order);
    std::array<std::array<CQuaternion, 4>, 4> dG{};  // dG[j][k] = d_k G(p_j)
    for (std::size_t k = 0; k < 4; ++k) {
      QField dk;
      dk.id = "d" + std::to_string(k) + F.id;
      dk.domain = F.domain;
      dk.value = [&F, k, &s](const Point4& y) { return F.partial(y, static_cast<int>(k), s.fd_step); };
      for (std::size_t j = 0; j < 4; ++j) {
        CompensatedSum faces_k;
        for (const FaceNode& n : fn) {
          if (fs[n.face].axis != k) continue;
          const double sign = fs[n.face].high ? -1.0 : 1.0;
          faces_k.add(cauchy_kernel(psi, p[j], n.y) * (F(n.y) * Complex(sign * n.w)));
        }
        dG[j][k] = teodorescu(dk, box, psi, p[j], s) + faces_k.value();
      }
    }
    CQuaternion lhs{}, corrected{}, printed{}, slices{};
    for (std::size_t j = 0; j < 4; ++j) {
      const Quaternion pj = psi[j];
      lhs += CQuaternion(pj * pj) * component(dG[j][j], pj);
      CQuaternion dconj{};
      for (std::size_t k = 0; k < 4; ++k) dconj += psi[k] * conj(dG[j][k]);
      const CQuaternion v = F(p[j]);
      corrected += (v + pj * dconj * pj) * Complex(0.5);
      printed += (v + dconj * pj) * Complex(0.5);
      slices += (pj * dG[j][j] + pj * pj * conj(dG[j][j]) * pj) * Complex(0.5);
    }
    const double eps = s.exclusion_radius;
    out.corrected.record({level, eps, s.order, max_abs(lhs - corrected), 0.0}, lhs, corrected);
    out.printed.record({level, eps, s.order, max_abs(lhs - printed), 0.0}, lhs, printed);
    out.slices.record({level, eps, s.order, max_abs(lhs - slices), 0.0}, lhs, slices);
  }
  return out;
}

ChainTerms bp_higher_order_terms(const QField& F, const NestedBoxes& nested, const StructuralSet& psi,
                                 const Point4& x, const QuadratureSpec& s, const OuterKernel& k) {
  require_depth(nested, 1, 2, "higher-order Borel-Pompeiu");
  if (nested.depth() == 1) {
    if (k) throw Error(ErrorKind::ConfigError, "higher-order Borel-Pompeiu: a custom kernel needs two boxes");
    return single_box_terms(F, nested.inner(), psi, x, s);
  }
  const Box4& J1 = nested.outer();
  const Box4& J2 = nested.inner();
  const int m = s.mixed_order;
  const QField h = fueter_power_field(F, psi, 1);
  const QField g = fueter_power_field(F, psi, 2);
  const auto fs = faces(psi);

  Inner in;
  in.psi = &psi;
  in.fs = fs;
  in.s_nodes = face_nodes(J1, psi, m);
  for (const FaceNode& n : in.s_nodes) in.bnd.add(n.y, fs[n.face].sigma * (h(n.y) * Complex(n.w)), 0.0);
  for (const Node& n : box_nodes(J1, m)) in.vol.add(n.y, g(n.y) * Complex(n.w), n.w);

  ChainTerms out;
  double skipped = 0.0, total = 0.0;

  // Outer boundary term.
  {
    CompensatedSum acc;
    for (const FaceNode& n : face_nodes(J2, psi, s.order)) {
      total += n.w;
      std::optional<CQuaternion> kv;
      if (k) {
        kv = k(n.y);
      } else {
        kv = CQuaternion(cauchy_kernel(psi, n.y, x));
      }
      if (!kv) {
        skipped += n.w;
        continue;
      }
      acc.add(*kv * (fs[n.face].sigma * (F(n.y) * Complex(n.w))));
    }
    out.boundary = acc.value();
  }

  // Outer volume: every node carries the inner expression at y2.
  const std::vector<Node> outer = box_nodes(J2, m);
  const bool subtract = !k && J1.contains(x);
  CQuaternion bx{}, cx{};
  if (subtract) {
    bx = in.boundary(x);
    cx = in.volume(x, g(x));
  }
  std::vector<CQuaternion> kb(outer.size()), kc(outer.size()), ke(outer.size());
  std::vector<double> skip(outer.size(), 0.0);
  detail::parallel_for(outer.size(), s.threads, [&](std::size_t i) {
    const Point4& z = outer[i].y;
    std::optional<CQuaternion> kv;
    if (k) {
      kv = k(z);
    } else if (distance(z, x) > 1e-12) {
      kv = CQuaternion(cauchy_kernel(psi, z, x));
    }
    if (!kv) {
      skip[i] = outer[i].w;
      return;
    }
    const CQuaternion b = in.boundary(z) - bx;
    const CQuaternion c = in.volume(z, g(z)) - cx;
    const CQuaternion kw = *kv * Complex(outer[i].w);
    kb[i] = kw * b;
    kc[i] = kw * c;
    ke[i] = kw * (b - c);
  });
  CompensatedSum sb, sc, se;
  double vol_total = 0.0, vol_skipped = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    sb.add(kb[i]);
    sc.add(kc[i]);
    se.add(ke[i]);
    vol_total += outer[i].w;
    vol_skipped += skip[i];
  }
  if (subtract) {
    const CQuaternion s2 = cauchy_volume(face_nodes(J2, psi, s.order), fs, psi, x);
    sb.add(s2 * bx);
    sc.add(s2 * cx);
    se.add(s2 * (bx - cx));
  }
  out.mixed_boundary = sb.value();
  out.mixed_volume = sc.value();
  out.recursive = out.boundary - se.value();
  out.skipped_fraction = std::max(total > 0.0 ? skipped / total : 0.0, vol_total > 0.0 ? vol_skipped / vol_total : 0.0);
  return out;
}

Residual verify_bp_higher_order(const QField& F, const NestedBoxes& nested, const StructuralSet& psi,
                                const Point4& x, const QuadratureSpec& spec) {
  require_depth(nested, 1, 2, "higher-order Borel-Pompeiu");
  const Box4& inner = nested.inner();
  if (inner.distance_to_boundary(x) < spec.exclusion_for(inner))
    throw Error(ErrorKind::OnBoundary, "higher-order Borel-Pompeiu: point within the exclusion radius of the boundary");
  const CQuaternion target = inner.contains(x) ? F(x) : CQuaternion{};
  Residual res;
  res.spec = spec;
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(inner, level);
    const ChainTerms t = bp_higher_order_terms(F, nested, psi, x, s);
    res.record({level, s.exclusion_radius, s.mixed_order, max_abs(t.recursive - target), t.skipped_fraction},
               t.recursive, target);
  }
  return res;
}

double FracBPHigher::worst() const {
  if (mode == FracBPMode::direct) return direct.value;
  return std::max(chain.value, identity.value);
}

FracBPHigher verify_frac_bp_higher(const QField& F, const NestedBoxes& nested, const Box4& box,
                                   const StructuralSet& psi, const Point4& q, const Point4& x, const AlphaVec& alpha,
                                   const QuadratureSpec& spec, FracBPMode mode) {
  require_depth(nested, 2, 2, "fractional higher-order Borel-Pompeiu");
  if (alpha.n != 1)
    throw Error(ErrorKind::InvalidOrder, "fractional higher-order Borel-Pompeiu: needs 0 < Re alpha < 1");
  const Box4& J1 = nested.outer();
  const Box4& J2 = nested.inner();
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(box.a[k] < J1.a[k]))
      throw Error(ErrorKind::DomainError,
                  "fractional higher-order Borel-Pompeiu: the base corner must lie strictly below the outer box");
    if (!(x[k] > box.a[k]))
      throw Error(ErrorKind::DomainError, "fractional higher-order Borel-Pompeiu: every x_k must exceed a_k");
  }
  if (J2.distance_to_boundary(x) < spec.exclusion_for(J2))
    throw Error(ErrorKind::OnBoundary,
                "fractional higher-order Borel-Pompeiu: point within the exclusion radius of the boundary");
  const bool inside = J2.contains(x);
  if (!inside) {
    for (std::size_t i = 0; i < 4; ++i) {
      bool clear = false;
      for (std::size_t k = 0; k < 4; ++k)
        if (k != i && (x[k] < J2.a[k] || x[k] > J2.b[k])) clear = true;
      if (!clear)
        throw Error(ErrorKind::DomainError,
                    "fractional higher-order Borel-Pompeiu: for an exterior point every derivative segment must "
                    "avoid the closed inner box");
    }
  }

  FracBPHigher out;
  out.mode = mode;
  for (auto* r : {&out.chain, &out.identity, &out.direct}) r->spec = spec;
  for (int level = 0; level < spec.refine_levels; ++level) {
    const QuadratureSpec s = spec.refined(J2, level);
    const double eps = s.exclusion_radius;
    const QField G = script_I_field(F, box, q, alpha, s);
    if (mode == FracBPMode::decomposed) {
      const ChainTerms t = bp_higher_order_terms(G, nested, psi, x, s);
      const CQuaternion target = inside ? G(x) : CQuaternion{};
      out.chain.record({level, eps, s.mixed_order, max_abs(t.recursive - target), t.skipped_fraction}, t.recursive,
                       target);
      if (inside) {
        const DerivativeDecomposition d = decompose_sum_frac_deriv(F, box, q, x, alpha, s);
        const CQuaternion rhs = d.slices + d.n_one_minus;
        out.identity.record({level, eps, s.mixed_order, max_abs(d.direct - rhs), 0.0}, d.direct, rhs);
      } else {
        // The chain must vanish along the segments from x toward a.
        double worst = 0.0;
        CQuaternion worst_lhs{};
        for (std::size_t i = 0; i < 4; ++i) {
          const Point4 p = on_axis(x, i, 0.5 * (box.a[i] + x[i]));
          const ChainTerms e = bp_higher_order_terms(G, nested, psi, p, s);
          if (max_abs(e.recursive) >= worst) {
            worst = max_abs(e.recursive);
            worst_lhs = e.recursive;
          }
        }
        out.identity.record({level, eps, s.mixed_order, worst, 0.0}, worst_lhs, CQuaternion{});
      }
    } else {
      const FracKernelRules rules = FracKernelRules::make(alpha, frac_kernel_points(s));
      const OuterKernel kernel = [&](const Point4& y) { return frac_kernel_eval(psi, box, y, x, rules, eps); };
      const ChainTerms t = bp_higher_order_terms(G, nested, psi, x, s, kernel);
      CQuaternion target{};
      if (inside) {
        for (std::size_t i = 0; i < 4; ++i) target += F(on_axis(q, i, x[i]));
        target += correction_N(F, box, q, x, alpha, GammaConvention::gamma_one_minus_alpha, s);
      }
      out.direct.record({level, eps, s.mixed_order, max_abs(t.recursive - target), t.skipped_fraction}, t.recursive,
                        target);
    }
  }
  return out;
}

}  // namespace quatfrac
