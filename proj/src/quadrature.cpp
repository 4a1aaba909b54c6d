#include "quatfrac/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

namespace quatfrac {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- Box4

Box4 Box4::make(const Point4& a, const Point4& b) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (!std::isfinite(a[k]) || !std::isfinite(b[k]) || !(a[k] < b[k]))
      throw Error(ErrorKind::DomainError, "box: need a_k < b_k on axis " + std::to_string(k));
  }
  Box4 box;
  box.a = a;
  box.b = b;
  return box;
}

double Box4::measure() const {
  double m = 1.0;
  for (std::size_t k = 0; k < 4; ++k) m *= b[k] - a[k];
  return m;
}

double Box4::diameter() const { return distance(a, b); }

bool Box4::contains(const Point4& x) const {
  for (std::size_t k = 0; k < 4; ++k)
    if (!(a[k] < x[k] && x[k] < b[k])) return false;
  return true;
}

bool Box4::in_closure(const Point4& x) const {
  for (std::size_t k = 0; k < 4; ++k)
    if (!(a[k] <= x[k] && x[k] <= b[k])) return false;
  return true;
}

double Box4::distance_to_boundary(const Point4& x) const {
  if (contains(x)) {
    double d = INFINITY;
    for (std::size_t k = 0; k < 4; ++k) d = std::min({d, x[k] - a[k], b[k] - x[k]});
    return d;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double e = std::max({a[k] - x[k], 0.0, x[k] - b[k]});
    s += e * e;
  }
  return std::sqrt(s);
}

bool Box4::strictly_contains(const Box4& inner) const {
  for (std::size_t k = 0; k < 4; ++k)
    if (!(a[k] < inner.a[k] && inner.b[k] < b[k])) return false;
  return true;
}

// ---------------------------------------------------------------- spec

void QuadratureSpec::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::ConfigError, "quadrature: " + what); };
  if (order < 2 || order > 400) bad("order must be in [2, 400]");
  if (refine_levels < 1) bad("refine_levels must be >= 1");
  if (!std::isfinite(exclusion_radius)) bad("exclusion_radius must be finite");
  if (!(fd_step > 0.0 && fd_step < 0.1)) bad("fd_step must be in (0, 0.1)");
  if (!(grading_ratio > 0.0 && grading_ratio < 1.0)) bad("grading_ratio must be in (0, 1)");
  if (grading_layers < 1) bad("grading_layers must be >= 1");
  if (panel_order < 2) bad("panel_order must be >= 2");
  if (mixed_order < 2) bad("mixed_order must be >= 2");
  if (threads < 1) bad("threads must be >= 1");
}

double QuadratureSpec::exclusion_for(const Box4& box) const {
  return exclusion_radius > 0.0 ? exclusion_radius : 1e-2 * box.diameter();
}

QuadratureSpec QuadratureSpec::refined(const Box4& box, int level) const {
  QuadratureSpec s = *this;
  s.exclusion_radius = exclusion_for(box) / std::ldexp(1.0, level);
  s.order = order + 4 * level;
  s.mixed_order = mixed_order + 2 * level;
  return s;
}

// ---------------------------------------------------------------- Gauss rules

void Rule1D::append(const Rule1D& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

namespace {

// P_n^{(al,be)}(x) and P_{n-1}^{(al,be)}(x) by the three-term recurrence.
std::pair<double, double> jacobi_pair(int n, double al, double be, double x) {
  double p0 = 1.0;
  if (n == 0) return {p0, 0.0};
  double p1 = 0.5 * ((al + be + 2.0) * x + (al - be));
  for (int m = 1; m < n; ++m) {
    const double s = 2.0 * m + al + be;
    const double c1 = 2.0 * (m + 1) * (m + al + be + 1) * s;
    const double c2 = (s + 1.0) * ((s + 2.0) * s * x + al * al - be * be);
    const double c3 = 2.0 * (m + al) * (m + be) * (s + 2.0);
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

// d/dx P_n from (2n+al+be)(1-x^2) P_n' = n[(al-be) - (2n+al+be)x] P_n + 2(n+al)(n+be) P_{n-1}.
double jacobi_derivative(int n, double al, double be, double x, double pn, double pm1) {
  const double s = 2.0 * n + al + be;
  return (n * ((al - be) - s * x) * pn + 2.0 * (n + al) * (n + be) * pm1) / (s * (1.0 - x * x));
}

// Gauss-Jacobi on [-1, 1] for the weight (1-x)^al (1+x)^be: Golub-Welsch
// eigenvalues as starting points, Newton on P_n, weights from the closed form.
Rule1D reference_jacobi_uncached(int n, double al, double be) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + al + be;
    diag(k) = k == 0 ? (be - al) / (al + be + 2.0) : (be * be - al * al) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + al + be;
    double b2;
    if (k == 1)
      b2 = 4.0 * (1 + al) * (1 + be) / ((2 + al + be) * (2 + al + be) * (3 + al + be));
    else
      b2 = 4.0 * k * (k + al) * (k + be) * (k + al + be) / (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& guess = es.eigenvalues();

  const double log_c = std::lgamma(n + al + 1.0) + std::lgamma(n + be + 1.0) -
                       std::lgamma(n + al + be + 1.0) - std::lgamma(n + 1.0) +
                       (al + be + 1.0) * std::numbers::ln2;
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::clamp(guess(i), -1.0 + 1e-300, 1.0 - 1e-300);
    double dp = 0.0;
    for (int it = 0; it < 8; ++it) {
      const auto [pn, pm1] = jacobi_pair(n, al, be, x);
      dp = jacobi_derivative(n, al, be, x, pn, pm1);
      const double dx = pn / dp;
      const double xn = x - dx;
      if (!(xn > -1.0 && xn < 1.0)) break;
      x = xn;
      if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    const auto [pn, pm1] = jacobi_pair(n, al, be, x);
    dp = jacobi_derivative(n, al, be, x, pn, pm1);
    r.nodes[i] = x;
    r.weights[i] = std::exp(log_c) / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule1D& reference_jacobi(int n, double al, double be) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(n, al, be);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, reference_jacobi_uncached(n, al, be)).first;
  return it->second;
}

void check_rule_args(int n, double lo, double hi) {
  if (n < 1) throw Error(ErrorKind::InvalidOrder, "quadrature: need at least one node");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw Error(ErrorKind::DomainError, "quadrature: need lo < hi, got [" + fmt(lo) + ", " + fmt(hi) + "]");
}

void check_exponent(double mu) {
  if (!std::isfinite(mu) || mu <= -1.0)
    throw Error(ErrorKind::InvalidExponent, "quadrature: Jacobi exponent must exceed -1, got " + fmt(mu));
}

}  // namespace

Rule1D gauss_legendre(int n, double lo, double hi) {
  check_rule_args(n, lo, hi);
  const Rule1D& ref = reference_jacobi(n, 0.0, 0.0);
  const double h = 0.5 * (hi - lo);
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = lo + h * (ref.nodes[i] + 1.0);
    r.weights[i] = h * ref.weights[i];
  }
  return r;
}

Rule1D gauss_jacobi(int n, double mu, double lo, double hi) {
  check_rule_args(n, lo, hi);
  check_exponent(mu);
  const Rule1D& ref = reference_jacobi(n, mu, 0.0);
  const double h = 0.5 * (hi - lo);
  const double scale = std::pow(h, mu + 1.0);
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = lo + h * (ref.nodes[i] + 1.0);
    r.weights[i] = scale * ref.weights[i];
  }
  return r;
}

Rule1D gauss_jacobi_lower(int n, double nu, double lo, double hi) { return gauss_jacobi2(n, 0.0, nu, lo, hi); }

Rule1D gauss_jacobi2(int n, double mu, double nu, double lo, double hi) {
  check_rule_args(n, lo, hi);
  check_exponent(mu);
  check_exponent(nu);
  const Rule1D& ref = reference_jacobi(n, mu, nu);
  const double h = 0.5 * (hi - lo);
  const double scale = std::pow(h, mu + nu + 1.0);
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = lo + h * (ref.nodes[i] + 1.0);
    r.weights[i] = scale * ref.weights[i];
  }
  return r;
}

Rule1D endpoint_singular_rule(int n, double nu, double lo, double hi) {
  Rule1D r = gauss_jacobi_lower(n, nu, lo, hi);
  for (std::size_t i = 0; i < r.size(); ++i) r.weights[i] /= std::pow(r.nodes[i] - lo, nu);
  return r;
}

Rule1D composite_legendre(std::span<const double> breakpoints, int n) {
  Rule1D r;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p)
    r.append(gauss_legendre(n, breakpoints[p], breakpoints[p + 1]));
  return r;
}

std::vector<double> graded_breakpoints(double lo, double hi, double c, double ratio, double min_width) {
  check_rule_args(1, lo, hi);
  std::vector<double> bp{lo, hi};
  if (!(c >= lo && c <= hi)) return bp;
  const double left = c - lo;
  const double right = hi - c;
  const double near = std::min(left, right) > 0.0 ? std::min(left, right) : std::max(left, right);
  if (c > lo && c < hi) bp.push_back(c);
  // Shrinking toward c: c +- near * r^m, m >= 0.
  for (double w = near; w > min_width; w *= ratio) {
    if (c - w > lo) bp.push_back(c - w);
    if (c + w < hi) bp.push_back(c + w);
  }
  // Growing away from c on the longer side: c +- near / r^m, m >= 1.
  for (double w = near / ratio; w < std::max(left, right); w /= ratio) {
    if (c - w > lo) bp.push_back(c - w);
    if (c + w < hi) bp.push_back(c + w);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(),
                       [&](double x, double y) { return std::abs(x - y) <= 1e-14 * (hi - lo); }),
           bp.end());
  return bp;
}

Rule1D axis_rule(double lo, double hi, const AxisPlan& plan, int points, double ratio, double min_width) {
  std::vector<double> bp = plan.attractor ? graded_breakpoints(lo, hi, *plan.attractor, ratio, min_width)
                                          : std::vector<double>{lo, hi};
  Rule1D r;
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    if (p == 0 && plan.lower_exponent && *plan.lower_exponent != 0.0)
      r.append(endpoint_singular_rule(points, *plan.lower_exponent, bp[0], bp[1]));
    else
      r.append(gauss_legendre(points, bp[p], bp[p + 1]));
  }
  return r;
}

TensorRule legendre_tensor(const Box4& box, int order) {
  TensorRule t;
  for (std::size_t k = 0; k < 4; ++k) t[k] = gauss_legendre(order, box.a[k], box.b[k]);
  return t;
}

// ---------------------------------------------------------------- summation

void CompensatedSum::add_component(std::size_t i, double v) {
  const double t = sum_[i] + v;
  if (std::abs(sum_[i]) >= std::abs(v))
    comp_[i] += (sum_[i] - t) + v;
  else
    comp_[i] += (v - t) + sum_[i];
  sum_[i] = t;
}

void CompensatedSum::add(const CQuaternion& q) {
  for (std::size_t k = 0; k < 4; ++k) {
    add_component(2 * k, q.c[k].real());
    add_component(2 * k + 1, q.c[k].imag());
  }
}

void CompensatedSum::add(const CompensatedSum& other) {
  for (std::size_t i = 0; i < 8; ++i) {
    add_component(i, other.sum_[i]);
    add_component(i, other.comp_[i]);
  }
}

CQuaternion CompensatedSum::value() const {
  CQuaternion q;
  for (std::size_t k = 0; k < 4; ++k)
    q.c[k] = Complex(sum_[2 * k] + comp_[2 * k], sum_[2 * k + 1] + comp_[2 * k + 1]);
  return q;
}

namespace detail {

namespace {
thread_local bool inside_worker = false;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(threads > 1 ? threads : 1, n);
  if (workers <= 1 || inside_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      inside_worker = true;
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void throw_non_finite(const Point4& y) {
  throw Error(ErrorKind::NonFinite, "integrand is not finite at (" + fmt(y[0]) + ", " + fmt(y[1]) + ", " +
                                        fmt(y[2]) + ", " + fmt(y[3]) + ")");
}

}  // namespace detail

// ---------------------------------------------------------------- box / boundary

CQuaternion integrate_box4(const Integrand4& f, const Box4& box, const QuadratureSpec& spec) {
  const TensorRule rule = legendre_tensor(box, spec.order);
  return tensor_sum(rule, [&](const Index4&, const Point4& y) { return f(y); }, spec.threads).value;
}

std::array<Face, 8> faces(const StructuralSet& psi) {
  std::array<Face, 8> out;
  for (std::size_t k = 0; k < 4; ++k) {
    out[2 * k] = Face{k, false, -psi[k]};
    out[2 * k + 1] = Face{k, true, psi[k]};
  }
  return out;
}

CQuaternion integrate_boundary(const Integrand4& f, const Box4& box, const StructuralSet& psi,
                               const QuadratureSpec& spec, Side side) {
  const TensorRule rule = legendre_tensor(box, spec.order);
  return boundary_sum(
             box, psi, rule,
             [&](const Face& face, const Index4&, const Point4& y) {
               const CQuaternion v = f(y);
               return side == Side::left ? face.sigma * v : v * face.sigma;
             },
             spec.threads)
      .value;
}

CQuaternion integrate_boundary_form(const Integrand4& g, const Integrand4& f, const Box4& box,
                                    const StructuralSet& psi, const QuadratureSpec& spec) {
  const TensorRule rule = legendre_tensor(box, spec.order);
  return boundary_sum(
             box, psi, rule,
             [&](const Face& face, const Index4&, const Point4& y) { return g(y) * face.sigma * f(y); },
             spec.threads)
      .value;
}

// ---------------------------------------------------------------- exclusion

TensorRule exclusion_rules(const Box4& box, const Point4& center, double epsilon, const QuadratureSpec& spec,
                           const std::array<std::optional<double>, 4>& lower_exponents) {
  TensorRule t;
  for (std::size_t k = 0; k < 4; ++k) {
    AxisPlan plan;
    if (center[k] >= box.a[k] && center[k] <= box.b[k]) plan.attractor = center[k];
    plan.lower_exponent = lower_exponents[k];
    t[k] = axis_rule(box.a[k], box.b[k], plan, spec.panel_order, spec.grading_ratio,
                     epsilon * spec.grading_ratio);
  }
  return t;
}

ExclusionResult integrate_excluding_ball(const Integrand4& f, const Box4& box, const Point4& center,
                                         double epsilon, const QuadratureSpec& spec) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::DomainError, "exclusion radius must be positive, got " + fmt(epsilon));
  ExclusionResult out;
  out.epsilon = epsilon;
  if (!box.in_closure(center)) {
    const TensorRule rule = legendre_tensor(box, spec.order);
    const TensorSum s = tensor_sum(rule, [&](const Index4&, const Point4& y) { return f(y); }, spec.threads);
    out.value = s.value;
    out.nodes = s.nodes;
    return out;
  }
  const TensorRule rule = exclusion_rules(box, center, epsilon, spec);
  const TensorSum s = tensor_sum(
      rule,
      [&](const Index4&, const Point4& y) -> CQuaternion {
        if (distance(y, center) < epsilon) return CQuaternion{};
        return f(y);
      },
      spec.threads);
  out.value = s.value;
  out.nodes = s.nodes;
  return out;
}

}  // namespace quatfrac
