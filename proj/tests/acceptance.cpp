// Acceptance gate: one line per criterion, tolerances pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "field_oracles.hpp"
#include "quatfrac/error.hpp"
#include "scenarios.hpp"

using namespace quatfrac;

namespace {

constexpr double kRlFundamental = 1e-8;
constexpr double kRlFundamentalSeconds = 5.0;
constexpr double kRlConst = 1e-10;
constexpr double kInvSqrtPi = 0.56418958354775628;  // 1/Gamma(0.5)
constexpr double kStokes = 1e-8;
constexpr double kBorelPompeiu = 5e-3;
constexpr double kBorelPompeiuSeconds = 120.0;
constexpr double kTeodorescu = 1e-3;
constexpr double kItem1 = 1e-6;
constexpr double kItem2 = 1e-6;
constexpr double kItem3 = 1e-5;
constexpr double kItem4 = 1e-6;
constexpr double kFracStokes = 1e-5;
constexpr double kFracBPDecomposed = 1e-4;
constexpr double kFracBPDirect = 5e-2;
constexpr double kSkipped = 0.01;
constexpr double kGammaMargin = 10.0;
constexpr double kHigherOrder = 5e-2;
constexpr double kHigherOrderSeconds = 600.0;

int failures = 0;

void line(int n, bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", n, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Timed {
  cli::Report report;
  double seconds = 0.0;
};

Timed run_scenario(const std::string& id, const std::function<void(cli::ScenarioConfig&)>& tweak = {}) {
  cli::ScenarioConfig c;
  c.id = id;
  if (tweak) tweak(c);
  Timed t;
  const auto t0 = std::chrono::steady_clock::now();
  cli::run(c, t.report);
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

// Final-level residuals of each (field, case) and whether every trace decreases strictly.
struct Traces {
  double worst = 0.0;
  bool decreasing = true;
  double skipped = 0.0;
};
Traces traces(const cli::Report& r, const std::function<bool(const cli::Row&)>& keep) {
  Traces t;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const cli::Row& row = r.rows[i];
    if (!keep(row)) continue;
    t.skipped = std::max(t.skipped, row.skipped_fraction);
    const bool last = i + 1 == r.rows.size() || r.rows[i + 1].field_id != row.field_id ||
                      r.rows[i + 1].qx_id != row.qx_id || r.rows[i + 1].level <= row.level;
    if (row.level > 0 && !(row.residual < r.rows[i - 1].residual)) t.decreasing = false;
    if (last) t.worst = std::max(t.worst, row.residual);
  }
  return t;
}

bool all(const cli::Row&) { return true; }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  const bool interior_direct = argc > 1 && std::string(argv[1]) == "--interior-direct";
  try {
    {
      const Timed t = run_scenario("rl_fundamental");
      const double worst = traces(t.report, all).worst;
      line(1, worst <= kRlFundamental && t.seconds <= kRlFundamentalSeconds, "RL fundamental theorem",
           fmt("max |D^a I^a f - f| = %.2e over corpus slices x 20 pairs, %.1f s", worst, t.seconds));
    }
    {
      const Timed t = run_scenario("rl_const");
      const double worst = traces(t.report, all).worst;
      Field1D one;
      one.evaluate = [](double) { return CQuaternion(1.0); };
      one.derivatives = {[](double) { return CQuaternion{}; }};
      const double at1 = max_abs(rl_derivative(one, 0.0, 0.5, 1.0) - CQuaternion(kInvSqrtPi));
      line(2, worst <= kRlConst && at1 <= kRlConst && t.report.rows.size() >= 10, "RL derivative of a constant",
           fmt("max error %.2e at %.0f points, D^0.5 1 at x = 1 off by %.2e", worst,
               static_cast<double>(t.report.rows.size()), at1));
    }
    {
      const Timed t = run_scenario("stokes_classical", [](cli::ScenarioConfig& c) { c.spec.refine_levels = 1; });
      const double worst = traces(t.report, all).worst;
      line(3, worst <= kStokes && t.report.summary.back().pass, "classical Stokes formula",
           fmt("corpus residual %.2e at order %.0f", worst, cli::ScenarioConfig{}.spec.order));
    }
    {
      const Timed t = run_scenario("bp_classical");
      const Traces in = traces(t.report, [](const cli::Row& r) { return r.qx_id == "p0"; });
      const Traces out = traces(t.report, [](const cli::Row& r) { return r.qx_id == "p1"; });
      line(4,
           in.worst <= kBorelPompeiu && out.worst <= kBorelPompeiu && in.decreasing && out.decreasing &&
               t.seconds <= kBorelPompeiuSeconds,
           "classical Borel-Pompeiu formula, f = 1",
           fmt("interior %.2e, exterior %.2e, strictly decreasing over 3 radii, ", in.worst, out.worst) +
               fmt("%.1f s", t.seconds));
    }
    {
      const Timed t = run_scenario("teodorescu");
      const Traces tr = traces(t.report, all);
      line(5, tr.worst <= kTeodorescu && tr.decreasing, "Teodorescu inversion",
           fmt("finest-level interior residual %.2e over degree-2 and 3 fields", tr.worst) +
               (tr.decreasing ? ", strictly decreasing" : ", not decreasing"));
    }
    {
      const Timed t = run_scenario("prop_items_1_4");
      auto item = [&](const std::string& prefix) {
        return traces(t.report, [&](const cli::Row& r) { return r.field_id.rfind(prefix, 0) == 0; }).worst;
      };
      const double i1 = item("item1:"), i2 = item("item2:"), i4 = item("item4:"), cross = item("item4-cross:");
      line(6, i1 <= kItem1, "fractional operator factors through script_I",
           fmt("max residual %.2e over corpus x 20 pairs", i1));
      line(7, i2 <= kItem2, "frak-I roundtrip at x = q", fmt("max residual %.2e", i2));

      // Item 3 against the closed-form Laplacian of script_I on the polynomial corpus.
      const cli::ScenarioConfig c;
      const auto corpus = polynomial_corpus(c.psi, c.box, c.seed);
      std::mt19937_64 rng(c.seed + 1);
      std::uniform_real_distribution<double> u(0.1, 0.9);
      std::array<double, 4> order{};
      for (std::size_t k = 0; k < 4; ++k) order[k] = 1.0 + c.alpha[k].real();
      double i3 = 0.0;
      for (int s = 0; s < c.samples; ++s) {
        const Point4 q{u(rng), u(rng), u(rng), u(rng)};
        const Point4 x{u(rng), u(rng), u(rng), u(rng)};
        for (const QField& F : corpus) {
          const LaplaceFactorization lf = laplace_factorization(F, c.box, c.psi, q, x, c.alpha, c.spec);
          i3 = std::max(i3, max_abs(lf.lhs - oracle::slice_rl_derivative_sum(F, c.box, q, x, order)));
        }
      }
      line(8, i3 <= kItem3 && item("item3:") <= kItem3, "conjugate operator after the fractional operator",
           fmt("max residual vs closed-form Laplacian of script_I %.2e", i3));
      line(9, i4 <= kItem4, "diagonal semigroup on vanishing squares",
           fmt("max Gamma-ratio residual %.2e; cross terms up to %.2e (reported only)", i4, cross));
    }
    {
      const Timed t = run_scenario("frac_stokes");
      const double worst = traces(t.report, all).worst;
      line(10, worst <= kFracStokes, "fractional Stokes formula", fmt("corpus residual %.2e", worst));
    }
    {
      const Timed t = run_scenario("frac_bp_decomposed");
      auto part = [&](const std::string& qx, const std::string& suffix) {
        return traces(t.report, [&](const cli::Row& r) { return r.qx_id == qx && r.field_id.ends_with(suffix); }).worst;
      };
      const double ci = part("p0", ":classical"), ii = part("p0", ":identity");
      const double ce = part("p1", ":classical"), ie = part("p1", ":identity");
      line(11, std::max({ci, ii, ce, ie}) <= kFracBPDecomposed, "fractional Borel-Pompeiu, decomposed",
           fmt("interior %.2e / %.2e, ", ci, ii) + fmt("exterior %.2e / %.2e", ce, ie));
    }
    {
      const Timed t = run_scenario("frac_bp_direct");
      const Traces tr = traces(t.report, all);
      line(12, tr.worst <= kFracBPDirect && tr.decreasing && tr.skipped <= kSkipped,
           "fractional Borel-Pompeiu, direct (exterior point)",
           fmt("final %.2e, strictly decreasing over 3 levels, skipped measure <= %.2e", tr.worst, tr.skipped));
      if (interior_direct) {
        const Timed in = run_scenario("frac_bp_direct", [](cli::ScenarioConfig& c) {
          c.points = {{0.3, 0.4, 0.6, 0.55}};
          c.fields = {"one"};
        });
        std::string trace;
        for (const cli::Row& r : in.report.rows) trace += fmt(" %.3e", r.residual);
        std::printf("     interior point trace (reported only):%s\n", trace.c_str());
      }
    }
    {
      const Timed t = run_scenario("gamma_resolution");
      const cli::ScenarioSummary& s = t.report.summary.back();
      line(13, s.pass && s.note.rfind("winner: gamma_one_minus_alpha", 0) == 0, "Gamma convention",
           s.note + fmt(" (margin required %.0f)", kGammaMargin));
    }
    {
      const Timed t = run_scenario("iterated_bp");
      const Traces tr = traces(t.report, all);
      line(14, tr.worst <= kHigherOrder && tr.decreasing && t.seconds <= kHigherOrderSeconds,
           "higher-order Borel-Pompeiu on nested boxes",
           fmt("F = 1 and regular field, final %.2e, decreasing, %.0f s", tr.worst, t.seconds));
    }
    {
      const std::string dir = QUATFRAC_ACCEPTANCE_DIR;
      const std::string cfg = dir + "/determinism.json";
      {
        std::ofstream f(cfg);
        f << R"({"scenarios": ["rl_const", "gamma_resolution", "frac_stokes"], "seed": 11, "samples": 5})";
      }
      bool ok = true;
      for (int k = 0; k < 2; ++k) {
        const std::string cmd = std::string(QUATFRAC_CLI) + " run --config " + cfg + " --format csv --out " + dir +
                                "/determinism_" + std::to_string(k) + ".csv 2>/dev/null";
        ok = ok && std::system(cmd.c_str()) == 0;
      }
      const std::string a = slurp(dir + "/determinism_0.csv"), b = slurp(dir + "/determinism_1.csv");
      ok = ok && !a.empty() && a == b;
      line(15, ok, "determinism", fmt("two CLI runs, %.0f bytes each, byte-identical", static_cast<double>(a.size())));
    }
  } catch (const Error& e) {
    std::printf("[FAIL] error: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
