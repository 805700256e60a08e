// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails.  Stated runtime budgets are enforced.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stein/beta_stein.hpp"
#include "stein/oracle_exact.hpp"
#include "stein/polya.hpp"
#include "stein/test_functions.hpp"

using namespace stein;
using beta::Beta01;
using beta::BetaSym;
using polya::UrnConfig;

namespace {

constexpr double kSymGrid[4] = {-0.5, 0.0, 1.0, 2.5};
constexpr double kUnitGrid[4] = {0.5, 1.0, 2.0, 3.5};

struct Harness {
  int failures = 0;

  void criterion(int id, const std::string& name, double budget_seconds,
                 const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = body(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && elapsed > budget_seconds) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("runtime budget exceeded");
    }
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), elapsed, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
};

TestFunction make_c2(const char* name, RealFn h, double nd1, double nd2) {
  TestFunction tf;
  tf.name = name;
  tf.h = std::move(h);
  tf.cls = FnClass::C2;
  tf.norm_d1 = nd1;
  tf.norm_d2 = nd2;
  return tf;
}

bool polya_exact_identities(std::string& detail) {
  for (long long r = 1; r <= 3; ++r)
    for (long long w = 1; w <= 3; ++w)
      for (long long c = 1; c <= 3; ++c)
        for (long long n = 1; n <= 8; ++n) {
          const UrnConfig u{r, w, c, n};
          const oracle::Enumeration e = oracle::enumerate_urn(u);
          const std::vector<Rational> opmf = oracle::oracle_pmf(e);
          const polya::PolyaPmf pm = polya::pmf(u);
          const polya::PairMomentTable closed = polya::pair_moments(u);
          const polya::PairMomentTable brute = oracle::oracle_pair_moments(e, u);
          for (long long k = 0; k <= n; ++k) {
            if (pm.probs[k] != opmf[k] || closed.m1[k] != brute.m1[k] ||
                closed.m2[k] != brute.m2[k]) {
              std::ostringstream os;
              os << "mismatch at r=" << r << " w=" << w << " c=" << c << " n=" << n
                 << " k=" << k;
              detail = os.str();
              return false;
            }
          }
        }
  return true;
}

bool mixture_identity(std::string& detail) {
  const long long configs[3][3] = {{1, 1, 1}, {2, 3, 1}, {3, 1, 2}};
  double worst = 0.0;
  for (const auto& cfg : configs)
    for (long long n : {5LL, 10LL, 50LL}) {
      const double dev = polya::mixture_check({cfg[0], cfg[1], cfg[2], n});
      worst = std::max(worst, dev);
      if (dev > 1e-8) {
        std::ostringstream os;
        os << "deviation " << dev << " at r=" << cfg[0] << " w=" << cfg[1]
           << " c=" << cfg[2] << " n=" << n;
        detail = os.str();
        return false;
      }
    }
  std::ostringstream os;
  os << "max deviation " << worst;
  detail = os.str();
  return true;
}

bool rate_reproduction(std::string& detail) {
  const auto fn = lookup_test_fn("x2", 0.0, 1.0);
  const beta::SteinConstants consts = beta::constants_01({1.0, 1.0});
  std::vector<long long> ns;
  for (long long n = 16; n <= 4096; n *= 2) ns.push_back(n);
  const auto rows = polya::rate_table({1, 1, 1, 0}, ns, fn, consts);
  for (const auto& row : rows) {
    if (std::abs(row.exact_error * 6.0 * row.n - 1.0) > 1e-12) {
      detail = "exact_error differs from 1/(6n) at n=" + std::to_string(row.n);
      return false;
    }
    if (row.bound < row.exact_error) {
      detail = "bound fails to dominate at n=" + std::to_string(row.n);
      return false;
    }
  }
  const double slope = rows.back().slope_running;
  std::ostringstream os;
  os << "slope " << slope;
  detail = os.str();
  return slope >= -1.02 && slope <= -0.98;
}

bool eta_identity(std::string& detail) {
  double worst_ratio = 0.0;
  for (double al : kSymGrid)
    for (double be : kSymGrid) {
      const Profile pr = build_profile(beta::make_target_sym({al, be}), 1024);
      double max_I = 0.0, max_dev = 0.0;
      for (size_t i = 0; i < pr.grid().size(); ++i) {
        const double x = pr.grid()[i];
        max_I = std::max(max_I, std::abs(pr.I_vals()[i + 1]));
        max_dev = std::max(
            max_dev, std::abs(pr.I_vals()[i + 1] - (1.0 - x * x) * pr.spec().p(x)));
      }
      worst_ratio = std::max(worst_ratio, max_dev / (1e-8 * max_I));
      if (max_dev > 1e-8 * max_I) {
        std::ostringstream os;
        os << "deviation " << max_dev << " vs cap " << 1e-8 * max_I << " at alpha=" << al
           << " beta=" << be;
        detail = os.str();
        return false;
      }
    }
  std::ostringstream os;
  os << "worst dev/cap " << worst_ratio;
  detail = os.str();
  return true;
}

bool characterization_residuals(std::string& detail) {
  struct G {
    double (*g)(double);
    double (*gd)(double);
  };
  const G gs[6] = {
      {[](double) { return 1.0; }, [](double) { return 0.0; }},
      {[](double x) { return x; }, [](double) { return 1.0; }},
      {[](double x) { return x * x; }, [](double x) { return 2.0 * x; }},
      {[](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }},
      {[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }},
      {[](double x) { return std::cos(2.0 * x); },
       [](double x) { return -2.0 * std::sin(2.0 * x); }}};
  for (double al : kSymGrid)
    for (double be : kSymGrid) {
      const TargetSpec spec = beta::make_target_sym({al, be});
      const Profile pr = build_profile(spec, 512);
      for (const G& g : gs) {
        const double res = stein_residual(pr, g.g, g.gd);
        if (res > 1e-8) {
          std::ostringstream os;
          os << "residual " << res << " at alpha=" << al << " beta=" << be;
          detail = os.str();
          return false;
        }
      }
      TargetSpec tilted = spec;
      const RealFn base = spec.p;
      const double norm = 1.0 + 0.1 * pr.mean();
      tilted.p = [base, norm](double x) { return base(x) * (1.0 + 0.1 * x) / norm; };
      tilted.mean.reset();
      const Profile pt = build_profile(std::move(tilted), 512, false);
      const double res =
          stein_residual(pt, [](double x) { return x; }, [](double) { return 1.0; });
      if (res < 1e-3) {
        std::ostringstream os;
        os << "tilted residual only " << res << " at alpha=" << al << " beta=" << be;
        detail = os.str();
        return false;
      }
    }
  return true;
}

bool solution_norm_bounds(std::string& detail) {
  const TestFunction hs[3] = {
      make_c2("acc_h_x", [](double x) { return x; }, 1.0, 0.0),
      make_c2("acc_h_x2", [](double x) { return x * x; }, 2.0, 2.0),
      make_c2("acc_h_sin3", [](double x) { return std::sin(3.0 * x); }, 3.0, 9.0)};
  for (double al : kSymGrid)
    for (double be : kSymGrid) {
      const Profile pr = build_profile(beta::make_target_sym({al, be}), 512);
      for (const TestFunction& h : hs) {
        double sup = 0.0;
        for (int i = 1; i < 512; ++i)
          sup = std::max(sup, std::abs(solve_stein(pr, h, -1.0 + i / 256.0)));
        const double cap = *h.norm_d1 / (al + be + 2.0) + 1e-8;
        if (sup > cap) {
          std::ostringstream os;
          os << "sym sup " << sup << " > " << cap << " at alpha=" << al
             << " beta=" << be << " h=" << h.name;
          detail = os.str();
          return false;
        }
      }
    }
  for (double a : kUnitGrid)
    for (double b : kUnitGrid) {
      const Profile pr = build_profile(beta::make_target_01({a, b}), 512);
      for (const TestFunction& h : hs) {
        double sup = 0.0;
        for (int i = 1; i < 512; ++i)
          sup = std::max(sup, std::abs(solve_stein(pr, h, i / 512.0)));
        const double cap = 2.0 * *h.norm_d1 / (a + b) + 1e-8;
        if (sup > cap) {
          std::ostringstream os;
          os << "unit sup " << sup << " > " << cap << " at a=" << a << " b=" << b
             << " h=" << h.name;
          detail = os.str();
          return false;
        }
      }
    }
  return true;
}

bool kolmogorov_solutions(std::string& detail) {
  double worst = 0.0;
  auto check_family = [&](const TargetSpec& spec, double lo, double hi,
                          std::initializer_list<double> zs, const char* label) {
    const Profile pr = build_profile(spec, 512);
    for (double z : zs) {
      const double Fz = pr.cdf(z);
      // closed-form reference: I(z) = eta(z) p(z)
      const double ref = Fz * (1.0 - Fz) / ((z - lo) * (hi - z) * spec.p(z));
      double sup = 0.0;
      for (int i = 1; i < 2048; ++i)
        sup = std::max(sup, solve_kolmogorov(pr, z, lo + (hi - lo) * i / 2048.0));
      const double dev = std::abs(sup - ref);
      worst = std::max(worst, dev);
      if (dev > 1e-6) {
        std::ostringstream os;
        os << label << " z=" << z << " grid sup " << sup << " vs " << ref;
        detail = os.str();
        return false;
      }
    }
    return true;
  };
  for (double al : kSymGrid)
    for (double be : kSymGrid)
      if (!check_family(beta::make_target_sym({al, be}), -1.0, 1.0, {-0.5, 0.0, 0.5},
                        "sym"))
        return false;
  for (double a : kUnitGrid)
    for (double b : kUnitGrid)
      if (!check_family(beta::make_target_01({a, b}), 0.0, 1.0, {0.25, 0.5, 0.75},
                        "unit"))
        return false;
  std::ostringstream os;
  os << "worst |sup - ref| " << worst;
  detail = os.str();
  return true;
}

bool constant_certification(std::string& detail) {
  // S approaches its closed-form limits at distance 1e-5 from the edges.
  for (double al : kSymGrid)
    for (double be : kSymGrid) {
      const BetaSym p{al, be};
      const double c = al + be + 2.0;
      const double lo_dev = std::abs(beta::S_interior(p, -1.0 + 1e-5) - c / (2.0 * be + 4.0));
      const double hi_dev = std::abs(beta::S_interior(p, 1.0 - 1e-5) - c / (2.0 * al + 4.0));
      if (lo_dev > 1e-2 || hi_dev > 1e-2) {
        std::ostringstream os;
        os << "S edge deviation " << std::max(lo_dev, hi_dev) << " at alpha=" << al
           << " beta=" << be;
        detail = os.str();
        return false;
      }
    }
  // K1 is refinement-stable between 2^10 and 2^14 grid points.
  SupSearchSpec coarse, fine;
  coarse.coarse_points = 1 << 10;
  fine.coarse_points = 1 << 14;
  for (const BetaSym p : {BetaSym{0.0, 0.0}, BetaSym{-0.5, 1.0}, BetaSym{2.5, 2.5}}) {
    const double k_coarse = beta::estimate_K1(p, coarse).K1;
    const double k_fine = beta::estimate_K1(p, fine).K1;
    if (std::abs(k_fine - k_coarse) > 1e-3 * std::abs(k_coarse)) {
      std::ostringstream os;
      os << "K1 instability " << k_coarse << " vs " << k_fine << " at alpha=" << p.alpha
         << " beta=" << p.beta;
      detail = os.str();
      return false;
    }
  }
  // Finite-difference second derivatives respect K2 (||h'|| + ||h''||).
  const TestFunction hs[2] = {
      make_c2("acc_k2_x2", [](double x) { return x * x; }, 2.0, 2.0),
      make_c2("acc_k2_sin3", [](double x) { return std::sin(3.0 * x); }, 3.0, 9.0)};
  for (const BetaSym p : {BetaSym{0.0, 0.0}, BetaSym{1.0, 2.0}}) {
    const double K2 = beta::estimate_K2(p);
    const Profile pr = build_profile(beta::make_target_sym(p), 512);
    for (const TestFunction& h : hs) {
      const double cap = K2 * (*h.norm_d1 + *h.norm_d2) + 1e-6;
      const double d = 3e-3;
      for (int i = 1; i <= 8; ++i) {
        const double x = -1.0 + 2.0 * i / 9.0;
        const double second =
            (solve_stein(pr, h, x + d) - 2.0 * solve_stein(pr, h, x) +
             solve_stein(pr, h, x - d)) /
            (d * d);
        if (std::abs(second) > cap) {
          std::ostringstream os;
          os << "second derivative " << second << " above K2 cap " << cap
             << " at alpha=" << p.alpha << " beta=" << p.beta << " x=" << x;
          detail = os.str();
          return false;
        }
      }
    }
  }
  return true;
}

bool gradient_checks(std::string& detail) {
  const TestFunction h = make_c2("acc_grad_sin3", [](double x) { return std::sin(3.0 * x); },
                                 3.0, 9.0);
  const std::vector<TargetSpec> targets = {
      beta::make_target_sym({0.0, 0.0}), beta::make_target_sym({1.0, 2.0}),
      beta::make_target_sym({-0.5, -0.5}), beta::make_target_sym({2.5, 1.0}),
      beta::make_target_01({1.0, 1.0}), beta::make_target_01({2.0, 3.0}),
      beta::make_target_01({0.5, 2.0})};
  for (const TargetSpec& spec : targets) {
    const Profile pr = build_profile(spec, 512);
    const double d = 1e-4 * (pr.b() - pr.a());
    for (int i = 1; i <= 16; ++i) {
      const double x = pr.a() + (pr.b() - pr.a()) * i / 17.0;
      const double fd =
          (solve_stein(pr, h, x + d) - solve_stein(pr, h, x - d)) / (2.0 * d);
      const double an = solution_derivative(pr, h, x);
      if (std::abs(fd - an) > 1e-4 * std::max(1.0, std::abs(an))) {
        std::ostringstream os;
        os << "derivative mismatch fd=" << fd << " an=" << an << " at x=" << x;
        detail = os.str();
        return false;
      }
    }
  }
  for (const BetaSym p : {BetaSym{0.0, 0.0}, BetaSym{1.0, 2.0}, BetaSym{-0.5, 0.5}}) {
    const Profile pr = build_profile(beta::make_target_sym(p), 512);
    const double norm = integrate(
        [&](double x) { return tilde_density_unnormalized(pr, x); }, -1.0, 1.0);
    for (double x : {-0.6, -0.2, 0.0, 0.3, 0.7}) {
      const double got = tilde_density_unnormalized(pr, x) / norm;
      const double want = beta::pdf_sym({p.alpha + 1.0, p.beta + 1.0}, x);
      if (std::abs(got - want) > 1e-6 * std::max(1.0, want)) {
        std::ostringstream os;
        os << "tilde density " << got << " vs " << want << " at alpha=" << p.alpha
           << " beta=" << p.beta << " x=" << x;
        detail = os.str();
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  Harness h;
  h.criterion(1, "exact Polya identities (oracle vs closed forms)", 30.0,
              polya_exact_identities);
  h.criterion(2, "Beta-mixture identity of the Polya pmf", 60.0, mixture_identity);
  h.criterion(3, "O(1/n) rate reproduction with dominating bound", 300.0,
              rate_reproduction);
  h.criterion(4, "eta identity (1-x^2)p = cumulative gamma p", 60.0, eta_identity);
  h.criterion(5, "characterization residuals and tilt discrimination", 0.0,
              characterization_residuals);
  h.criterion(6, "Lipschitz solution-norm bounds on both parameter grids", 0.0,
              solution_norm_bounds);
  h.criterion(7, "Kolmogorov solution norms match the closed form", 0.0,
              kolmogorov_solutions);
  h.criterion(8, "constant certification (edge limits, stability, K2)", 0.0,
              constant_certification);
  h.criterion(9, "gradient checks and companion density", 0.0, gradient_checks);
  std::printf("%d of 9 criteria failed\n", h.failures);
  return h.failures == 0 ? 0 : 1;
}
