#include "stein/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace stein {
namespace {

// Gauss-Kronrod 15(7) abscissae and weights on [-1,1], positive half.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076962,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

PanelResult gk15(const RealFn& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double halfw = 0.5 * (hi - lo);
  double resk = kWgk[7] * f(center);
  double resg = kWg[3] * f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = halfw * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {resk * halfw, std::abs(resk - resg) * halfw};
}

// Globally adaptive refinement: always split the panel with the largest
// error estimate, so a single rough endpoint cannot starve the budget.
// max_depth caps the subdivision level of any one panel.  Panels narrower
// than min_width are accepted as they stand: below that scale the error
// estimate measures argument-rounding jitter, not quadrature error (the
// substituted variable resolves distances the original one cannot).
double integrate_plain(const RealFn& f, double lo, double hi, double tol,
                       int max_depth, double min_width = 0.0) {
  if (lo == hi) return 0.0;
  struct Panel {
    double lo, hi, value, error;
    int depth;
    bool operator<(const Panel& other) const { return error < other.error; }
  };
  std::priority_queue<Panel> queue;
  const PanelResult whole = gk15(f, lo, hi);
  queue.push({lo, hi, whole.value, whole.error, 0});
  double total_value = whole.value;
  double total_error = whole.error;
  int splits = 0;
  while (total_error > tol && !queue.empty()) {
    const Panel worst = queue.top();
    queue.pop();
    if (worst.hi - worst.lo <= min_width) {
      total_error -= worst.error;
      continue;
    }
    if (worst.depth >= max_depth || worst.hi - worst.lo < 5e-16 * (hi - lo) ||
        ++splits > 50000)
      throw non_convergence(
          "integrate: max_depth exhausted with error estimate above target");
    const double mid = 0.5 * (worst.lo + worst.hi);
    const PanelResult left = gk15(f, worst.lo, mid);
    const PanelResult right = gk15(f, mid, worst.hi);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push({worst.lo, mid, left.value, left.error, worst.depth + 1});
    queue.push({mid, worst.hi, right.value, right.error, worst.depth + 1});
  }
  return total_value;
}

}  // namespace

double integrate(const RealFn& f, double lo, double hi, const QuadSpec& spec) {
  if (!(spec.abs_tol > 0) || !(spec.rel_tol > 0) || spec.max_depth < 1)
    throw domain_error("integrate: invalid QuadSpec");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw domain_error("integrate: endpoints must be finite");
  if (!(lo < hi)) throw domain_error("integrate: requires lo < hi");

  // Rough pass to seed the relative-error target.
  double rough = 0.0;
  {
    const double mid = 0.5 * (lo + hi);
    auto safe = [&](double a, double b) {
      return gk15([&](double t) { return f(t); }, a, b).value;
    };
    double a0 = spec.singular_lo ? lo + 0.25 * (hi - lo) : lo;
    double b0 = spec.singular_hi ? hi - 0.25 * (hi - lo) : hi;
    if (a0 < b0) rough = safe(a0, b0);
    (void)mid;
  }
  const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough));

  double total = 0.0;
  double left = lo, right = hi;
  const double width = hi - lo;
  if (spec.singular_lo) {
    // x = lo + t^2 clusters nodes at lo; an x^lambda singularity with
    // lambda > -1 becomes t^(2*lambda+1).  Below t ~ sqrt(ulp) the map
    // cannot represent the distance to the endpoint, so panel splitting
    // stops there.
    const double cut = spec.singular_hi ? lo + 0.5 * width : hi;
    const double tmax = std::sqrt(cut - lo);
    const double floor_t = 1e-7 * std::max(1.0, std::sqrt(std::abs(lo)));
    total += integrate_plain(
        [&](double t) { return 2.0 * t * f(lo + t * t); }, 0.0, tmax,
        0.5 * tol, spec.max_depth, floor_t);
    left = cut;
  }
  if (spec.singular_hi) {
    const double cut = spec.singular_lo ? lo + 0.5 * width : lo;
    const double tmax = std::sqrt(hi - cut);
    const double floor_t = 1e-7 * std::max(1.0, std::sqrt(std::abs(hi)));
    total += integrate_plain(
        [&](double t) { return 2.0 * t * f(hi - t * t); }, 0.0, tmax,
        0.5 * tol, spec.max_depth, floor_t);
    right = cut;
  }
  if (left < right)
    total += integrate_plain(f, left, right, 0.5 * tol, spec.max_depth);
  return total;
}

double integrate_signed(const RealFn& f, double from, double to, const QuadSpec& spec) {
  if (from == to) return 0.0;
  if (from < to) return integrate(f, from, to, spec);
  return -integrate(f, to, from, spec);
}

double find_root(const RealFn& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw domain_error("find_root: requires lo < hi");
  if (!(tol > 0)) throw domain_error("find_root: requires tol > 0");
  double fa = f(lo), fb = f(hi);
  if (fa == 0.0) return lo;
  if (fb == 0.0) return hi;
  if ((fa > 0) == (fb > 0))
    throw no_bracket("find_root: same strict sign at both ends");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fa > 0)) {
      lo = mid;
      fa = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SupResult maximize_1d(const RealFn& f, double lo, double hi, const SupSearchSpec& spec) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw domain_error("maximize_1d: invalid interval");
  if (spec.coarse_points < 16 || spec.refine_rounds < 1)
    throw domain_error("maximize_1d: invalid SupSearchSpec");
  if (!(spec.edge_margin > 0) || !(spec.edge_margin < 0.25 * (hi - lo)))
    throw domain_error("maximize_1d: edge_margin out of range");

  const double a = lo + spec.edge_margin;
  const double b = hi - spec.edge_margin;
  const int n = spec.coarse_points;
  SupResult best{a, -std::numeric_limits<double>::infinity()};
  auto consider = [&](double x) {
    const double v = f(x);
    if (v > best.max || (v == best.max && x < best.argmax)) best = {x, v};
  };
  for (int i = 0; i <= n; ++i) consider(a + (b - a) * i / n);

  // Golden-section refinement inside the cell around the best grid point.
  // More rounds mean more shrink iterations; the running maximum makes the
  // result monotone under refinement.
  const double cell = (b - a) / n;
  double x1 = std::max(a, best.argmax - cell);
  double x4 = std::min(b, best.argmax + cell);
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x2 = x4 - invphi * (x4 - x1);
  double x3 = x1 + invphi * (x4 - x1);
  double f2 = f(x2), f3 = f(x3);
  const int iters = 34 + 16 * spec.refine_rounds;
  for (int it = 0; it < iters && x4 - x1 > 1e-15 * (1.0 + std::abs(x1)); ++it) {
    if (f2 > f3 || (f2 == f3 && x2 < x3)) {
      x4 = x3;
      x3 = x2;
      f3 = f2;
      x2 = x4 - invphi * (x4 - x1);
      f2 = f(x2);
      if (f2 > best.max || (f2 == best.max && x2 < best.argmax)) best = {x2, f2};
    } else {
      x1 = x2;
      x2 = x3;
      f2 = f3;
      x3 = x1 + invphi * (x4 - x1);
      f3 = f(x3);
      if (f3 > best.max || (f3 == best.max && x3 < best.argmax)) best = {x3, f3};
    }
  }
  return best;
}

}  // namespace stein
