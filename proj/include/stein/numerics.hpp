#pragma once

#include <functional>

#include "stein/errors.hpp"

namespace stein {

using RealFn = std::function<double(double)>;

// Controls one call to integrate().  The singular flags announce an
// integrable endpoint singularity (x^lambda type with lambda > -1); the
// integrator then substitutes x = lo + t^2 (resp. hi - t^2) on the panel
// touching that endpoint before applying the nodal rule.  The stated
// tolerances are reliably met for lambda >= -0.5 (the substituted
// integrand is then regular); deeper singularities remain integrable in
// principle but double precision cannot resolve the mass next to the
// endpoint, and such inputs end in NonConvergence or a failed
// normalization check rather than a silently wrong value.
struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 40;
  bool singular_lo = false;
  bool singular_hi = false;
};

// Adaptive Gauss-Kronrod 15(7) on [lo, hi], finite endpoints only.
// Returns an approximation with estimated error <= max(abs_tol,
// rel_tol * |result|).  Throws domain_error on an empty or infinite
// range, non_convergence when the depth budget is exhausted with the
// estimate still above target.
double integrate(const RealFn& f, double lo, double hi, const QuadSpec& spec = {});

// integrate with automatic sign handling when from > to.
double integrate_signed(const RealFn& f, double from, double to, const QuadSpec& spec = {});

// Plain bisection.  Requires f(lo) * f(hi) <= 0; shrinks the bracket to
// width <= tol and returns its midpoint.  Deterministic.
double find_root(const RealFn& f, double lo, double hi, double tol);

// Controls maximize_1d.  The scan covers [lo + edge_margin, hi - edge_margin];
// callers supply analytic limit values for excluded endpoints themselves.
struct SupSearchSpec {
  int coarse_points = 2048;
  int refine_rounds = 3;
  double edge_margin = 1e-4;
};

struct SupResult {
  double argmax = 0.0;
  double max = 0.0;
};

// Coarse grid scan followed by golden-section refinement around the best
// cell.  The returned max is the running maximum over every evaluation,
// so it never falls below any grid value; among equal values the smallest
// argmax wins.  Deterministic for a fixed spec.
SupResult maximize_1d(const RealFn& f, double lo, double hi, const SupSearchSpec& spec = {});

}  // namespace stein
