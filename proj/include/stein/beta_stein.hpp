#pragma once

#include "stein/specfun.hpp"
#include "stein/stein_core.hpp"

namespace stein::beta {

// Beta distribution on [-1,1] with density C(alpha,beta)(1-x)^alpha(1+x)^beta;
// both exponents exceed -1.
struct BetaSym {
  double alpha;
  double beta;
};

// Beta distribution on [0,1] with parameters a,b > 0.
struct Beta01 {
  double a;
  double b;
};

// Exact round-trip parameter maps: X on [0,1] corresponds to Y = 2X-1.
inline BetaSym to_sym(Beta01 p) { return {p.b - 1.0, p.a - 1.0}; }
inline Beta01 to_unit(BetaSym p) { return {p.beta + 1.0, p.alpha + 1.0}; }

double log_norm_sym(BetaSym p);  // log C(alpha,beta)
double pdf_sym(BetaSym p, double x);
double cdf_sym(BetaSym p, double x);
double quantile_sym(BetaSym p, double q);

// Fully specified Stein problems, closed forms throughout, outside
// extensions included.  Singular quadrature flags are set when an
// exponent is negative.
TargetSpec make_target_sym(BetaSym p);
TargetSpec make_target_01(Beta01 p);

// Sup-norm bound for bounded test functions (median form).
double sup_bound_bounded(BetaSym p, const TestFunction& tf);
double sup_bound_bounded(Beta01 p, const TestFunction& tf);

// The three ratio functions whose suprema build K1: S on the support
// interior, S_l left of the support, S_r right of it.
double S_interior(BetaSym p, double x);
double S_left(BetaSym p, double x);
double S_right(BetaSym p, double x);
double S_interior(Beta01 p, double x);
double S_left(Beta01 p, double x);
double S_right(Beta01 p, double x);

struct BoundaryLimits {
  double S_at_minus1 = 0.0;  // lim of S at the left support edge
  double S_at_plus1 = 0.0;   // lim of S at the right support edge
  double Sl_at_minus1 = 0.0; // lim of S_l approaching the support from outside
};

// Numerically certified solution-norm constants.  K1/K2 bound the first
// and second derivative on [-1,1]; C1/C2 are their [0,1] transfers.
struct SteinConstants {
  double K1 = 0.0;
  double K2 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double argmax_S = 0.0;
  BoundaryLimits boundary_limits{};
  SupSearchSpec grid_meta{};
  double lipschitz_sup_coeff = 0.0;        // ||g_h|| <= coeff * ||h'||
  double lipschitz_sup_coeff_sharp = 0.0;  // sharper transfer value, diagnostic
  double C1_direct = 0.0;                  // direct [0,1] re-estimation, diagnostic
};

// K1 = max( (2/(alpha+beta+2)) sup S, 2 sup S_l, 2 sup S_r ), suprema by
// grid + golden-section search with the analytic edge limits substituted
// inside the margin.
SteinConstants estimate_K1(BetaSym p, const SupSearchSpec& spec = {});

// K2 = K1(alpha+1,beta+1) * max(1, (alpha+beta+2) K1(alpha,beta)), from the
// derivative recursion through the companion target.
double estimate_K2(BetaSym p, const SupSearchSpec& spec = {});

// C1 = 2 K1(b-1,a-1), C2 = 4 K2(b-1,a-1) by the chain rule of the
// [-1,1] -> [0,1] transfer; also records the Lipschitz sup coefficient
// 2/(a+b) and a direct [0,1] re-estimation as a cross-check.
SteinConstants constants_01(Beta01 p, const SupSearchSpec& spec = {});

struct EndpointDerivLimits {
  double at_minus1 = 0.0;
  double at_plus1 = 0.0;
};

// Closed-form limits of g_z' at the support edges.
EndpointDerivLimits derivative_endpoint_limits(BetaSym p, double z);

}  // namespace stein::beta
