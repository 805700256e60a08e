#include "stein/beta_stein.hpp"

#include <cmath>

namespace stein::beta {
namespace {

void check(BetaSym p) {
  if (!(p.alpha > -1.0) || !(p.beta > -1.0))
    throw domain_error("BetaSym: requires alpha > -1 and beta > -1");
}

void check(Beta01 p) {
  if (!(p.a > 0.0) || !(p.b > 0.0)) throw domain_error("Beta01: requires a > 0 and b > 0");
}

// Closed forms of one Beta parametrization, enough to evaluate the ratio
// functions S, S_l, S_r without building a Profile.
struct Family {
  double lo, hi;
  double c;  // gamma(x) = c*(mean - x)
  double mean;
  RealFn p, F, Fbar, gamma, eta;  // Fbar = 1-F evaluated without cancellation
  RealFn F_l, F_r, q_l, q_r;
  bool sing_lo, sing_hi;
  double S_lim_lo, S_lim_hi;  // interior S limits at the support edges
  double Sl_lim, Sr_lim;      // outside limits approaching the support
};

Family sym_family(BetaSym p) {
  check(p);
  const double al = p.alpha, be = p.beta;
  const double c = al + be + 2.0;
  const double logC = -log_beta_fn({al + 1.0, be + 1.0}) - (al + be + 1.0) * std::log(2.0);
  Family f;
  f.lo = -1.0;
  f.hi = 1.0;
  f.c = c;
  f.mean = (be - al) / c;
  f.p = [=](double x) {
    if (x <= -1.0 || x >= 1.0) return 0.0;
    return std::exp(logC + al * std::log1p(-x) + be * std::log1p(x));
  };
  f.F = [=](double x) { return beta_cdf({be + 1.0, al + 1.0}, 0.5 * (x + 1.0)); };
  f.Fbar = [=](double x) { return beta_cdf({al + 1.0, be + 1.0}, 0.5 * (1.0 - x)); };
  f.gamma = [=](double x) { return -c * x + (be - al); };
  f.eta = [](double x) { return 1.0 - x * x; };
  f.F_l = [=](double x) { return (al + 1.0) * std::log(1.0 - x) + (be + 1.0) * std::log(-1.0 - x); };
  f.F_r = [=](double x) { return (al + 1.0) * std::log(x - 1.0) + (be + 1.0) * std::log(1.0 + x); };
  // q = exp(F)/eta; eta < 0 outside the support, so q is negative there.
  f.q_l = [=](double x) { return -std::exp(al * std::log(1.0 - x) + be * std::log(-1.0 - x)); };
  f.q_r = [=](double x) { return -std::exp(al * std::log(x - 1.0) + be * std::log(1.0 + x)); };
  f.sing_lo = be < 0.0;
  f.sing_hi = al < 0.0;
  f.S_lim_lo = c / (2.0 * be + 4.0);
  f.S_lim_hi = c / (2.0 * al + 4.0);
  f.Sl_lim = 1.0 / (2.0 * be + 4.0);
  f.Sr_lim = 1.0 / (2.0 * al + 4.0);
  return f;
}

Family unit_family(Beta01 p) {
  check(p);
  const double a = p.a, b = p.b;
  const double c = a + b;
  Family f;
  f.lo = 0.0;
  f.hi = 1.0;
  f.c = c;
  f.mean = a / c;
  f.p = [=](double x) { return beta_pdf({a, b}, x); };
  f.F = [=](double x) { return beta_cdf({a, b}, x); };
  f.Fbar = [=](double x) { return beta_cdf({b, a}, 1.0 - x); };
  f.gamma = [=](double x) { return -c * x + a; };
  f.eta = [](double x) { return x * (1.0 - x); };
  f.F_l = [=](double x) { return a * std::log(-x) + b * std::log(1.0 - x); };
  f.F_r = [=](double x) { return a * std::log(x) + b * std::log(x - 1.0); };
  f.q_l = [=](double x) { return -std::exp((a - 1.0) * std::log(-x) + (b - 1.0) * std::log(1.0 - x)); };
  f.q_r = [=](double x) { return -std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log(x - 1.0)); };
  f.sing_lo = a < 1.0;
  f.sing_hi = b < 1.0;
  // lim S = c/(eta'+gamma) at the left edge, -c/(eta'+gamma) at the right.
  f.S_lim_lo = c / (1.0 + a);
  f.S_lim_hi = c / (1.0 + b);
  f.Sl_lim = 1.0 / (1.0 + a);
  f.Sr_lim = 1.0 / (1.0 + b);
  return f;
}

double S_inner(const Family& f, double x) {
  if (!(x > f.lo) || !(x < f.hi)) throw domain_error("S: x must be interior");
  const double et = f.eta(x);
  const double I = et * f.p(x);
  const double g = f.gamma(x);
  const double H = I - g * f.F(x);
  const double G = I + g * f.Fbar(x);
  return H * G / (I * et);
}

double S_l_inner(const Family& f, double x) {
  if (!(x < f.lo)) throw domain_error("S_l: x must lie left of the support");
  QuadSpec qs;
  qs.singular_hi = f.sing_lo;
  const double Ql = -integrate(f.q_l, x, f.lo, qs);
  const double Tl = -integrate([&](double t) { return t * f.q_l(t); }, x, f.lo, qs);
  const double num = f.gamma(x) * (-x * Ql + Tl);
  const double den = -f.eta(x) * std::exp(f.F_l(x));
  return num / den;
}

double S_r_inner(const Family& f, double x) {
  if (!(x > f.hi)) throw domain_error("S_r: x must lie right of the support");
  QuadSpec qs;
  qs.singular_lo = f.sing_hi;
  const double Qr = integrate(f.q_r, f.hi, x, qs);
  const double Tr = integrate([&](double t) { return t * f.q_r(t); }, f.hi, x, qs);
  const double num = f.gamma(x) * (x * Qr - Tr);
  const double den = -f.eta(x) * std::exp(f.F_r(x));
  return num / den;
}

struct K1Estimate {
  double K1;
  double argmax_S;
  double sup_S, sup_Sl, sup_Sr;
};

// Regional suprema exactly as the existence proof partitions the line:
// interior ratio scaled by 2/c, outside ratios scaled by 2, analytic
// limits substituted inside the edge margin (S_l and S_r vanish in the
// far field, so windows of width 1 suffice).
K1Estimate estimate_k1_family(const Family& f, const SupSearchSpec& spec) {
  const SupResult inner = maximize_1d([&](double x) { return S_inner(f, x); },
                                      f.lo, f.hi, spec);
  double sup_S = inner.max;
  double argmax = inner.argmax;
  if (f.S_lim_lo > sup_S) {
    sup_S = f.S_lim_lo;
    argmax = f.lo;
  }
  if (f.S_lim_hi > sup_S) {
    sup_S = f.S_lim_hi;
    argmax = f.hi;
  }
  const SupResult left = maximize_1d([&](double x) { return S_l_inner(f, x); },
                                     f.lo - 1.0, f.lo, spec);
  const double sup_Sl = std::max(left.max, f.Sl_lim);
  const SupResult right = maximize_1d([&](double x) { return S_r_inner(f, x); },
                                      f.hi, f.hi + 1.0, spec);
  const double sup_Sr = std::max(right.max, f.Sr_lim);
  const double K1 = std::max({2.0 / f.c * sup_S, 2.0 * sup_Sl, 2.0 * sup_Sr});
  return {K1, argmax, sup_S, sup_Sl, sup_Sr};
}

}  // namespace

double log_norm_sym(BetaSym p) {
  check(p);
  return -log_beta_fn({p.alpha + 1.0, p.beta + 1.0}) -
         (p.alpha + p.beta + 1.0) * std::log(2.0);
}

double pdf_sym(BetaSym p, double x) { return sym_family(p).p(x); }

double cdf_sym(BetaSym p, double x) {
  check(p);
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return beta_cdf({p.beta + 1.0, p.alpha + 1.0}, 0.5 * (x + 1.0));
}

double quantile_sym(BetaSym p, double q) {
  check(p);
  return 2.0 * beta_quantile({p.beta + 1.0, p.alpha + 1.0}, q) - 1.0;
}

TargetSpec make_target_sym(BetaSym p) {
  Family f = sym_family(p);
  const double al = p.alpha, be = p.beta;
  TargetSpec spec;
  spec.a = -1.0;
  spec.b = 1.0;
  spec.p = f.p;
  spec.psi = [=](double x) { return (-(al + be) * x + (be - al)) / (1.0 - x * x); };
  spec.gamma = f.gamma;
  spec.mean = f.mean;
  spec.quad.singular_lo = f.sing_lo;
  spec.quad.singular_hi = f.sing_hi;
  OutsideSpec out;
  out.F_l = f.F_l;
  out.F_r = f.F_r;
  out.q_l = f.q_l;
  out.q_r = f.q_r;
  out.eta_out = f.eta;
  spec.outside = std::move(out);
  return spec;
}

TargetSpec make_target_01(Beta01 p) {
  Family f = unit_family(p);
  const double a = p.a, b = p.b;
  TargetSpec spec;
  spec.a = 0.0;
  spec.b = 1.0;
  spec.p = f.p;
  spec.psi = [=](double x) { return (a - 1.0) / x - (b - 1.0) / (1.0 - x); };
  spec.gamma = f.gamma;
  spec.mean = f.mean;
  spec.quad.singular_lo = f.sing_lo;
  spec.quad.singular_hi = f.sing_hi;
  OutsideSpec out;
  out.F_l = f.F_l;
  out.F_r = f.F_r;
  out.q_l = f.q_l;
  out.q_r = f.q_r;
  out.eta_out = f.eta;
  spec.outside = std::move(out);
  return spec;
}

double sup_bound_bounded(BetaSym p, const TestFunction& tf) {
  check(p);
  if (!tf.norm_inf) throw missing_norm("sup_bound_bounded: norm_inf not declared");
  const double m = quantile_sym(p, 0.5);
  const double coef =
      std::max({1.0 / (2.0 * (1.0 - m * m) * pdf_sym(p, m)),
                1.0 / (2.0 * p.beta + 2.0), 1.0 / (2.0 * p.alpha + 2.0)});
  return *tf.norm_inf * coef;
}

double sup_bound_bounded(Beta01 p, const TestFunction& tf) {
  check(p);
  if (!tf.norm_inf) throw missing_norm("sup_bound_bounded: norm_inf not declared");
  const double m = beta_quantile({p.a, p.b}, 0.5);
  const double coef = std::max({1.0 / (2.0 * m * (1.0 - m) * beta_pdf({p.a, p.b}, m)),
                                1.0 / p.a, 1.0 / p.b});
  return *tf.norm_inf * coef;
}

double S_interior(BetaSym p, double x) { return S_inner(sym_family(p), x); }
double S_left(BetaSym p, double x) { return S_l_inner(sym_family(p), x); }
double S_right(BetaSym p, double x) { return S_r_inner(sym_family(p), x); }
double S_interior(Beta01 p, double x) { return S_inner(unit_family(p), x); }
double S_left(Beta01 p, double x) { return S_l_inner(unit_family(p), x); }
double S_right(Beta01 p, double x) { return S_r_inner(unit_family(p), x); }

SteinConstants estimate_K1(BetaSym p, const SupSearchSpec& spec) {
  const Family f = sym_family(p);
  const K1Estimate est = estimate_k1_family(f, spec);
  SteinConstants out;
  out.K1 = est.K1;
  out.argmax_S = est.argmax_S;
  out.boundary_limits = {f.S_lim_lo, f.S_lim_hi, f.Sl_lim};
  out.grid_meta = spec;
  out.lipschitz_sup_coeff = 1.0 / f.c;
  out.lipschitz_sup_coeff_sharp = 1.0 / f.c;
  return out;
}

double estimate_K2(BetaSym p, const SupSearchSpec& spec) {
  const double K1_base = estimate_K1(p, spec).K1;
  const double K1_up = estimate_K1({p.alpha + 1.0, p.beta + 1.0}, spec).K1;
  return K1_up * std::max(1.0, (p.alpha + p.beta + 2.0) * K1_base);
}

SteinConstants constants_01(Beta01 p, const SupSearchSpec& spec) {
  check(p);
  const BetaSym sym = to_sym(p);
  SteinConstants out = estimate_K1(sym, spec);
  const double K1_up = estimate_K1({sym.alpha + 1.0, sym.beta + 1.0}, spec).K1;
  out.K2 = K1_up * std::max(1.0, (sym.alpha + sym.beta + 2.0) * out.K1);
  // f_h(x) = 2 g_h(2x-1): f' = 4g', f'' = 8g'', ||h1'|| = ||h'||/2,
  // ||h1''|| = ||h''||/4.
  out.C1 = 2.0 * out.K1;
  out.C2 = 4.0 * out.K2;
  out.lipschitz_sup_coeff = 2.0 / (p.a + p.b);
  out.lipschitz_sup_coeff_sharp = 1.0 / (p.a + p.b);
  const K1Estimate direct = estimate_k1_family(unit_family(p), spec);
  out.C1_direct = direct.K1;
  return out;
}

EndpointDerivLimits derivative_endpoint_limits(BetaSym p, double z) {
  check(p);
  if (!(z > -1.0) || !(z < 1.0))
    throw domain_error("derivative_endpoint_limits: z must be interior");
  const double c = p.alpha + p.beta + 2.0;
  const double Fz = cdf_sym(p, z);
  EndpointDerivLimits lim;
  lim.at_minus1 = (1.0 - Fz) * c / ((2.0 * p.beta + 4.0) * (2.0 * p.beta + 2.0));
  lim.at_plus1 = -Fz * c / ((2.0 * p.alpha + 4.0) * (2.0 * p.alpha + 2.0));
  return lim;
}

}  // namespace stein::beta
