#include "stein/polya.hpp"

#include <algorithm>
#include <cmath>

#include "stein/parallel.hpp"
#include "stein/specfun.hpp"

namespace stein {

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

double log_bigint(const BigInt& v) {
  if (v <= 0) throw domain_error("log_bigint: requires a positive value");
  const unsigned bits = boost::multiprecision::msb(v);
  if (bits <= 62) return std::log(static_cast<double>(v.convert_to<long long>()));
  const int shift = static_cast<int>(bits) - 62;
  const BigInt top = v >> shift;
  const long double m = static_cast<long double>(top.convert_to<long long>());
  constexpr long double kLn2 = 0.69314718055994530941723212145817657L;
  return static_cast<double>(std::log(m) + shift * kLn2);
}

}  // namespace

double log_rational(const Rational& q) {
  if (q <= 0) throw domain_error("log_rational: requires a positive value");
  return log_bigint(numerator(q)) - log_bigint(denominator(q));
}

}  // namespace stein

namespace stein::polya {
namespace {

// Product-formula pmf for m >= 0 drawings (m = 0 gives the point mass at 0).
std::vector<Rational> pmf_product(long long r, long long w, long long c, long long m) {
  std::vector<BigInt> prodr(m + 1), prodw(m + 1), binom(m + 1);
  prodr[0] = prodw[0] = binom[0] = 1;
  for (long long k = 1; k <= m; ++k) {
    prodr[k] = prodr[k - 1] * (r + c * (k - 1));
    prodw[k] = prodw[k - 1] * (w + c * (k - 1));
    binom[k] = binom[k - 1] * (m - k + 1) / k;
  }
  BigInt den = 1;
  for (long long l = 0; l < m; ++l) den *= r + w + c * l;
  std::vector<Rational> probs(m + 1);
  for (long long k = 0; k <= m; ++k)
    probs[k] = Rational(binom[k] * prodr[k] * prodw[m - k], den);
  return probs;
}

// Generalized-binomial form binom(-a,k) binom(-b,m-k) / binom(-a-b,m).
std::vector<Rational> pmf_binomial_form(const Rational& a, const Rational& b, long long m) {
  auto gbinom = [m](const Rational& q) {
    std::vector<Rational> t(m + 1);
    t[0] = 1;
    for (long long k = 1; k <= m; ++k) t[k] = t[k - 1] * (q - (k - 1)) / k;
    return t;
  };
  const std::vector<Rational> ga = gbinom(-a);
  const std::vector<Rational> gb = gbinom(-b);
  const std::vector<Rational> gab = gbinom(-a - b);
  std::vector<Rational> probs(m + 1);
  for (long long k = 0; k <= m; ++k) probs[k] = ga[k] * gb[m - k] / gab[m];
  return probs;
}

double lchoose(long long n, long long k) {
  return log_gamma(static_cast<double>(n + 1)) - log_gamma(static_cast<double>(k + 1)) -
         log_gamma(static_cast<double>(n - k + 1));
}

}  // namespace

void validate(const UrnConfig& u) {
  if (u.r < 1 || u.w < 1 || u.c < 1 || u.n < 1)
    throw domain_error("UrnConfig: r, w, c, n must all be >= 1");
}

PolyaPmf pmf(const UrnConfig& u) {
  validate(u);
  PolyaPmf out;
  out.n = u.n;
  out.probs = pmf_product(u.r, u.w, u.c, u.n);

  const std::vector<Rational> gb = pmf_binomial_form(u.a(), u.b(), u.n);
  Rational total = 0;
  for (long long k = 0; k <= u.n; ++k) {
    if (out.probs[k] != gb[k])
      throw std::logic_error("polya::pmf: product and binomial forms disagree");
    if (!(out.probs[k] > 0)) throw std::logic_error("polya::pmf: nonpositive mass");
    total += out.probs[k];
  }
  if (total != 1) throw std::logic_error("polya::pmf: masses do not sum to 1");

  out.log_probs.resize(u.n + 1);
  for (long long k = 0; k <= u.n; ++k) {
    out.log_probs[k] = log_rational(out.probs[k]);
    if (out.log_probs[k] < -700.0) out.log_underflow = true;
  }
  return out;
}

double mixture_check(const UrnConfig& u) {
  validate(u);
  if (u.n > 200) throw domain_error("mixture_check: n > 200");
  const PolyaPmf pm = pmf(u);
  const double a = to_double(u.a()), b = to_double(u.b());
  const double logB = log_beta_fn({a, b});
  double worst = 0.0;
  for (long long k = 0; k <= u.n; ++k) {
    const double lc = lchoose(u.n, k);
    QuadSpec qs;
    qs.singular_lo = (k == 0) && a < 1.0;
    qs.singular_hi = (k == u.n) && b < 1.0;
    const double mix = integrate(
        [&](double p) {
          return std::exp(lc - logB + (k + a - 1.0) * std::log(p) +
                          (u.n - k + b - 1.0) * std::log1p(-p));
        },
        0.0, 1.0, qs);
    worst = std::max(worst, std::abs(to_double(pm.probs[k]) - mix));
  }
  return worst;
}

PairSample gibbs_pair_sample(const UrnConfig& u, std::mt19937_64& rng) {
  validate(u);
  auto uniform = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
  long long reds = 0;
  bool last = false;
  for (long long t = 0; t < u.n; ++t) {
    const double p_red = static_cast<double>(u.r + u.c * reds) /
                         static_cast<double>(u.r + u.w + u.c * t);
    last = uniform() < p_red;
    if (last) ++reds;
  }
  const long long reds_head = reds - (last ? 1 : 0);
  const double p_res = static_cast<double>(u.r + u.c * reds_head) /
                       static_cast<double>(u.r + u.w + u.c * (u.n - 1));
  const bool resampled = uniform() < p_res;
  PairSample s;
  s.V = Rational(reds, u.n);
  s.Vprime = Rational(reds_head + (resampled ? 1 : 0), u.n);
  return s;
}

PairMomentTable pair_moments(const UrnConfig& u) {
  validate(u);
  const Rational a = u.a(), b = u.b();
  const long long n = u.n;
  const Rational lam = u.lambda();
  const Rational denom = a + b + n - 1;
  PairMomentTable t;
  t.lambda = lam;
  t.m1.resize(n + 1);
  t.m2.resize(n + 1);
  t.pneq.resize(n + 1);
  for (long long k = 0; k <= n; ++k) {
    const Rational V(k, n);
    t.m1[k] = lam * (a + b) * (a / (a + b) - V);
    // First-principles route: E[X_n'|S_n=k] via exchangeability.
    const Rational e_res = (a + (n - 1) * V) / denom;
    const Rational m1_direct = (e_res - V) / n;
    if (m1_direct != t.m1[k])
      throw std::logic_error("pair_moments: regression closed form disagrees with first principles");
    t.m2[k] = ((2 * n + b - a) * V - 2 * n * V * V + a) / (n * n * denom);
    t.pneq[k] = t.m2[k] * n * n;
  }
  return t;
}

Rational eta_discrepancy_exact(const UrnConfig& u) {
  validate(u);
  const PolyaPmf pm = pmf(u);
  const Rational a = u.a(), b = u.b();
  const long long n = u.n;
  Rational acc = 0;
  for (long long k = 0; k <= n; ++k)
    acc += pm.probs[k] * rat_abs(((a - b) * Rational(k, n) - a) / (2 * n));
  if (acc > (rat_abs(a - b) + a) / (2 * n))
    throw std::logic_error("eta_discrepancy_exact: value exceeds its closed-form bound");
  return acc;
}

Rational third_term_exact(const UrnConfig& u) {
  validate(u);
  const long long n = u.n;
  const std::vector<Rational> head = pmf_product(u.r, u.w, u.c, n - 1);
  const Rational denom(u.r + u.w + u.c * (n - 1));
  Rational e3 = 0;
  for (long long s = 0; s < static_cast<long long>(head.size()); ++s) {
    const Rational p_res = Rational(u.r + u.c * s) / denom;
    e3 += head[s] * 2 * p_res * (1 - p_res);
  }
  e3 /= Rational(n) * n * n;  // E|V'-V|^3
  const Rational term = e3 / (6 * u.lambda());
  const Rational a = u.a(), b = u.b();
  if (term > Rational(1, 6 * n) + (a + b - 1) / (6 * n * n))
    throw std::logic_error("third_term_exact: value exceeds its closed-form bound");
  return term;
}

std::vector<RateRow> rate_table(const UrnConfig& base, std::span<const long long> ns,
                                const RateTestFn& fn, const beta::SteinConstants& consts) {
  if (fn.tf.cls != FnClass::C2) throw domain_error("rate_table: test function must be C2");
  if (!fn.tf.norm_d1 || !fn.tf.norm_d2)
    throw missing_norm("rate_table: C2 test function needs norm_d1 and norm_d2");
  const Rational a = base.a(), b = base.b();
  const double ad = to_double(a), bd = to_double(b);
  const double nd1 = *fn.tf.norm_d1, nd2 = *fn.tf.norm_d2;

  std::vector<long long> sorted(ns.begin(), ns.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<RateRow> rows(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    UrnConfig u = base;
    u.n = sorted[i];
    const long long n = u.n;
    const PolyaPmf pm = pmf(u);

    RateRow row;
    row.n = n;
    if (fn.exact_value && fn.exact_moment) {
      Rational mean_h = 0;
      for (long long k = 0; k <= n; ++k)
        mean_h += pm.probs[k] * fn.exact_value(Rational(k, n));
      row.exact_error = to_double(rat_abs(mean_h - fn.exact_moment(a, b)));
    } else {
      double mean_h = 0.0;
      for (long long k = 0; k <= n; ++k)
        mean_h += to_double(pm.probs[k]) * fn.tf.h(static_cast<double>(k) / n);
      QuadSpec qs;
      qs.singular_lo = ad < 1.0;
      qs.singular_hi = bd < 1.0;
      const double nu_h = integrate(
          [&](double x) { return fn.tf.h(x) * beta_pdf({ad, bd}, x); }, 0.0, 1.0, qs);
      row.exact_error = std::abs(mean_h - nu_h);
    }
    row.bound = (consts.C1 * nd1 * (std::abs(ad - bd) + ad) / 2.0 +
                 consts.C2 * (nd1 + nd2) * (1.0 / 6.0 + (ad + bd - 1.0) / (6.0 * n))) /
                n;
    row.lambda = to_double(u.lambda());
    row.eta_discrepancy = to_double(eta_discrepancy_exact(u));
    row.third_term = to_double(third_term_exact(u));
    rows[i] = row;
  });

  // Running least-squares slope of log(exact_error) against log(n).
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t j = 0; j <= i; ++j) {
      if (!(rows[j].exact_error > 0)) continue;
      const double x = std::log(static_cast<double>(rows[j].n));
      const double y = std::log(rows[j].exact_error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    const double det = cnt * sxx - sx * sx;
    rows[i].slope_running =
        (cnt >= 2 && det != 0.0) ? (cnt * sxy - sx * sy) / det
                                 : std::numeric_limits<double>::quiet_NaN();
  }
  return rows;
}

DistanceDiagnostics distance_diagnostics(const UrnConfig& u) {
  validate(u);
  const PolyaPmf pm = pmf(u);
  const double a = to_double(u.a()), b = to_double(u.b());
  const long long n = u.n;

  std::vector<double> cum(n + 1);
  Rational acc = 0;
  for (long long k = 0; k <= n; ++k) {
    acc += pm.probs[k];
    cum[k] = to_double(acc);
  }

  DistanceDiagnostics d;
  for (long long k = 0; k <= n; ++k) {
    const double Fk = beta_cdf({a, b}, static_cast<double>(k) / n);
    d.kolmogorov = std::max(d.kolmogorov, std::abs(cum[k] - Fk));
  }

  QuadSpec qs;
  qs.abs_tol = 1e-11;
  auto segment = [&](double lo, double hi, double level) {
    if (!(lo < hi)) return 0.0;
    return integrate([&](double t) { return std::abs(level - beta_cdf({a, b}, t)); },
                     lo, hi, qs);
  };
  for (long long k = 0; k < n; ++k) {
    const double lo = static_cast<double>(k) / n;
    const double hi = static_cast<double>(k + 1) / n;
    const double P = cum[k];
    const double Fl = beta_cdf({a, b}, lo), Fr = beta_cdf({a, b}, hi);
    if (P <= Fl || P >= Fr) {
      d.wasserstein += segment(lo, hi, P);
    } else {
      const double cross = std::clamp(beta_quantile({a, b}, P), lo, hi);
      d.wasserstein += segment(lo, cross, P) + segment(cross, hi, P);
    }
  }
  return d;
}

}  // namespace stein::polya
