#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "stein/beta_stein.hpp"
#include "stein/rational.hpp"
#include "stein/stein_core.hpp"

namespace stein::polya {

// Urn with r red and w white balls initially; every draw returns the ball
// plus c more of its color; n draws in total.  The derived Beta
// parameters are a = r/c and b = w/c, kept as exact rationals.
struct UrnConfig {
  long long r = 1;
  long long w = 1;
  long long c = 1;
  long long n = 1;

  Rational a() const { return Rational(r, c); }
  Rational b() const { return Rational(w, c); }
  // lambda = 1/(n(a+b+n-1)) = c/(n(r+w+c(n-1)))
  Rational lambda() const { return Rational(c, n * (r + w + c * (n - 1))); }
};

void validate(const UrnConfig& u);

// Exact distribution of S_n, the number of red draws.
struct PolyaPmf {
  long long n = 0;
  std::vector<Rational> probs;     // index k = 0..n, sums to exactly 1
  std::vector<double> log_probs;
  bool log_underflow = false;  // some log prob fell below -700
};

// Product-formula pmf in exact rational arithmetic; also evaluates the
// generalized-binomial form and requires exact agreement.
PolyaPmf pmf(const UrnConfig& u);

// Max over k of |probs[k] - integral binom(k;n,p) dnu_{a,b}(p)|, the
// Beta-mixture representation checked by quadrature.  n <= 200.
double mixture_check(const UrnConfig& u);

struct PairSample {
  Rational V;
  Rational Vprime;
};

// One draw of the exchangeable pair: run the urn for n steps, then
// resample the last coordinate from its conditional law given the first
// n-1 draws.
PairSample gibbs_pair_sample(const UrnConfig& u, std::mt19937_64& rng);

// Exact conditional pair moments per layer S_n = k.
struct PairMomentTable {
  Rational lambda;
  std::vector<Rational> m1;    // E[V'-V | S_n=k]
  std::vector<Rational> m2;    // E[(V'-V)^2 | S_n=k]
  std::vector<Rational> pneq;  // P(X_n' != X_n | S_n=k)
};

// Closed forms of the regression and square-increment identities,
// cross-computed from first principles and required to agree exactly.
PairMomentTable pair_moments(const UrnConfig& u);

// E|eta(V) - (1/2lambda) E[(V'-V)^2|V]| exactly; always <= (|a-b|+a)/(2n).
Rational eta_discrepancy_exact(const UrnConfig& u);

// (1/6lambda) E|V'-V|^3 exactly; always <= 1/(6n) + (a+b-1)/(6n^2).
Rational third_term_exact(const UrnConfig& u);

// Test function for a rate sweep: the evaluator plus, when the function
// is rational at rational points, exact evaluation and the exact Beta
// moment (both optional; the sweep falls back to doubles without them).
struct RateTestFn {
  TestFunction tf;
  std::function<Rational(const Rational&)> exact_value;
  std::function<Rational(const Rational&, const Rational&)> exact_moment;
};

struct RateRow {
  long long n = 0;
  double exact_error = 0.0;
  double bound = 0.0;
  double lambda = 0.0;
  double eta_discrepancy = 0.0;
  double third_term = 0.0;
  double slope_running = 0.0;  // OLS log-log slope over rows so far
};

// One row per n: |E h(V) - nu_{a,b}(h)| against the plug-in rate bound
// built from the certified constants.  Rows are independent and may be
// computed in parallel (STEIN_THREADS caps the workers).
std::vector<RateRow> rate_table(const UrnConfig& base, std::span<const long long> ns,
                                const RateTestFn& fn, const beta::SteinConstants& consts);

struct DistanceDiagnostics {
  double kolmogorov = 0.0;
  double wasserstein = 0.0;
};

// Kolmogorov and L1 (Wasserstein) distance between the law of S_n/n and
// its Beta limit.
DistanceDiagnostics distance_diagnostics(const UrnConfig& u);

}  // namespace stein::polya
