#pragma once

#include "stein/errors.hpp"

namespace stein {

// Parameter pair of a Beta distribution on [0,1]; both must be positive.
struct BetaAB {
  double a;
  double b;
};

// ln Gamma(x) for x > 0, Lanczos approximation, relative error below 1e-12.
double log_gamma(double x);

// B(a,b) and its logarithm via log_gamma.
double log_beta_fn(BetaAB p);
double beta_fn(BetaAB p);

// Density of the Beta(a,b) distribution on (0,1); 0 outside.
double beta_pdf(BetaAB p, double x);

// Regularized incomplete beta I_x(a,b) by Lentz continued fraction with
// the usual symmetry switch; quadrature fallback if the fraction stalls.
// Clamps to 0/1 outside [0,1]; monotone nondecreasing in x.
double beta_cdf(BetaAB p, double x);

// Inverse of beta_cdf by bisection (Newton is unreliable when a < 1 or
// b < 1: the density blows up at the endpoints).
double beta_quantile(BetaAB p, double q);

}  // namespace stein
