#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stein/numerics.hpp"

namespace stein {

// Natural extension of the Stein coefficients beyond the support, used to
// evaluate solutions on R \ [a,b].  F_l / F_r are primitives of gamma/eta
// on (-inf,a) and (b,inf); q = exp(F)/eta plays the role of the density
// there (and is negative, since eta < 0 outside the support).
struct OutsideSpec {
  RealFn F_l;
  RealFn F_r;
  RealFn q_l;
  RealFn q_r;
  RealFn eta_out;
  double window = 1.0;  // solutions are evaluated on [a-window,a) and (b,b+window]
};

// One Stein problem: a density/coefficient pair on a finite support
// interval.  gamma must be continuous, strictly decreasing, mean zero
// under p and change sign exactly once.
struct TargetSpec {
  double a = 0.0;
  double b = 1.0;
  RealFn p;
  std::optional<RealFn> psi;  // logarithmic derivative p'/p, when available
  RealFn gamma;
  std::optional<double> mean;  // E[Z]; computed by quadrature when absent
  std::optional<OutsideSpec> outside;
  QuadSpec quad{};
};

enum class FnClass { Bounded, Lipschitz, C2, Indicator };

// Test function with declared smoothness class and whichever norms that
// class needs.  norm_inf is the sup norm of the centered function h - mu(h).
// The name doubles as the identity token for the per-profile mu(h) cache;
// leave it empty to bypass caching.
struct TestFunction {
  std::string name;
  RealFn h;
  FnClass cls = FnClass::C2;
  std::optional<double> norm_inf;
  std::optional<double> norm_d1;
  std::optional<double> norm_d2;
  std::optional<double> z;  // Indicator threshold (left-closed: 1_(-inf,z])
};

// Throws domain_error if the spec violates the structural conditions
// (density positive and normalized, gamma strictly decreasing with mean
// zero and a single sign change, outside extension consistent).
void validate_target(const TargetSpec& spec);

// Precomputed cumulative tables for one target: CDF, I(x) = int_a^x
// gamma*p and int_a^x t*p(t)dt on a grid, plus the root x0 of gamma, the
// mean and the median.  Immutable after construction; the mu(h) cache is
// internally locked, so a Profile may be shared across threads.
class Profile {
 public:
  Profile(TargetSpec spec, int grid_size, bool validate);

  const TargetSpec& spec() const { return spec_; }
  double a() const { return spec_.a; }
  double b() const { return spec_.b; }
  double x0() const { return x0_; }
  double mean() const { return mean_; }
  double median() const { return median_; }
  double edge_window() const { return delta_edge_; }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& F_vals() const { return F_; }
  const std::vector<double>& I_vals() const { return I_; }

  // Cumulative quantities are kept as both left integrals (from a) and
  // tail integrals (to b); evaluation picks the side whose accumulated
  // error stays small relative to the value, so near-edge ratios like
  // g_z = F(z)(1-F(x))/I(x) do not inherit the global quadrature error.
  double cdf(double x) const;          // F(x), clamped outside [a,b]
  double survival(double x) const;     // 1 - F(x) without cancellation
  double I(double x) const;            // int_a^x gamma*p
  double xp_integral(double x) const;  // int_a^x t*p(t)dt
  double xp_tail(double x) const;      // int_x^b t*p(t)dt

  // Hermite-interpolated I for use inside integrands: I' = gamma*p is
  // known at the nodes, so interior panels interpolate to ~1e-12 at a
  // fraction of the quadrature cost and without evaluation jitter; the
  // edge panels fall back to the quadrature path.
  double I_smooth(double x) const;

  double mu(const TestFunction& tf) const;        // mu(h), cached by name
  double htilde_integral(const TestFunction& tf, double x) const;  // int_a^x (h-mu(h))*p

 private:
  struct TfCache {
    double mu;
    std::vector<double> hp_left;  // int_a^{node[i]} h*p
    std::vector<double> hp_tail;  // int_{node[i]}^b h*p
  };
  // Geometric sub-node refinement of I inside an edge panel, keyed by the
  // distance to the support endpoint; built lazily on first use.
  struct EdgeTable {
    bool built = false;
    std::vector<double> delta;  // decreasing distances from the endpoint
    std::vector<double> value;  // I at those distances
  };
  const TfCache& tf_cache(const TestFunction& tf) const;
  const EdgeTable& edge_table(bool left) const;
  double edge_eval(bool left, double x) const;
  bool use_left(double x) const;
  double left_eval(const std::vector<double>& cum, const RealFn& f, double x) const;
  double tail_eval(const std::vector<double>& cum, const RealFn& f, double x) const;
  void accumulate(const RealFn& f, std::vector<double>& left,
                  std::vector<double>& tail) const;

  TargetSpec spec_;
  std::vector<double> grid_;   // interior grid
  std::vector<double> nodes_;  // a, grid..., b
  std::vector<double> F_, I_, XP_;     // left cumulatives at nodes_
  std::vector<double> Ft_, It_, XPt_;  // tail cumulatives at nodes_
  double x0_ = 0.0;
  bool gamma_centered_ = true;
  double mean_ = 0.0;
  double median_ = 0.0;
  double delta_edge_ = 0.0;
  QuadSpec panel_quad_{};
  mutable std::map<std::string, TfCache> cache_;
  mutable EdgeTable edge_left_, edge_right_;
  mutable std::mutex cache_mx_;
};

Profile build_profile(TargetSpec spec, int grid_size = 512, bool validate = true);

// eta(x) = I(x)/p(x) inside (a,b); 0 at the endpoints; the (negative)
// analytic extension outside, which requires an OutsideSpec.
double eta(const Profile& pr, double x);

// Max over the probes of |eta'(x) - (gamma(x) - psi(x)*eta(x))| with a
// central finite difference for eta'.  Requires psi.
double check_eta_ode(const Profile& pr, std::span<const double> probes);

// Stein solution g_h(x) for the target of pr.  Uses the cumulative
// formula inside, the gamma-quotient limits at the endpoints (linearly
// blended within the edge window) and the exp(-F)*int h~*q formula
// outside the support.
double solve_stein(const Profile& pr, const TestFunction& tf, double x);

// Solution g_z for the half-line indicator 1_(-inf,z], z strictly inside
// the support, in its closed six-branch form.
double solve_kolmogorov(const Profile& pr, double z, double x);

// g_h'(x) from the rearranged Stein equation (h~ - gamma*g)/eta.  Valid
// strictly inside (away from the edge window, where eta -> 0 makes the
// quotient ill-conditioned) or strictly outside the support.
double solution_derivative(const Profile& pr, const TestFunction& tf, double x);

// ||g_h|| bound for bounded h: ||h-mu(h)||*max(1/(2I(m)), 1/gamma(a),
// -1/gamma(b)) with the outside terms present only when the spec has an
// OutsideSpec.
double bound_sup_bounded(const Profile& pr, const TestFunction& tf);

struct LipschitzFactors {
  double S;              // |g_h(x)|  <= ||h'|| * S
  double Sprime_factor;  // |g_h'(x)| <= ||h'|| * Sprime_factor
};

// Pointwise factors of the Lipschitz bounds at x.
LipschitzFactors bound_pointwise_lipschitz(const Profile& pr, double x);

// Reconstructs p(x) as (I(x0)/eta(x)) * exp(int_{x0}^x gamma/eta), the
// inner integral by direct quadrature.
double density_from_eta_gamma(const Profile& pr, double x);

// Unnormalized density exp(int_{x0}^x gamma/eta) of the companion target
// whose solutions bound g_h''; callers normalize by quadrature.
double tilde_density_unnormalized(const Profile& pr, double x);

// |E[eta(Z)g'(Z) + gamma(Z)g(Z)]| by quadrature; near zero only for the
// correct target law.
double stein_residual(const Profile& pr, const RealFn& g, const RealFn& g_deriv);

// Conditional-moment statistics of an exchangeable pair (W,W').
struct PluginStats {
  double lambda = 0.0;           // regression constant, > 0
  double eta_discrepancy = 0.0;  // E|eta(W) - (1/2lambda) E[(W'-W)^2|W]|
  double third_abs = 0.0;        // E|W'-W|^3
  double remainder_abs = 0.0;    // E|R|
};

// Assembles the plug-in bound c1*||h'||*eta_discrepancy
// + c2*(||h'||+||h''||)*third_abs/(6 lambda) + c0*||h'||*remainder/lambda.
double plugin_bound(const PluginStats& stats, double c1, double c2,
                    double c0_coeff, const TestFunction& tf);

}  // namespace stein
