#include "stein/oracle_exact.hpp"

#include <bit>

namespace stein::oracle {

Enumeration enumerate_urn(const polya::UrnConfig& u) {
  polya::validate(u);
  if (u.n > 20) throw size_limit("enumerate_urn: n > 20");
  Enumeration e;
  e.n = u.n;
  e.entries.resize(std::size_t{1} << u.n);
  for (std::uint32_t bits = 0; bits < e.entries.size(); ++bits) {
    Rational prob = 1;
    long long reds = 0, whites = 0;
    for (long long t = 0; t < u.n; ++t) {
      const Rational total(u.r + u.w + u.c * t);
      if (bits >> t & 1u) {
        prob *= Rational(u.r + u.c * reds) / total;
        ++reds;
      } else {
        prob *= Rational(u.w + u.c * whites) / total;
        ++whites;
      }
    }
    const long long reds_head = reds - (bits >> (u.n - 1) & 1u);
    e.entries[bits] = {bits, prob,
                       Rational(u.r + u.c * reds_head, u.r + u.w + u.c * (u.n - 1))};
  }
  Rational total = 0;
  for (const auto& entry : e.entries) {
    if (!(entry.prob > 0)) throw std::logic_error("enumerate_urn: nonpositive sequence probability");
    total += entry.prob;
  }
  if (total != 1) throw std::logic_error("enumerate_urn: probabilities do not sum to 1");
  return e;
}

std::vector<Rational> oracle_pmf(const Enumeration& e) {
  std::vector<Rational> probs(e.n + 1);
  for (const auto& entry : e.entries) probs[std::popcount(entry.bits)] += entry.prob;
  return probs;
}

polya::PairMomentTable oracle_pair_moments(const Enumeration& e, const polya::UrnConfig& u) {
  const long long n = e.n;
  std::vector<Rational> mass(n + 1), m1(n + 1), m2(n + 1);
  for (const auto& entry : e.entries) {
    const int k = std::popcount(entry.bits);
    const bool xn = entry.bits >> (n - 1) & 1u;
    const Rational& pr = entry.resample_prob_red;
    // E[V'-V | sequence] = (p_red - x_n)/n over the resample branch;
    // (V'-V)^2 = 1{X_n' != X_n}/n^2.
    mass[k] += entry.prob;
    m1[k] += entry.prob * (pr - (xn ? 1 : 0)) / n;
    m2[k] += entry.prob * (xn ? 1 - pr : pr) / (Rational(n) * n);
  }
  polya::PairMomentTable t;
  t.lambda = u.lambda();
  t.m1.resize(n + 1);
  t.m2.resize(n + 1);
  t.pneq.resize(n + 1);
  for (long long k = 0; k <= n; ++k) {
    if (!(mass[k] > 0)) throw std::logic_error("oracle_pair_moments: empty layer");
    t.m1[k] = m1[k] / mass[k];
    t.m2[k] = m2[k] / mass[k];
    t.pneq[k] = t.m2[k] * n * n;
  }
  return t;
}

}  // namespace stein::oracle
