#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "stein/oracle_exact.hpp"

using namespace stein;
using polya::UrnConfig;

TEST_CASE("enumerate_urn: hand-composed two-draw probabilities") {
  const oracle::Enumeration e = oracle::enumerate_urn({1, 1, 1, 2});
  REQUIRE(e.entries.size() == 4);
  // sequences 00, 10, 01, 11 with urn dynamics (1/2)(2/3) etc.
  CHECK(e.entries[0b00].prob == Rational(1, 3));
  CHECK(e.entries[0b01].prob == Rational(1, 6));
  CHECK(e.entries[0b10].prob == Rational(1, 6));
  CHECK(e.entries[0b11].prob == Rational(1, 3));
  // permutation invariance at n = 2
  CHECK(e.entries[0b01].prob == e.entries[0b10].prob);
}

TEST_CASE("enumerate_urn: first-draw marginal is r/(r+w)") {
  const oracle::Enumeration e = oracle::enumerate_urn({3, 2, 2, 3});
  Rational first_red = 0;
  for (const auto& entry : e.entries)
    if (entry.bits & 1u) first_red += entry.prob;
  CHECK(first_red == Rational(3, 5));
}

TEST_CASE("enumerate_urn: size limit") {
  CHECK_THROWS_AS(oracle::enumerate_urn({1, 1, 1, 21}), size_limit);
}

TEST_CASE("oracle_pmf: fair urn at n=4 and totals") {
  const oracle::Enumeration e = oracle::enumerate_urn({1, 1, 1, 4});
  const std::vector<Rational> probs = oracle::oracle_pmf(e);
  for (const Rational& p : probs) CHECK(p == Rational(1, 5));
  Rational total = 0;
  for (const Rational& p : probs) total += p;
  CHECK(total == 1);
}

TEST_CASE("oracle matches the closed-form pmf on a small grid") {
  for (long long r : {1, 2, 3})
    for (long long w : {1, 3})
      for (long long c : {1, 2})
        for (long long n : {1, 3, 5}) {
          const UrnConfig u{r, w, c, n};
          const std::vector<Rational> got = oracle::oracle_pmf(oracle::enumerate_urn(u));
          const polya::PolyaPmf want = polya::pmf(u);
          for (long long k = 0; k <= n; ++k) CHECK(got[k] == want.probs[k]);
        }
}

TEST_CASE("oracle_pair_moments: fair urn layer values") {
  const UrnConfig u{1, 1, 1, 4};
  const polya::PairMomentTable t =
      oracle::oracle_pair_moments(oracle::enumerate_urn(u), u);
  CHECK(t.m1[2] == 0);
  CHECK(t.m1[3] == Rational(-1, 40));  // lambda 2 (1/2 - 3/4) with lambda = 1/20
  for (long long k = 0; k <= 4; ++k) CHECK(t.m2[k] >= t.m1[k] * t.m1[k]);
}

TEST_CASE("oracle_pair_moments equals the closed forms") {
  for (long long r : {1, 2})
    for (long long w : {2, 3})
      for (long long n : {2, 4, 6}) {
        const UrnConfig u{r, w, 2, n};
        const polya::PairMomentTable brute =
            oracle::oracle_pair_moments(oracle::enumerate_urn(u), u);
        const polya::PairMomentTable closed = polya::pair_moments(u);
        CHECK(brute.lambda == closed.lambda);
        for (long long k = 0; k <= n; ++k) {
          CHECK(brute.m1[k] == closed.m1[k]);
          CHECK(brute.m2[k] == closed.m2[k]);
        }
      }
}

TEST_CASE("pair symmetry of the enumerated joint law") {
  for (const UrnConfig u : {UrnConfig{1, 1, 1, 3}, UrnConfig{2, 3, 1, 4}}) {
    const oracle::Enumeration e = oracle::enumerate_urn(u);
    std::map<std::pair<Rational, Rational>, Rational> joint;
    for (const auto& entry : e.entries) {
      const int k = std::popcount(entry.bits);
      const bool xn = entry.bits >> (u.n - 1) & 1u;
      const long long head = k - (xn ? 1 : 0);
      joint[{Rational(k, u.n), Rational(head + 1, u.n)}] +=
          entry.prob * entry.resample_prob_red;
      joint[{Rational(k, u.n), Rational(head, u.n)}] +=
          entry.prob * (1 - entry.resample_prob_red);
    }
    for (const auto& [key, mass] : joint) {
      const auto mirror = joint.find({key.second, key.first});
      REQUIRE(mirror != joint.end());
      CHECK(mirror->second == mass);
    }
  }
}
