#pragma once

#include <cstdint>
#include <vector>

#include "stein/polya.hpp"

namespace stein::oracle {

// Brute-force enumeration of every draw sequence of a small urn, with
// probabilities composed step by step (deliberately independent of the
// closed-form pmf it certifies).
struct Enumeration {
  long long n = 0;
  struct Entry {
    std::uint32_t bits = 0;          // draw i red  <=>  bit i set
    Rational prob;                   // sequential urn composition
    Rational resample_prob_red;      // P(X_n'=1 | first n-1 draws)
  };
  std::vector<Entry> entries;
};

// All 2^n sequences; throws size_limit for n > 20.
Enumeration enumerate_urn(const polya::UrnConfig& u);

// Layer masses by k = popcount; exact.
std::vector<Rational> oracle_pmf(const Enumeration& e);

// Conditional pair moments aggregated over sequence x resample branches.
polya::PairMomentTable oracle_pair_moments(const Enumeration& e, const polya::UrnConfig& u);

}  // namespace stein::oracle
