#pragma once

#include <string>

#include "stein/polya.hpp"
#include "stein/stein_core.hpp"

namespace stein {

// Named test-function registry for the CLI and the sweeps: evaluator,
// norms on the given support interval, and exact rational arithmetic for
// the polynomial entries.  Norms are precomputed so that every bound sees
// trusted inputs; arbitrary expressions are not parsed.
//
// Names: "x", "x2", "sinkx:<k>" (also "sin3x"), "indicator:<z>",
// "lipschitz-saw".
polya::RateTestFn lookup_test_fn(const std::string& name, double lo, double hi);

}  // namespace stein
