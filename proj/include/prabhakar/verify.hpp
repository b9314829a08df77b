#pragma once

// Seeded numerical verification suites for the library's mathematical
// properties: special-function identities, map monotonicity, operator
// reductions, linearity, power-law closed forms, semigroup and composition
// laws, norm bounds, Cauchy-solver cross-checks, and the inverse identity.

#include <cstdint>
#include <string>
#include <vector>

#include "prabhakar/cauchy.hpp"

namespace prabhakar {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;  // worst observed deviation
  double tolerance = 0.0;
  std::string detail;
};

// Suites accepted by run_verify, not counting the umbrella "all".
std::vector<std::string> verify_suites();

// Runs one suite (or "all") with the given seed.  Deterministic: identical
// seed gives identical results.  Throws std::invalid_argument for an
// unknown suite name.
std::vector<PropertyResult> run_verify(const std::string& suite,
                                       std::uint64_t seed = 0);

}  // namespace prabhakar
