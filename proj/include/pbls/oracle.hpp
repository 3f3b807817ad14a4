#pragma once

#include <optional>
#include <vector>

#include "pbls/formula.hpp"

namespace pbls {

struct BruteForceResult {
  std::optional<Assignment> best;  // absent when no assignment is feasible
  Int objective = 0;

  bool feasible() const { return best.has_value(); }
};

/// Exhaustive reference solve for tests and --oracle mode. Enumerates all 2^n
/// assignments (n <= 24 enforced) and returns the minimum-objective model,
/// ties broken toward the lexicographically smallest assignment with x1 as
/// the most significant position.
BruteForceResult brute_force_solve(const PboInstance& inst);

/// All models of the instance in ascending lexicographic order (same variable
/// significance as above). n <= 20 enforced.
std::vector<Assignment> enumerate_models(const PboInstance& inst);

}  // namespace pbls
