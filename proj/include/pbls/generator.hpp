#pragma once

#include <cstdint>

#include "pbls/formula.hpp"

namespace pbls {

/// Seeded random instance that is satisfiable by construction: a random model
/// is planted first and every constraint's degree is drawn from [1, planted
/// lhs], so the planted assignment satisfies everything. Constraints come out
/// normalized (positive coefficients in [1, max_coeff], >= form); `density`
/// is the probability that a variable occurs in a given constraint (at least
/// one term is forced). The objective gives most variables a nonzero
/// coefficient in [-max_coeff, max_coeff].
PboInstance generate_instance(int num_vars, int num_constraints, Int max_coeff, double density,
                              std::uint64_t seed);

}  // namespace pbls
