#include "pbls/generator.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "pbls/rng.hpp"

namespace pbls {

PboInstance generate_instance(int num_vars, int num_constraints, Int max_coeff, double density,
                              std::uint64_t seed) {
  if (num_vars < 1 || num_constraints < 0 || max_coeff < 1)
    throw std::invalid_argument("generator parameters must be positive");
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("density must be in [0,1]");

  std::mt19937_64 rng(seed);
  PboInstance inst;
  inst.num_vars = num_vars;

  Assignment planted(num_vars);
  for (Var v = 1; v <= num_vars; ++v) planted.set(v, rand_below(rng, 2) == 1);

  for (int c = 0; c < num_constraints; ++c) {
    NormalizedConstraint nc;
    for (Var v = 1; v <= num_vars; ++v) {
      if (rand_unit(rng) >= density) continue;
      const Int coef = 1 + static_cast<Int>(rand_below(rng, static_cast<std::uint64_t>(max_coeff)));
      nc.terms.push_back({coef, {v, rand_below(rng, 2) == 1}});
    }
    if (nc.terms.empty()) {
      const Var v = 1 + static_cast<Var>(rand_below(rng, static_cast<std::uint64_t>(num_vars)));
      const Int coef = 1 + static_cast<Int>(rand_below(rng, static_cast<std::uint64_t>(max_coeff)));
      nc.terms.push_back({coef, {v, rand_below(rng, 2) == 1}});
    }
    Int planted_lhs = 0;
    for (const Term& t : nc.terms)
      if (planted.value(t.lit)) planted_lhs += t.coef;
    if (planted_lhs == 0) {
      // make the planted model satisfy at least one literal
      Term& t = nc.terms[rand_below(rng, nc.terms.size())];
      t.lit.positive = planted.get(t.lit.var);
      planted_lhs = t.coef;
    }
    nc.degree = 1 + static_cast<Int>(rand_below(rng, static_cast<std::uint64_t>(planted_lhs)));
    std::sort(nc.terms.begin(), nc.terms.end(),
              [](const Term& a, const Term& b) { return a.lit.var < b.lit.var; });
    assert(nc.lhs(planted) >= nc.degree);
    inst.constraints.push_back(std::move(nc));
  }

  std::vector<Term> objective_terms;
  for (Var v = 1; v <= num_vars; ++v) {
    if (rand_unit(rng) >= 0.8) continue;  // most variables carry a cost
    Int coef = 1 + static_cast<Int>(rand_below(rng, static_cast<std::uint64_t>(max_coeff)));
    if (rand_below(rng, 2) == 1) coef = -coef;
    objective_terms.push_back({coef, {v, true}});
  }
  inst.objective = normalize_objective(objective_terms);
  return inst;
}

}  // namespace pbls
