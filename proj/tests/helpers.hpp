#pragma once

#include <initializer_list>
#include <set>
#include <vector>

#include "pbls/formula.hpp"
#include "pbls/opb.hpp"

namespace testutil {

// Running example used across suites:
//   min 10 x1 + 20 x2 + 30 x3   s.t.   2 x1 + 3 x2 + 4 x3 >= 5
inline const char* kExample1Text =
    "* #variable= 3 #constraint= 1\n"
    "min: +10 x1 +20 x2 +30 x3 ;\n"
    "+2 x1 +3 x2 +4 x3 >= 5 ;\n";

inline pbls::PboInstance example1() { return pbls::parse_opb_string(kExample1Text); }

inline pbls::Assignment make_assignment(std::initializer_list<int> bits) {
  pbls::Assignment a(static_cast<int>(bits.size()));
  pbls::Var v = 1;
  for (int b : bits) a.set(v++, b != 0);
  return a;
}

// Direct evaluation of a raw constraint, independent of normalize().
inline bool raw_holds(const pbls::RawConstraint& raw, const pbls::Assignment& a) {
  __int128 lhs = 0;
  for (const pbls::Term& t : raw.terms)
    if (a.value(t.lit)) lhs += t.coef;
  const __int128 rhs = raw.rhs;
  switch (raw.op) {
    case pbls::RelOp::Eq: return lhs == rhs;
    case pbls::RelOp::Le: return lhs <= rhs;
    case pbls::RelOp::Lt: return lhs < rhs;
    case pbls::RelOp::Ge: return lhs >= rhs;
    case pbls::RelOp::Gt: return lhs > rhs;
  }
  return false;
}

inline std::uint32_t assignment_mask(const pbls::Assignment& a) {
  std::uint32_t mask = 0;
  for (pbls::Var v = 1; v <= a.num_vars(); ++v)
    mask = (mask << 1) | (a.get(v) ? 1u : 0u);
  return mask;
}

inline pbls::Assignment assignment_from_mask(int n, std::uint32_t mask) {
  pbls::Assignment a(n);
  for (pbls::Var v = 1; v <= n; ++v) a.set(v, (mask >> (n - v)) & 1u);
  return a;
}

inline std::set<std::uint32_t> model_masks(const pbls::PboInstance& inst) {
  std::set<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << inst.num_vars); ++mask)
    if (inst.feasible(assignment_from_mask(inst.num_vars, mask))) out.insert(mask);
  return out;
}

}  // namespace testutil
