#include "pbls/oracle.hpp"

#include <stdexcept>

namespace pbls {

namespace {

Assignment from_mask(int n, std::uint32_t mask) {
  Assignment a(n);
  for (Var v = 1; v <= n; ++v) a.set(v, (mask >> (n - v)) & 1u);
  return a;
}

}  // namespace

BruteForceResult brute_force_solve(const PboInstance& inst) {
  if (inst.num_vars > 24)
    throw std::invalid_argument("brute force is limited to 24 variables");
  const int n = inst.num_vars;
  BruteForceResult out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const Assignment a = from_mask(n, mask);
    if (!inst.feasible(a)) continue;
    const Int obj = inst.objective.value(a);
    if (!out.best || obj < out.objective) {  // strict: first hit wins ties, and
      out.best = a;                          // masks ascend lexicographically
      out.objective = obj;
    }
  }
  return out;
}

std::vector<Assignment> enumerate_models(const PboInstance& inst) {
  if (inst.num_vars > 20)
    throw std::invalid_argument("model enumeration is limited to 20 variables");
  const int n = inst.num_vars;
  std::vector<Assignment> models;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Assignment a = from_mask(n, mask);
    if (inst.feasible(a)) models.push_back(std::move(a));
  }
  return models;
}

}  // namespace pbls
