#include "pbls/presolve.hpp"

#include <algorithm>
#include <numeric>

#include "pbls/rng.hpp"

namespace pbls {

bool PresolveResult::consistent_with(const Assignment& a) const {
  for (Var v : fixed_vars_)
    if (a.get(v) != fixed_value(v)) return false;
  return true;
}

Assignment PresolveResult::lift(const Assignment& a) const {
  if (a.num_vars() != simplified.num_vars)
    throw std::invalid_argument("assignment does not match the simplified instance");
  Assignment out = a;
  for (Var v : fixed_vars_) out.set(v, fixed_value(v));
  return out;
}

Assignment lift_solution(const Assignment& a, const PresolveResult& r) { return r.lift(a); }

std::vector<AssumedLiteral> select_assumed_literals(int num_workers, int num_vars,
                                                    std::uint64_t seed, bool* fell_back) {
  if (fell_back) *fell_back = false;
  if (num_workers < 1) throw std::invalid_argument("need at least one worker");
  if (num_vars < 0) throw std::invalid_argument("negative variable count");
  if (num_vars == 0) return {};

  const int need = (num_workers + 1) / 2;
  std::mt19937_64 rng(seed);
  std::vector<Var> picks;
  picks.reserve(static_cast<std::size_t>(need));
  if (num_vars >= need) {
    // partial Fisher-Yates: the first `need` slots are a uniform sample
    // without replacement
    std::vector<Var> ids(static_cast<std::size_t>(num_vars));
    std::iota(ids.begin(), ids.end(), 1);
    for (int i = 0; i < need; ++i) {
      std::size_t j = static_cast<std::size_t>(i) +
                      static_cast<std::size_t>(rand_below(rng, static_cast<std::uint64_t>(num_vars - i)));
      std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
      picks.push_back(ids[static_cast<std::size_t>(i)]);
    }
  } else {
    if (fell_back) *fell_back = true;
    for (int i = 0; i < need; ++i)
      picks.push_back(1 + static_cast<Var>(rand_below(rng, static_cast<std::uint64_t>(num_vars))));
  }

  std::vector<AssumedLiteral> out;
  out.reserve(picks.size() * 2);
  for (Var v : picks) {
    out.push_back({v, false});
    out.push_back({v, true});
  }
  return out;
}

PresolveResult assume_and_propagate(const PboInstance& inst, AssumedLiteral assumption) {
  if (assumption.var < 1 || assumption.var > inst.num_vars)
    throw std::invalid_argument("assumed variable is out of range");

  const std::size_t m = inst.constraints.size();
  std::vector<std::vector<Term>> terms(m);
  std::vector<Int> degree(m), sum(m);
  std::vector<char> alive(m, 1);
  std::vector<std::vector<std::size_t>> occ(static_cast<std::size_t>(inst.num_vars) + 1);
  for (std::size_t j = 0; j < m; ++j) {
    const NormalizedConstraint& c = inst.constraints[j];
    terms[j] = c.terms;
    degree[j] = c.degree;
    sum[j] = c.coef_sum();
    for (const Term& t : c.terms) occ[static_cast<std::size_t>(t.lit.var)].push_back(j);
  }

  PresolveResult res(inst.num_vars);
  res.assumption = assumption;

  std::vector<Var> queue;
  bool conflict = false;
  auto enqueue = [&](Var v, bool value) {
    if (res.is_fixed(v)) {
      if (res.fixed_value(v) != value) conflict = true;  // forced both ways
      return;
    }
    res.fix(v, value);
    queue.push_back(v);
  };
  enqueue(assumption.var, assumption.value);

  for (std::size_t qhead = 0; qhead < queue.size() && !conflict; ++qhead) {
    const Var x = queue[qhead];
    const bool vx = res.fixed_value(x);
    for (std::size_t j : occ[static_cast<std::size_t>(x)]) {
      if (!alive[j]) continue;
      auto it = std::find_if(terms[j].begin(), terms[j].end(),
                             [&](const Term& t) { return t.lit.var == x; });
      if (it == terms[j].end()) continue;
      const Term t = *it;
      terms[j].erase(it);  // preserves the by-variable ordering
      sum[j] -= t.coef;
      if (t.lit.value_under(vx)) degree[j] -= t.coef;
      if (degree[j] <= 0) {
        alive[j] = 0;  // satisfied outright
        continue;
      }
      if (sum[j] < degree[j]) {
        conflict = true;  // even all-true cannot reach the degree
        break;
      }
      // Any literal whose loss would leave sum < degree must be true.
      for (const Term& u : terms[j]) {
        if (sum[j] - u.coef + 1 <= degree[j]) {
          enqueue(u.lit.var, u.lit.positive);
          if (conflict) break;
        }
      }
      if (conflict) break;
    }
  }

  res.conflict = conflict;
  if (conflict) return res;  // no simplified instance on conflict

  res.simplified.num_vars = inst.num_vars;
  for (std::size_t j = 0; j < m; ++j) {
    if (!alive[j]) continue;
    NormalizedConstraint c;
    c.terms = std::move(terms[j]);
    c.degree = degree[j];
    res.simplified.constraints.push_back(std::move(c));
  }
  for (const Term& t : inst.objective.terms) {
    if (res.is_fixed(t.lit.var)) {
      if (t.lit.value_under(res.fixed_value(t.lit.var)))
        res.objective_offset = checked_add(res.objective_offset, t.coef);
    } else {
      res.simplified.objective.terms.push_back(t);
    }
  }
  return res;
}

PresolveResult identity_presolve(const PboInstance& inst) {
  PresolveResult res(inst.num_vars);
  res.simplified = inst;
  return res;
}

}  // namespace pbls
