#include "pbls/formula.hpp"

#include <algorithm>
#include <unordered_map>

namespace pbls {

Int NormalizedConstraint::coef_sum() const {
  Int s = 0;
  for (const Term& t : terms) s = checked_add(s, t.coef);
  return s;
}

Int NormalizedConstraint::lhs(const Assignment& a) const {
  // coef_sum() is validated when the constraint is built, so the partial sums
  // here stay in range without per-step checks.
  Int s = 0;
  for (const Term& t : terms)
    if (a.value(t.lit)) s += t.coef;
  return s;
}

Int Objective::negative_offset() const {
  Int s = 0;
  for (const Term& t : terms)
    if (t.coef < 0) s = checked_add(s, checked_neg(t.coef));
  return s;
}

Int Objective::value(const Assignment& a) const {
  Int s = 0;
  for (const Term& t : terms)
    if (a.value(t.lit)) s = checked_add(s, t.coef);
  return s;
}

bool PboInstance::feasible(const Assignment& a) const {
  for (const NormalizedConstraint& c : constraints)
    if (!c.satisfied_by(a)) return false;
  return true;
}

namespace {

// Rewrites terms over literals into merged terms over variables, using
// c*~x == c - c*x. Returns the merged (var, coef) list in first-occurrence
// order together with the adjusted right-hand side.
std::pair<std::vector<std::pair<Var, Int>>, Int> to_var_form(const std::vector<Term>& terms,
                                                             Int rhs) {
  std::unordered_map<Var, std::size_t> index_of;
  std::vector<std::pair<Var, Int>> merged;
  for (const Term& t : terms) {
    if (t.lit.var <= 0) throw std::invalid_argument("variable index must be positive");
    Int c = t.coef;
    if (!t.lit.positive) {
      rhs = checked_sub(rhs, c);
      c = checked_neg(c);
    }
    auto [it, fresh] = index_of.try_emplace(t.lit.var, merged.size());
    if (fresh)
      merged.emplace_back(t.lit.var, c);
    else
      merged[it->second].second = checked_add(merged[it->second].second, c);
  }
  return {std::move(merged), rhs};
}

NormalizedConstraint build_geq(const std::vector<std::pair<Var, Int>>& merged, int sign,
                               Int degree) {
  NormalizedConstraint out;
  out.degree = degree;
  for (const auto& [var, coef] : merged) {
    if (coef == 0) continue;
    Int c = sign < 0 ? checked_neg(coef) : coef;
    if (c > 0) {
      out.terms.push_back({c, {var, true}});
    } else {
      // c*x with c < 0 becomes |c|*~x, lifting the degree by |c|.
      c = checked_neg(c);
      out.terms.push_back({c, {var, false}});
      out.degree = checked_add(out.degree, c);
    }
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [](const Term& a, const Term& b) { return a.lit.var < b.lit.var; });
  out.coef_sum();  // validate that the coefficient sum fits in 64 bits
  return out;
}

}  // namespace

std::vector<NormalizedConstraint> normalize(const RawConstraint& raw) {
  auto [merged, rhs] = to_var_form(raw.terms, raw.rhs);

  std::vector<std::pair<int, Int>> directions;  // (sign applied to lhs, degree)
  switch (raw.op) {
    case RelOp::Ge:
      directions.push_back({+1, rhs});
      break;
    case RelOp::Gt:
      directions.push_back({+1, checked_add(rhs, 1)});
      break;
    case RelOp::Le:
      directions.push_back({-1, checked_neg(rhs)});
      break;
    case RelOp::Lt:
      // lhs < rhs over integers is -lhs >= -rhs + 1
      directions.push_back({-1, checked_add(checked_neg(rhs), 1)});
      break;
    case RelOp::Eq:
      directions.push_back({+1, rhs});
      directions.push_back({-1, checked_neg(rhs)});
      break;
  }

  std::vector<NormalizedConstraint> out;
  out.reserve(directions.size());
  for (const auto& [sign, degree] : directions) out.push_back(build_geq(merged, sign, degree));
  return out;
}

Objective normalize_objective(const std::vector<Term>& terms) {
  // Merge duplicate literals only: x and ~x of the same variable stay separate
  // terms, since the objective has no constant slot to absorb them into.
  std::unordered_map<Var, std::pair<std::size_t, std::size_t>> index_of;  // var -> (pos+1, neg+1)
  Objective out;
  for (const Term& t : terms) {
    if (t.lit.var <= 0) throw std::invalid_argument("variable index must be positive");
    auto& slots = index_of.try_emplace(t.lit.var, 0, 0).first->second;
    std::size_t& slot = t.lit.positive ? slots.first : slots.second;
    if (slot == 0) {
      out.terms.push_back(t);
      slot = out.terms.size();
    } else {
      Term& existing = out.terms[slot - 1];
      existing.coef = checked_add(existing.coef, t.coef);
    }
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coef == 0; });
  std::sort(out.terms.begin(), out.terms.end(), [](const Term& a, const Term& b) {
    if (a.lit.var != b.lit.var) return a.lit.var < b.lit.var;
    return a.lit.positive > b.lit.positive;
  });
  // Validate that no later evaluation can overflow: both the positive part and
  // the negative offset must fit individually.
  out.negative_offset();
  Int pos = 0;
  for (const Term& t : out.terms)
    if (t.coef > 0) pos = checked_add(pos, t.coef);
  return out;
}

Int constraint_violation(const NormalizedConstraint& c, const Assignment& a) {
  return c.violation(a);
}

Int objective_value(const Objective& o, const Assignment& a) { return o.value(a); }

}  // namespace pbls
