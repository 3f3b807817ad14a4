#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbls {

using Var = int;           // 1-based variable index
using Int = std::int64_t;  // all instance arithmetic is checked 64-bit

struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Int checked_neg(Int a) { return checked_sub(0, a); }

struct Literal {
  Var var = 0;
  bool positive = true;  // true = x, false = ~x

  bool value_under(bool var_value) const { return positive == var_value; }
  Literal negated() const { return {var, !positive}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Term {
  Int coef = 0;
  Literal lit;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Total assignment over variables 1..n. Index 0 is unused.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : bits_(static_cast<std::size_t>(num_vars) + 1, 0) {}

  int num_vars() const { return static_cast<int>(bits_.size()) - 1; }
  bool get(Var v) const { return bits_[static_cast<std::size_t>(v)] != 0; }
  void set(Var v, bool value) { bits_[static_cast<std::size_t>(v)] = value ? 1 : 0; }
  void toggle(Var v) { bits_[static_cast<std::size_t>(v)] ^= 1; }

  bool value(const Literal& l) const { return l.value_under(get(l.var)); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Constraint in canonical form: sum of coef*lit >= degree with all coef > 0,
/// at most one term per variable, terms sorted by variable index.
struct NormalizedConstraint {
  std::vector<Term> terms;
  Int degree = 0;

  bool trivially_satisfied() const { return degree <= 0; }

  Int coef_sum() const;  // checked at construction, so plain sums are safe afterwards
  Int lhs(const Assignment& a) const;
  Int violation(const Assignment& a) const { return std::max<Int>(0, degree - lhs(a)); }
  bool satisfied_by(const Assignment& a) const { return lhs(a) >= degree; }
};

/// Linear minimization objective over literals. Coefficients may be negative;
/// zero coefficients are dropped and duplicate literals merged.
struct Objective {
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
  Int negative_offset() const;  // sum of |c| over negative coefficients
  Int value(const Assignment& a) const;
};

struct PboInstance {
  int num_vars = 0;
  std::vector<NormalizedConstraint> constraints;
  Objective objective;

  std::string var_name(Var v) const { return "x" + std::to_string(v); }
  bool feasible(const Assignment& a) const;
};

enum class RelOp { Eq, Le, Lt, Ge, Gt };

/// A constraint as written in the input, before normalization.
struct RawConstraint {
  std::vector<Term> terms;
  RelOp op = RelOp::Ge;
  Int rhs = 0;
};

/// Rewrites a raw constraint into >= form with positive coefficients.
/// `=` splits into two constraints, strict inequalities tighten by one, and
/// duplicate-variable terms are merged first. Results with degree <= 0 are
/// trivially satisfied; callers usually drop them.
std::vector<NormalizedConstraint> normalize(const RawConstraint& raw);

/// Canonical objective from raw terms: duplicate literals merged, zero
/// coefficients dropped, terms sorted by (var, polarity).
Objective normalize_objective(const std::vector<Term>& terms);

Int constraint_violation(const NormalizedConstraint& c, const Assignment& a);
Int objective_value(const Objective& o, const Assignment& a);

}  // namespace pbls
