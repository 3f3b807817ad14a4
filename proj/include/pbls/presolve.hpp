#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pbls/formula.hpp"

namespace pbls {

struct AssumedLiteral {
  Var var = 0;
  bool value = false;

  friend bool operator==(const AssumedLiteral&, const AssumedLiteral&) = default;
};

/// Result of assuming one literal and propagating. The simplified instance
/// keeps the original variable numbering; fixed variables simply no longer
/// occur in its constraints or objective.
struct PresolveResult {
  PboInstance simplified;
  Int objective_offset = 0;  // objective contribution of the fixed variables
  bool conflict = false;
  std::optional<AssumedLiteral> assumption;

  bool is_fixed(Var v) const { return fixed_value_[static_cast<std::size_t>(v)] >= 0; }
  bool fixed_value(Var v) const { return fixed_value_[static_cast<std::size_t>(v)] == 1; }
  const std::vector<Var>& fixed_vars() const { return fixed_vars_; }
  int num_free() const { return simplified.num_vars - static_cast<int>(fixed_vars_.size()); }

  /// True if `a` assigns every fixed variable its fixed value.
  bool consistent_with(const Assignment& a) const;

  /// Extends an assignment of the simplified instance to the original one:
  /// free variables keep their values, fixed variables are overwritten.
  Assignment lift(const Assignment& a) const;

  void fix(Var v, bool value) {
    fixed_value_[static_cast<std::size_t>(v)] = value ? 1 : 0;
    fixed_vars_.push_back(v);
  }

  explicit PresolveResult(int num_vars = 0)
      : fixed_value_(static_cast<std::size_t>(num_vars) + 1, -1) {}

 private:
  std::vector<signed char> fixed_value_;  // -1 free, otherwise 0/1
  std::vector<Var> fixed_vars_;           // in the order they were fixed
};

/// Picks ceil(num_workers / 2) distinct variables at random and pairs each
/// with both polarities: selection i yields (v_i, 0) for worker 2i-1 and
/// (v_i, 1) for worker 2i (1-based workers). If there are fewer variables
/// than selections, sampling falls back to drawing with replacement and
/// `fell_back`, when given, is set.
std::vector<AssumedLiteral> select_assumed_literals(int num_workers, int num_vars,
                                                    std::uint64_t seed,
                                                    bool* fell_back = nullptr);

/// Fixes the assumed literal and runs unit propagation: eliminating a
/// satisfied literal lowers both the live degree and the live coefficient sum,
/// eliminating a falsified one lowers only the sum; a constraint whose live
/// degree drops to zero or below is deleted, a live sum below the live degree
/// is a conflict, and any literal whose loss would make the constraint
/// unsatisfiable is forced to 1.
PresolveResult assume_and_propagate(const PboInstance& inst, AssumedLiteral assumption);

/// Presolve that fixes nothing; used for workers that run unassumed.
PresolveResult identity_presolve(const PboInstance& inst);

/// Free-function form of PresolveResult::lift.
Assignment lift_solution(const Assignment& a, const PresolveResult& r);

}  // namespace pbls
