#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pbls/formula.hpp"

namespace pbls {

/// Exact rational, normalized to positive denominator and lowest terms.
struct Rational {
  Int num = 0;
  Int den = 1;

  Rational() = default;
  Rational(Int n, Int d);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Normalized competition score
///   sc* = (1 + cost_best + offset) / (1 + cost_s + offset)
/// where offset is the sum of |c| over the instance's negative objective
/// coefficients (so both sides are guaranteed non-negative). Requires
/// cost_best <= cost_s and costs no smaller than -offset.
Rational competition_score(Int cost_best, Int cost_s, Int negative_offset);

/// One line of a result CSV: instance, solver, cost, status, and optionally
/// the instance's negative offset (defaults to 0 when the column is absent).
/// Status is "feasible" (aliases: sat, satisfiable, ok, solved) or anything
/// that reports no solution (infeasible, unknown, timeout, none, -). The cost
/// field may be empty or "-" for no-solution rows.
struct ResultRow {
  std::string instance;
  std::string solver;
  bool feasible = false;
  Int cost = 0;    // meaningful only when feasible
  Int offset = 0;
};

std::vector<ResultRow> parse_result_csv(std::istream& in);

struct SolverSummary {
  std::string solver;
  double avg_score = 0.0;  // mean sc* over all instances, 0 for unsolved ones
  int wins = 0;            // instances where the solver matches cost_best
  int solved = 0;
};

struct ScoreReport {
  int num_instances = 0;
  std::vector<SolverSummary> solvers;  // best average first
};

/// Aggregates rows into per-solver averages and #win counts. An instance
/// nobody solved counts toward num_instances and scores 0 for everyone.
/// Duplicate (instance, solver) rows or inconsistent per-instance offsets are
/// input errors.
ScoreReport build_score_report(const std::vector<ResultRow>& rows);

void print_score_report(const ScoreReport& report, std::ostream& out);

}  // namespace pbls
