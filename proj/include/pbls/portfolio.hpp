#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pbls/formula.hpp"
#include "pbls/search.hpp"

namespace pbls {

struct PortfolioConfig {
  int num_workers = 32;
  double cutoff_seconds = 300.0;
  std::uint64_t seed = 0;
  SearchConfig search;        // per-worker seed becomes seed + worker index
  std::size_t pool_size = 18;
  double p_star = 0.58;
  double beta = 0.03;
  double epsilon = 0.144;

  /// Stop as soon as a solution with objective <= target is found. Used by
  /// scripted runs and tests; normal solving leaves it unset.
  std::optional<Int> target_objective;

  /// Called with each strict improvement of the global best, serialized and
  /// in decreasing objective order.
  std::function<void(const Solution&)> on_improvement;
  /// Human-readable diagnostics (presolve contradictions and the like).
  std::function<void(const std::string&)> on_comment;
  std::ostream* pool_trace = nullptr;

  void validate() const;
};

enum class RunStatus { FeasibleFound, Unknown };

struct RunResult {
  std::optional<Solution> best;
  RunStatus status = RunStatus::Unknown;
  std::vector<WorkerStats> worker_stats;
  double elapsed_seconds = 0.0;
};

/// Runs the full portfolio: the master assumes one literal per worker (a
/// variable for every two workers, once with each polarity), presolves
/// sequentially, then launches T search threads over one shared pool. A
/// contradicted assumption falls back to the opposite polarity and then to an
/// unassumed run. Stops at the cutoff, the step budget, or the target
/// objective, and returns the re-validated best solution.
RunResult run_portfolio(const PboInstance& inst, const PortfolioConfig& cfg);

/// Strict-improvement fold over improvement events in arrival order: the
/// result is the first solution of the minimum objective.
std::optional<Solution> aggregate_best(const std::vector<Solution>& events);

}  // namespace pbls
