#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "pbls/formula.hpp"
#include "pbls/pool.hpp"
#include "pbls/presolve.hpp"

namespace pbls {

struct SearchConfig {
  long long K = 566024;        // ratio window length, in steps
  long long R = 86295;         // stagnation limit before a pool restart
  double inc = 1.15;           // geometric ratio step, > 1
  std::uint64_t seed = 0;
  Int weight_cap = 1'000'000;  // additive constraint weights saturate here
  int bms_samples = 50;        // candidates examined per pick_variable call
  double ratio_min = 1e-6;     // clamp range for the dynamic ratio
  double ratio_max = 1e6;
  long long max_steps = 0;     // 0 = no step budget

  void validate() const;  // throws std::invalid_argument on nonsense
};

/// One worker's local search over a (possibly presolve-simplified) instance.
/// The search flips one variable per step, chosen by a weighted score that
/// trades hard-constraint repair against objective improvement:
///
///   hscore(x)  = drop in weighted hard violation if x were flipped
///   oscore(x)  = drop in weighted objective if x were flipped
///   score*(x)  = hscore(x) + p * oscore(x)        with p adapted every K steps
///   score**(x) = score*(x) * w_pd(x)  if x is 0   (polarity bias from the pool)
///              = score*(x) / w_pd(x)  if x is 1
///
/// Hard-constraint penalties are w(c) * max(0, degree - lhs); the objective
/// penalty is w(oc) * objective. Scores are computed on demand from the live
/// lhs cache in O(occurrences of x).
class LocalSearch {
 public:
  LocalSearch(const PboInstance& inst, const SearchConfig& cfg,
              const PolarityTable* polarity = nullptr);

  /// Called whenever a strictly better feasible assignment is adopted.
  std::function<void(const Assignment&, Int)> on_new_best;

  Int hscore(Var v) const;
  Int oscore(Var v) const;
  double dynamic_score(Var v) const { return static_cast<double>(hscore(v)) + ratio_ * static_cast<double>(oscore(v)); }
  double combined_score(Var v, double w_pd) const;
  double combined_score(Var v) const;

  /// Best positively scored variable among a bounded random sample of those
  /// in falsified constraints or with a nonzero objective coefficient; exact
  /// score ties are broken uniformly at random. Empty when no sampled
  /// variable scores above zero.
  std::optional<Var> pick_variable();

  /// Flips one variable and refreshes all incremental caches, the step
  /// counters, and (when the new state is feasible and strictly better) the
  /// best solution.
  void flip(Var v);

  /// Local-optimum move: bump the weights of falsified constraints (or the
  /// objective weight when feasible) and make one randomized flip.
  void escape_local_optimum();

  /// End-of-window ratio update: p grows by `inc` if the window saw any
  /// feasible assignment and shrinks by it otherwise, clamped.
  void update_ratio();

  /// Adopts a new starting assignment: caches rebuilt, stagnation reset,
  /// weights and p retained. Does not touch the incumbent best; the next
  /// feasibility check does.
  void restart_from(const Assignment& a);

  /// Feasibility check of the current state, updating the incumbent best.
  /// Run once after construction and after each restart.
  void evaluate_current();

  /// One full search step: greedy flip or escape, plus window bookkeeping.
  void step();

  bool feasible() const { return falsified_.empty(); }
  Int objective() const { return obj_cur_; }
  const Assignment& assignment() const { return cur_; }
  bool has_best() const { return best_.has_value(); }
  Int best_objective() const { return best_obj_; }
  const Assignment& best_assignment() const { return *best_; }
  double ratio() const { return ratio_; }
  long long step_count() const { return step_count_; }
  long long steps_since_improvement() const { return since_improve_; }
  void reset_stagnation() { since_improve_ = 0; }
  bool window_feasible_found() const { return window_feasible_; }
  std::size_t num_falsified() const { return falsified_.size(); }
  Int hard_weight(std::size_t c) const { return weight_[c]; }
  Int obj_weight() const { return obj_weight_; }
  std::mt19937_64& rng() { return rng_; }

  // test hooks: they keep every cache consistent but skip best/stagnation
  void set_assignment(const Assignment& a);
  void set_ratio(double p);
  void set_hard_weight(std::size_t c, Int w);
  void set_obj_weight(Int w);

  /// Recomputes every cache from scratch and compares; true when consistent.
  bool check_caches() const;

 private:
  void rebuild_caches();
  void update_falsified(std::size_t c);
  void note_if_new_best();

  struct ConstraintOcc {
    std::size_t c;
    Int coef;
    bool positive;
  };
  struct ObjectiveOcc {
    Int coef;
    bool positive;
  };

  const PboInstance* inst_;
  SearchConfig cfg_;
  const PolarityTable* polarity_;
  std::mt19937_64 rng_;

  Assignment cur_;
  std::vector<Int> weight_;
  Int obj_weight_ = 1;
  double ratio_ = 1.0;
  std::vector<Int> lhs_;
  std::vector<std::size_t> falsified_;       // ids of violated constraints
  std::vector<std::ptrdiff_t> falsified_pos_;  // position in falsified_, or -1
  Int obj_cur_ = 0;

  std::optional<Assignment> best_;
  Int best_obj_ = 0;
  long long step_count_ = 0;
  long long since_improve_ = 0;
  bool window_feasible_ = false;

  std::vector<std::vector<ConstraintOcc>> occ_;
  std::vector<std::vector<ObjectiveOcc>> obj_occ_;
  std::vector<Var> obj_vars_;

  // pick_variable scratch, kept to avoid per-step allocation
  std::vector<Var> cand_;
  std::vector<int> cand_epoch_;
  int epoch_ = 0;
  std::vector<Var> tied_;
};

struct WorkerStats {
  long long steps = 0;
  long long restarts = 0;
  long long submissions = 0;  // strict improvements handed to the pool/master
};

struct WorkerResult {
  std::optional<Solution> best;  // lifted back to the original variable space
  WorkerStats stats;
};

/// Drives one worker: greedy flips with escapes, a ratio update every K
/// steps, and a pool restart after R stagnant steps. New bests are lifted to
/// the original space and submitted to the pool as they appear. Honors `stop`
/// within one step.
WorkerResult run_worker(const PresolveResult& pre, const SearchConfig& cfg, SolutionPool* pool,
                        const std::atomic<bool>& stop, int worker_id,
                        const std::function<void(const Solution&)>& on_improvement = {});

}  // namespace pbls
