#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "pbls/formula.hpp"

namespace pbls {

struct Solution {
  Assignment assignment;  // over the original instance's variables
  Int objective = 0;      // original-space objective value
  int source_worker = -1;
  long long discovery_step = 0;
};

/// Number of positions where two equal-length assignments differ.
long long hamming(const Assignment& a, const Assignment& b);

/// Rank-mixed rating: rank 1 goes to the smallest objective and to the
/// largest diversity, ties broken by index (earlier index ranks better), and
/// r_mix[i] = rank_obj[i]*p_star + rank_div[i]*(1-p_star). Smaller is better.
std::vector<double> rate_mix(const std::vector<Int>& objectives,
                             const std::vector<long long>& diversities, double p_star);

/// Per-variable polarity bias in [1-eps, 1+eps], starting at 1. Readers may
/// observe a weight at most one insertion stale (relaxed atomics); all writes
/// happen under the pool lock.
class PolarityTable {
 public:
  PolarityTable(int num_vars, double beta, double epsilon);

  int num_vars() const { return n_; }
  double beta() const { return beta_; }
  double epsilon() const { return eps_; }

  double weight(Var v) const { return w_[static_cast<std::size_t>(v)].load(std::memory_order_relaxed); }

  /// Nudges every weight toward the polarity used in s: +beta where the
  /// variable is 1, -beta where it is 0, clamped to [1-eps, 1+eps].
  void absorb(const Assignment& s);

 private:
  std::unique_ptr<std::atomic<double>[]> w_;
  int n_;
  double beta_;
  double eps_;
};

struct InsertResult {
  enum class Kind { Inserted, Replaced, RejectedDuplicate, RejectedWorst };

  Kind kind = Kind::Inserted;
  std::optional<Solution> evicted;  // set for Kind::Replaced

  bool accepted() const { return kind == Kind::Inserted || kind == Kind::Replaced; }
};

/// Bounded, linearizable store of feasible solutions shared by all workers.
/// Every mutating or reading operation takes the internal lock; polarity
/// weights alone are readable lock-free through the PolarityTable.
class SolutionPool {
 public:
  SolutionPool(PboInstance original, std::size_t capacity, double p_star, double beta,
               double epsilon);

  /// Validates s against the original instance (feasibility and the stored
  /// objective value) and inserts it unless it is a duplicate or rates worst.
  /// A validation failure is a solver bug and throws std::logic_error.
  InsertResult try_insert(Solution s);

  /// Delta-proportional restart pick: candidates are the entries with
  /// objective <= the caller's best plus the caller's best itself, each drawn
  /// with probability proportional to (caller objective - its objective).
  /// With no weight anywhere the caller's best comes back. A caller that has
  /// no best yet receives a uniformly random entry, or nothing if the pool is
  /// empty.
  std::optional<Solution> select_for_restart(const std::optional<Solution>& caller_best,
                                             std::mt19937_64& rng) const;

  /// Sum of Hamming distances from s to the pool entries. An entry equal to s
  /// contributes zero, which matches the self-excluded definition.
  long long diversity(const Assignment& s) const;

  const PolarityTable& polarity() const { return polarity_; }

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::vector<Solution> entries() const;  // snapshot, oldest first

  /// Optional event log: one line per insert/evict/reject with objective,
  /// diversity, and r_mix. Not owned; pass nullptr to disable.
  void set_trace(std::ostream* out);

 private:
  void validate(const Solution& s) const;
  long long diversity_against_entries(const Assignment& a) const;

  PboInstance original_;
  std::size_t capacity_;
  double p_star_;
  PolarityTable polarity_;

  mutable std::mutex mu_;
  std::vector<Solution> entries_;  // oldest first
  std::ostream* trace_ = nullptr;
};

}  // namespace pbls
