#include "pbls/pool.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "pbls/rng.hpp"

namespace pbls {

long long hamming(const Assignment& a, const Assignment& b) {
  if (a.num_vars() != b.num_vars())
    throw std::invalid_argument("hamming distance of assignments with different lengths");
  long long d = 0;
  for (Var v = 1; v <= a.num_vars(); ++v) d += a.get(v) != b.get(v);
  return d;
}

std::vector<double> rate_mix(const std::vector<Int>& objectives,
                             const std::vector<long long>& diversities, double p_star) {
  if (objectives.size() != diversities.size())
    throw std::invalid_argument("objective/diversity size mismatch");
  if (!(p_star >= 0.0 && p_star <= 1.0)) throw std::invalid_argument("p_star must be in [0,1]");
  const std::size_t k = objectives.size();

  std::vector<std::size_t> order(k);
  std::vector<int> rank_obj(k), rank_div(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (objectives[a] != objectives[b]) return objectives[a] < objectives[b];
    return a < b;  // older entry gets the better rank
  });
  for (std::size_t r = 0; r < k; ++r) rank_obj[order[r]] = static_cast<int>(r) + 1;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (diversities[a] != diversities[b]) return diversities[a] > diversities[b];
    return a < b;
  });
  for (std::size_t r = 0; r < k; ++r) rank_div[order[r]] = static_cast<int>(r) + 1;

  std::vector<double> r_mix(k);
  for (std::size_t i = 0; i < k; ++i)
    r_mix[i] = rank_obj[i] * p_star + rank_div[i] * (1.0 - p_star);
  return r_mix;
}

PolarityTable::PolarityTable(int num_vars, double beta, double epsilon)
    : w_(new std::atomic<double>[static_cast<std::size_t>(num_vars) + 1]),
      n_(num_vars),
      beta_(beta),
      eps_(epsilon) {
  if (num_vars < 0) throw std::invalid_argument("negative variable count");
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  for (std::size_t i = 0; i <= static_cast<std::size_t>(num_vars); ++i)
    w_[i].store(1.0, std::memory_order_relaxed);
}

void PolarityTable::absorb(const Assignment& s) {
  for (Var v = 1; v <= n_; ++v) {
    const std::size_t i = static_cast<std::size_t>(v);
    double w = w_[i].load(std::memory_order_relaxed);
    w = s.get(v) ? std::min(w + beta_, 1.0 + eps_) : std::max(w - beta_, 1.0 - eps_);
    w_[i].store(w, std::memory_order_relaxed);
  }
}

SolutionPool::SolutionPool(PboInstance original, std::size_t capacity, double p_star, double beta,
                           double epsilon)
    : original_(std::move(original)),
      capacity_(capacity),
      p_star_(p_star),
      polarity_(original_.num_vars, beta, epsilon) {
  if (capacity == 0) throw std::invalid_argument("pool capacity must be at least 1");
  if (!(p_star >= 0.0 && p_star <= 1.0)) throw std::invalid_argument("p_star must be in [0,1]");
}

void SolutionPool::validate(const Solution& s) const {
  if (s.assignment.num_vars() != original_.num_vars)
    throw std::logic_error("pool received an assignment of the wrong length");
  if (!original_.feasible(s.assignment))
    throw std::logic_error("pool received an infeasible solution");
  if (original_.objective.value(s.assignment) != s.objective)
    throw std::logic_error("pool received a solution with a stale objective value");
}

long long SolutionPool::diversity_against_entries(const Assignment& a) const {
  long long d = 0;
  for (const Solution& e : entries_) d += hamming(a, e.assignment);
  return d;
}

InsertResult SolutionPool::try_insert(Solution s) {
  validate(s);
  std::lock_guard<std::mutex> lock(mu_);

  for (const Solution& e : entries_)
    if (e.assignment == s.assignment) {
      if (trace_) *trace_ << "reject-dup obj=" << s.objective << " worker=" << s.source_worker
                          << '\n';
      return {InsertResult::Kind::RejectedDuplicate, std::nullopt};
    }

  if (entries_.size() < capacity_) {
    const long long div = diversity_against_entries(s.assignment);
    entries_.push_back(std::move(s));
    polarity_.absorb(entries_.back().assignment);
    if (trace_)
      *trace_ << "insert obj=" << entries_.back().objective << " div=" << div
              << " worker=" << entries_.back().source_worker << '\n';
    return {InsertResult::Kind::Inserted, std::nullopt};
  }

  // Full pool: rate entries plus the candidate (candidate has the youngest
  // index) and drop whichever rates worst. Diversity is pairwise within that
  // set, self excluded.
  const std::size_t k = entries_.size();
  std::vector<const Assignment*> all;
  all.reserve(k + 1);
  std::vector<Int> objs;
  objs.reserve(k + 1);
  for (const Solution& e : entries_) {
    all.push_back(&e.assignment);
    objs.push_back(e.objective);
  }
  all.push_back(&s.assignment);
  objs.push_back(s.objective);
  std::vector<long long> divs(k + 1, 0);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const long long h = hamming(*all[i], *all[j]);
      divs[i] += h;
      divs[j] += h;
    }
  const std::vector<double> r = rate_mix(objs, divs, p_star_);
  std::size_t worst = 0;
  for (std::size_t i = 1; i < r.size(); ++i)
    if (r[i] >= r[worst]) worst = i;  // exact tie evicts the youngest

  if (worst == k) {
    if (trace_)
      *trace_ << "reject-worst obj=" << s.objective << " div=" << divs[k] << " rmix=" << r[k]
              << " worker=" << s.source_worker << '\n';
    return {InsertResult::Kind::RejectedWorst, std::nullopt};
  }
  InsertResult result{InsertResult::Kind::Replaced, std::move(entries_[worst])};
  if (trace_)
    *trace_ << "evict obj=" << result.evicted->objective << " div=" << divs[worst]
            << " rmix=" << r[worst] << '\n'
            << "insert obj=" << s.objective << " div=" << divs[k] << " rmix=" << r[k]
            << " worker=" << s.source_worker << '\n';
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
  entries_.push_back(std::move(s));
  polarity_.absorb(entries_.back().assignment);
  return result;
}

std::optional<Solution> SolutionPool::select_for_restart(
    const std::optional<Solution>& caller_best, std::mt19937_64& rng) const {
  std::lock_guard<std::mutex> lock(mu_);
#ifndef NDEBUG
  for (const Solution& e : entries_) validate(e);
#endif
  if (!caller_best) {
    if (entries_.empty()) return std::nullopt;
    return entries_[rand_below(rng, entries_.size())];
  }

  const Int best_obj = caller_best->objective;
  std::vector<const Solution*> candidates;
  for (const Solution& e : entries_)
    if (e.objective <= best_obj) candidates.push_back(&e);
  candidates.push_back(&*caller_best);

  long double total = 0.0L;
  for (const Solution* c : candidates)
    total += static_cast<long double>(best_obj - c->objective);
  if (total <= 0.0L) return *caller_best;  // every candidate ties with the caller

  const long double threshold = static_cast<long double>(rand_unit(rng)) * total;
  long double acc = 0.0L;
  for (const Solution* c : candidates) {
    acc += static_cast<long double>(best_obj - c->objective);
    if (threshold < acc) return *c;
  }
  return *caller_best;  // unreachable save for rounding at the boundary
}

long long SolutionPool::diversity(const Assignment& s) const {
  std::lock_guard<std::mutex> lock(mu_);
  return diversity_against_entries(s);
}

std::size_t SolutionPool::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::vector<Solution> SolutionPool::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

void SolutionPool::set_trace(std::ostream* out) {
  std::lock_guard<std::mutex> lock(mu_);
  trace_ = out;
}

}  // namespace pbls
