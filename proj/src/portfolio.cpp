#include "pbls/portfolio.hpp"

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "pbls/pool.hpp"
#include "pbls/presolve.hpp"

namespace pbls {

void PortfolioConfig::validate() const {
  if (num_workers < 1) throw std::invalid_argument("need at least one worker");
  if (!(cutoff_seconds >= 0.0)) throw std::invalid_argument("negative cutoff");
  if (pool_size < 1) throw std::invalid_argument("pool capacity must be at least 1");
  if (!(p_star >= 0.0 && p_star <= 1.0)) throw std::invalid_argument("p_star must be in [0,1]");
  if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  search.validate();
}

std::optional<Solution> aggregate_best(const std::vector<Solution>& events) {
  std::optional<Solution> best;
  for (const Solution& s : events)
    if (!best || s.objective < best->objective) best = s;
  return best;
}

RunResult run_portfolio(const PboInstance& inst, const PortfolioConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto comment = [&](const std::string& msg) {
    if (cfg.on_comment) cfg.on_comment(msg);
  };

  bool fell_back = false;
  const std::vector<AssumedLiteral> pairs =
      select_assumed_literals(cfg.num_workers, inst.num_vars, cfg.seed, &fell_back);
  if (fell_back)
    comment("fewer variables than assumption slots; assuming with replacement");

  // The master presolves sequentially before any thread starts. A conflicted
  // assumption means the opposite polarity is entailed; if that one conflicts
  // too the instance is infeasible, which local search cannot certify, so the
  // worker just runs unassumed.
  std::vector<PresolveResult> presolves;
  presolves.reserve(static_cast<std::size_t>(cfg.num_workers));
  for (int i = 0; i < cfg.num_workers; ++i) {
    if (static_cast<std::size_t>(i) < pairs.size()) {
      const AssumedLiteral a = pairs[static_cast<std::size_t>(i)];
      PresolveResult r = assume_and_propagate(inst, a);
      if (r.conflict) {
        comment("assuming " + inst.var_name(a.var) + "=" + (a.value ? "1" : "0") +
                " is contradictory; propagating the opposite polarity");
        r = assume_and_propagate(inst, {a.var, !a.value});
        if (r.conflict) {
          comment("both polarities of " + inst.var_name(a.var) +
                  " are contradictory (instance is infeasible); worker " + std::to_string(i) +
                  " runs unassumed");
          r = identity_presolve(inst);
        }
      }
      presolves.push_back(std::move(r));
    } else {
      presolves.push_back(identity_presolve(inst));
    }
  }

  SolutionPool pool(inst, cfg.pool_size, cfg.p_star, cfg.beta, cfg.epsilon);
  if (cfg.pool_trace) pool.set_trace(cfg.pool_trace);

  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable cv;
  std::optional<Solution> global_best;
  int done = 0;

  auto handle_improvement = [&](const Solution& s) {
    std::lock_guard<std::mutex> lock(mu);
    if (global_best && s.objective >= global_best->objective) return;
    global_best = s;
    if (cfg.on_improvement) cfg.on_improvement(s);
    if (cfg.target_objective && s.objective <= *cfg.target_objective) {
      stop.store(true, std::memory_order_relaxed);
      cv.notify_all();
    }
  };

  std::vector<WorkerStats> stats(static_cast<std::size_t>(cfg.num_workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(cfg.num_workers));
  for (int i = 0; i < cfg.num_workers; ++i) {
    threads.emplace_back([&, i] {
      SearchConfig sc = cfg.search;
      sc.seed = cfg.seed + static_cast<std::uint64_t>(i);
      WorkerResult r =
          run_worker(presolves[static_cast<std::size_t>(i)], sc, &pool, stop, i,
                     handle_improvement);
      std::lock_guard<std::mutex> lock(mu);
      stats[static_cast<std::size_t>(i)] = r.stats;
      if (r.best && (!global_best || r.best->objective < global_best->objective))
        global_best = std::move(r.best);  // improvements already reported this; belt and braces
      ++done;
      cv.notify_all();
    });
  }

  {
    std::unique_lock<std::mutex> lock(mu);
    const auto deadline =
        t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(cfg.cutoff_seconds));
    cv.wait_until(lock, deadline, [&] {
      return done == cfg.num_workers || stop.load(std::memory_order_relaxed);
    });
  }
  stop.store(true, std::memory_order_relaxed);
  for (std::thread& t : threads) t.join();

  RunResult out;
  out.worker_stats = std::move(stats);
  out.best = std::move(global_best);
  out.status = out.best ? RunStatus::FeasibleFound : RunStatus::Unknown;
  if (out.best) {
    // Final safety net: what we report must satisfy the instance as parsed.
    if (!inst.feasible(out.best->assignment) ||
        inst.objective.value(out.best->assignment) != out.best->objective)
      throw std::logic_error("best solution failed final validation");
  }
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace pbls
