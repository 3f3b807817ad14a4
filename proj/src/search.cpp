#include "pbls/search.hpp"

#include <algorithm>
#include <limits>

#include "pbls/rng.hpp"

namespace pbls {

namespace {

Int narrow_or_throw(__int128 v) {
  if (v > static_cast<__int128>(std::numeric_limits<Int>::max()) ||
      v < static_cast<__int128>(std::numeric_limits<Int>::min()))
    throw OverflowError("score does not fit in 64 bits");
  return static_cast<Int>(v);
}

}  // namespace

void SearchConfig::validate() const {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (R < 1) throw std::invalid_argument("R must be at least 1");
  if (!(inc > 1.0)) throw std::invalid_argument("inc must be greater than 1");
  if (weight_cap < 1) throw std::invalid_argument("weight cap must be positive");
  if (bms_samples < 1) throw std::invalid_argument("sample size must be positive");
  if (!(ratio_min > 0.0) || !(ratio_min <= 1.0) || !(ratio_max >= 1.0))
    throw std::invalid_argument("ratio clamp must straddle the initial ratio 1");
  if (max_steps < 0) throw std::invalid_argument("negative step budget");
}

LocalSearch::LocalSearch(const PboInstance& inst, const SearchConfig& cfg,
                         const PolarityTable* polarity)
    : inst_(&inst), cfg_(cfg), polarity_(polarity), rng_(cfg.seed) {
  cfg_.validate();
  if (polarity_ && polarity_->num_vars() < inst.num_vars)
    throw std::invalid_argument("polarity table smaller than the instance");

  const std::size_t n = static_cast<std::size_t>(inst.num_vars);
  occ_.assign(n + 1, {});
  obj_occ_.assign(n + 1, {});
  for (std::size_t c = 0; c < inst.constraints.size(); ++c)
    for (const Term& t : inst.constraints[c].terms)
      occ_[static_cast<std::size_t>(t.lit.var)].push_back({c, t.coef, t.lit.positive});
  for (const Term& t : inst.objective.terms)
    obj_occ_[static_cast<std::size_t>(t.lit.var)].push_back({t.coef, t.lit.positive});
  for (Var v = 1; v <= inst.num_vars; ++v)
    if (!obj_occ_[static_cast<std::size_t>(v)].empty()) obj_vars_.push_back(v);

  cur_ = Assignment(inst.num_vars);  // all zeros
  weight_.assign(inst.constraints.size(), 1);
  falsified_pos_.assign(inst.constraints.size(), -1);
  lhs_.assign(inst.constraints.size(), 0);
  cand_epoch_.assign(n + 1, 0);
  rebuild_caches();
}

void LocalSearch::rebuild_caches() {
  falsified_.clear();
  std::fill(falsified_pos_.begin(), falsified_pos_.end(), -1);
  for (std::size_t c = 0; c < inst_->constraints.size(); ++c) {
    lhs_[c] = inst_->constraints[c].lhs(cur_);
    if (lhs_[c] < inst_->constraints[c].degree) {
      falsified_pos_[c] = static_cast<std::ptrdiff_t>(falsified_.size());
      falsified_.push_back(c);
    }
  }
  obj_cur_ = inst_->objective.value(cur_);
}

void LocalSearch::update_falsified(std::size_t c) {
  const bool violated = lhs_[c] < inst_->constraints[c].degree;
  const std::ptrdiff_t pos = falsified_pos_[c];
  if (violated && pos < 0) {
    falsified_pos_[c] = static_cast<std::ptrdiff_t>(falsified_.size());
    falsified_.push_back(c);
  } else if (!violated && pos >= 0) {
    const std::size_t moved = falsified_.back();
    falsified_[static_cast<std::size_t>(pos)] = moved;
    falsified_pos_[moved] = pos;
    falsified_.pop_back();
    falsified_pos_[c] = -1;
  }
}

void LocalSearch::note_if_new_best() {
  if (!falsified_.empty()) return;
  window_feasible_ = true;
  if (!best_ || obj_cur_ < best_obj_) {
    best_ = cur_;
    best_obj_ = obj_cur_;
    since_improve_ = 0;
    if (on_new_best) on_new_best(cur_, obj_cur_);
  }
}

void LocalSearch::evaluate_current() { note_if_new_best(); }

Int LocalSearch::hscore(Var v) const {
  const bool nv = !cur_.get(v);
  __int128 total = 0;
  for (const ConstraintOcc& o : occ_[static_cast<std::size_t>(v)]) {
    const Int degree = inst_->constraints[o.c].degree;
    const Int flipped_lhs = lhs_[o.c] + (o.positive == nv ? o.coef : -o.coef);
    const Int pen_now = std::max<Int>(0, degree - lhs_[o.c]);
    const Int pen_then = std::max<Int>(0, degree - flipped_lhs);
    total += static_cast<__int128>(weight_[o.c]) * (pen_now - pen_then);
  }
  return narrow_or_throw(total);
}

Int LocalSearch::oscore(Var v) const {
  const bool nv = !cur_.get(v);
  // a variable can carry both an x and a ~x objective term, so accumulate the
  // delta wide even though the final value is bounded by the checked coef sums
  __int128 delta = 0;
  for (const ObjectiveOcc& o : obj_occ_[static_cast<std::size_t>(v)])
    delta += o.positive == nv ? o.coef : -o.coef;
  return narrow_or_throw(-static_cast<__int128>(obj_weight_) * delta);
}

double LocalSearch::combined_score(Var v, double w_pd) const {
  const double base = dynamic_score(v);
  return cur_.get(v) ? base / w_pd : base * w_pd;
}

double LocalSearch::combined_score(Var v) const {
  return combined_score(v, polarity_ ? polarity_->weight(v) : 1.0);
}

std::optional<Var> LocalSearch::pick_variable() {
  ++epoch_;
  cand_.clear();
  auto push = [&](Var v) {
    int& mark = cand_epoch_[static_cast<std::size_t>(v)];
    if (mark != epoch_) {
      mark = epoch_;
      cand_.push_back(v);
    }
  };
  for (std::size_t c : falsified_)
    for (const Term& t : inst_->constraints[c].terms) push(t.lit.var);
  for (Var v : obj_vars_) push(v);
  if (cand_.empty()) return std::nullopt;

  const std::size_t sample = std::min<std::size_t>(static_cast<std::size_t>(cfg_.bms_samples),
                                                   cand_.size());
  for (std::size_t i = 0; i < sample; ++i) {
    const std::size_t j = i + rand_below(rng_, cand_.size() - i);
    std::swap(cand_[i], cand_[j]);
  }

  double best_score = 0.0;
  tied_.clear();
  for (std::size_t i = 0; i < sample; ++i) {
    const double s = combined_score(cand_[i]);
    if (s <= 0.0) continue;
    if (tied_.empty() || s > best_score) {
      best_score = s;
      tied_.clear();
      tied_.push_back(cand_[i]);
    } else if (s == best_score) {
      tied_.push_back(cand_[i]);
    }
  }
  if (tied_.empty()) return std::nullopt;
  return tied_[rand_below(rng_, tied_.size())];
}

void LocalSearch::flip(Var v) {
  if (v < 1 || v > inst_->num_vars) throw std::invalid_argument("flip: variable out of range");
  const bool nv = !cur_.get(v);
  for (const ConstraintOcc& o : occ_[static_cast<std::size_t>(v)]) {
    lhs_[o.c] += o.positive == nv ? o.coef : -o.coef;
    update_falsified(o.c);
  }
  __int128 delta = 0;
  for (const ObjectiveOcc& o : obj_occ_[static_cast<std::size_t>(v)])
    delta += o.positive == nv ? o.coef : -o.coef;
  obj_cur_ = static_cast<Int>(delta + obj_cur_);  // true objective values always fit
  cur_.set(v, nv);
  ++step_count_;
  ++since_improve_;
  note_if_new_best();
}

void LocalSearch::escape_local_optimum() {
  Var v = 0;
  if (!falsified_.empty()) {
    for (std::size_t c : falsified_) weight_[c] = std::min(weight_[c] + 1, cfg_.weight_cap);
    // random falsified constraint, skipping degenerate term-free ones
    const std::size_t start = rand_below(rng_, falsified_.size());
    for (std::size_t k = 0; k < falsified_.size() && v == 0; ++k) {
      const NormalizedConstraint& c =
          inst_->constraints[falsified_[(start + k) % falsified_.size()]];
      if (!c.terms.empty()) v = c.terms[rand_below(rng_, c.terms.size())].lit.var;
    }
  } else {
    obj_weight_ = std::min(obj_weight_ + 1, cfg_.weight_cap);
    if (!obj_vars_.empty()) v = obj_vars_[rand_below(rng_, obj_vars_.size())];
  }
  if (v == 0 && inst_->num_vars > 0)
    v = 1 + static_cast<Var>(rand_below(rng_, static_cast<std::uint64_t>(inst_->num_vars)));
  if (v != 0) {
    flip(v);
  } else {
    ++step_count_;  // zero-variable instance: the step still counts
    ++since_improve_;
  }
}

void LocalSearch::update_ratio() {
  ratio_ = window_feasible_ ? ratio_ * cfg_.inc : ratio_ / cfg_.inc;
  ratio_ = std::clamp(ratio_, cfg_.ratio_min, cfg_.ratio_max);
  window_feasible_ = false;
}

void LocalSearch::restart_from(const Assignment& a) {
  set_assignment(a);
  since_improve_ = 0;
}

void LocalSearch::step() {
  if (const std::optional<Var> v = pick_variable())
    flip(*v);
  else
    escape_local_optimum();
  if (step_count_ % cfg_.K == 0) update_ratio();
}

void LocalSearch::set_assignment(const Assignment& a) {
  if (a.num_vars() != inst_->num_vars)
    throw std::invalid_argument("assignment does not match the instance");
  cur_ = a;
  rebuild_caches();
}

void LocalSearch::set_ratio(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("ratio must be positive");
  ratio_ = p;
}

void LocalSearch::set_hard_weight(std::size_t c, Int w) {
  if (c >= weight_.size()) throw std::invalid_argument("constraint index out of range");
  if (w < 1) throw std::invalid_argument("weights are positive");
  weight_[c] = w;
}

void LocalSearch::set_obj_weight(Int w) {
  if (w < 1) throw std::invalid_argument("weights are positive");
  obj_weight_ = w;
}

bool LocalSearch::check_caches() const {
  for (std::size_t c = 0; c < inst_->constraints.size(); ++c) {
    if (lhs_[c] != inst_->constraints[c].lhs(cur_)) return false;
    const bool violated = lhs_[c] < inst_->constraints[c].degree;
    if (violated != (falsified_pos_[c] >= 0)) return false;
    if (falsified_pos_[c] >= 0 &&
        falsified_[static_cast<std::size_t>(falsified_pos_[c])] != c)
      return false;
  }
  return obj_cur_ == inst_->objective.value(cur_);
}

WorkerResult run_worker(const PresolveResult& pre, const SearchConfig& cfg, SolutionPool* pool,
                        const std::atomic<bool>& stop, int worker_id,
                        const std::function<void(const Solution&)>& on_improvement) {
  if (pre.conflict) throw std::invalid_argument("run_worker needs a conflict-free presolve");
  WorkerResult out;
  LocalSearch ls(pre.simplified, cfg, pool ? &pool->polarity() : nullptr);

  std::optional<Solution> best;  // lifted, original-space objective
  ls.on_new_best = [&](const Assignment& a, Int obj) {
    Solution s;
    s.assignment = pre.lift(a);
    s.objective = checked_add(obj, pre.objective_offset);
    s.source_worker = worker_id;
    s.discovery_step = ls.step_count();
    best = s;
    ++out.stats.submissions;
    if (pool) pool->try_insert(s);
    if (on_improvement) on_improvement(s);
  };

  ls.evaluate_current();
  const bool inert = pre.simplified.num_vars == 0 ||
                     (pre.simplified.constraints.empty() && pre.simplified.objective.empty());
  while (!stop.load(std::memory_order_relaxed) && !inert) {
    if (cfg.max_steps > 0 && ls.step_count() >= cfg.max_steps) break;
    ls.step();
    if (ls.steps_since_improvement() >= cfg.R) {
      ++out.stats.restarts;
      std::optional<Solution> pick =
          pool ? pool->select_for_restart(best, ls.rng()) : best;
      if (pick && pre.consistent_with(pick->assignment))
        ls.restart_from(pick->assignment);
      else if (best)
        ls.restart_from(best->assignment);
      else
        ls.reset_stagnation();  // nowhere to restart from yet
      ls.evaluate_current();
    }
  }
  out.stats.steps = ls.step_count();
  out.best = std::move(best);
  return out;
}

}  // namespace pbls
